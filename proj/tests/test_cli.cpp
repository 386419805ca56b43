#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polysemi/raster.hpp"
#include "polysemi/serialize.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polysemi;
namespace fs = std::filesystem;

namespace {

const std::string cli = POLYSEMI_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("polysemi_test_" + std::to_string(std::rand()) +
                std::to_string(std::chrono::steady_clock::now().time_since_epoch().count() % 100000));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run_cli(const std::string& args) {
    const int rc = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string z2_json = "[[0,0],[0,0],[1,0]]";
const std::string z4_json = "[[0,0],[0,0],[0,0],[0,0],[1,0]]";
const std::string zm1sq_json = "[[1,0],[-2,0],[1,0]]";

} // namespace

TEST_CASE("julia raster of z^2 lights only pixels near the unit circle") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + R"(],
      "seed": 42, "depth": 20, "burn_in": 10, "sample_count": 20000,
      "grid": {"origin": [-2,-2], "spacing": 0.0078125, "rows": 512, "cols": 512}
    })");
    REQUIRE(run_cli("julia --config " + (tmp.path / "cfg.json").string() + " --out " +
                    (tmp.path / "out").string()) == 0);

    const std::string pgm = read_file(tmp.path / "out" / "julia.pgm");
    std::istringstream in(pgm);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    REQUIRE(magic == "P5");
    REQUIRE(w == 512);
    REQUIRE(h == 512);
    REQUIRE(maxval == 255);
    in.get(); // single whitespace before binary data
    std::vector<char> px(static_cast<std::size_t>(w) * h);
    in.read(px.data(), static_cast<std::streamsize>(px.size()));
    REQUIRE(in.gcount() == static_cast<std::streamsize>(px.size()));

    const double sp = 0.0078125;
    long bright = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (static_cast<unsigned char>(px[static_cast<std::size_t>(r) * w + c]) == 0)
                continue;
            ++bright;
            const double re = -2.0 + (c + 0.5) * sp;
            const double im = -2.0 + (h - 1 - r + 0.5) * sp;
            CHECK(std::abs(std::hypot(re, im) - 1.0) <= 2.0 * sp);
        }
    }
    CHECK(bright > 200); // the circle is actually drawn
}

TEST_CASE("mingen reduces {z^2, z^4, (z-1)^2}") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json",
               R"({"generators": [)" + z2_json + "," + z4_json + "," + zm1sq_json +
                   R"(], "seed": 1})");
    REQUIRE(run_cli("mingen --config " + (tmp.path / "cfg.json").string() + " --out " +
                    tmp.path.string()) == 0);
    const auto j = nlohmann::json::parse(read_file(tmp.path / "mingen.json"));
    REQUIRE(j["count"] == 2);
    REQUIRE(j["generators"].size() == 2);
    CHECK(j["generators"][0] == nlohmann::json::parse(z2_json));
    CHECK(j["generators"][1] == nlohmann::json::parse(zm1sq_json));
}

TEST_CASE("malformed config exits 2 with no artifacts") {
    TempDir tmp;
    write_file(tmp.path / "bad.json", "{\"generators\": [[[0,0],");
    const fs::path out = tmp.path / "out";
    CHECK(run_cli("measure --config " + (tmp.path / "bad.json").string() + " --out " +
                  out.string()) == 2);
    CHECK_FALSE(fs::exists(out));

    write_file(tmp.path / "schema.json", R"({"generators": []})");
    CHECK(run_cli("measure --config " + (tmp.path / "schema.json").string()) == 2);

    CHECK(run_cli("measure --config " + (tmp.path / "missing.json").string()) == 2);
}

TEST_CASE("inadmissible generators exit 3") {
    TempDir tmp;
    // 0.5z + 1 has no attracting fixed point at infinity
    write_file(tmp.path / "cfg.json",
               R"({"generators": [[[1,0],[0.5,0]],)" + z2_json + R"(]})");
    CHECK(run_cli("measure --config " + (tmp.path / "cfg.json").string() + " --out " +
                  (tmp.path / "out").string()) == 3);

    write_file(tmp.path / "cfg2.json", R"({"generators": [[[0,0],[3,0]]]})");
    CHECK(run_cli("measure --config " + (tmp.path / "cfg2.json").string() + " --out " +
                  (tmp.path / "out").string()) == 3);
}

TEST_CASE("measure at depth zero emits the Dirac mass CSV") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + R"(],
      "depth": 0, "base_point": [0, 0], "sample_count": 1
    })");
    REQUIRE(run_cli("measure --config " + (tmp.path / "cfg.json").string() + " --out " +
                    tmp.path.string()) == 0);
    const std::string csv = read_file(tmp.path / "measure.csv");
    CHECK(csv == "re,im,weight\n0,0,1\n");
}

TEST_CASE("measure CSV round trips exactly") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + R"(],
      "depth": 6, "base_point": [0.3, 0.7], "sample_count": 1
    })");
    REQUIRE(run_cli("measure --config " + (tmp.path / "cfg.json").string() + " --out " +
                    tmp.path.string()) == 0);
    const std::string csv = read_file(tmp.path / "measure.csv");
    const EmpiricalMeasure mu = measure_from_csv(csv);
    CHECK(mu.atoms.size() == 64);
    CHECK(measure_to_csv(mu) == csv);
}

TEST_CASE("capacity report JSON carries the exact Robin constant") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [[[0,0],[0,0],[2,0]]],
      "seed": 9, "depth": 20, "burn_in": 10, "sample_count": 2048,
      "leja_count": 128, "z0": [0.5, 0]
    })");
    REQUIRE(run_cli("capacity --config " + (tmp.path / "cfg.json").string() +
                    " --out " + tmp.path.string()) == 0);
    const auto j = nlohmann::json::parse(read_file(tmp.path / "capacity.json"));
    CHECK(std::abs(j["robin_F"].get<double>() - std::log(2.0)) < 1e-15);
    CHECK(std::abs(j["lower_bound"].get<double>() - 0.5) < 1e-15);
    CHECK(std::abs(j["cap_estimate"].get<double>() - 0.5) < 0.03);
    CHECK(j["condition_flags"]["all_deg_ge_2"] == true);
}

TEST_CASE("green stats report the field range") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + R"(],
      "seed": 4, "depth": 14,
      "grid": {"origin": [-3,-3], "spacing": 0.25, "rows": 25, "cols": 25}
    })");
    REQUIRE(run_cli("green --config " + (tmp.path / "cfg.json").string() + " --out " +
                    tmp.path.string()) == 0);
    const auto j = nlohmann::json::parse(read_file(tmp.path / "green_stats.json"));
    CHECK(j["depth"] == 14);
    // the window corner reaches |z| = 3 sqrt 2, where G ~ log|z|
    CHECK(j["max"].get<double>() ==
          doctest::Approx(std::log(3.0 * std::sqrt(2.0))).epsilon(0.02));
    CHECK(fs::exists(tmp.path / "green.pgm"));
}

TEST_CASE("verify artifacts are byte-identical across runs") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + "," + zm1sq_json + R"(],
      "seed": 31, "depth": 8, "sample_count": 20000, "burn_in": 4,
      "grid": {"origin": [-1.5,-1.5], "spacing": 0.17391304347826086, "rows": 24, "cols": 24}
    })");
    const std::string cfg = (tmp.path / "cfg.json").string();
    REQUIRE(run_cli("verify --config " + cfg + " --out " + (tmp.path / "a").string()) == 0);
    REQUIRE(run_cli("verify --config " + cfg + " --out " + (tmp.path / "b").string()) == 0);
    for (const std::string name :
         {"verify.json", "measure.csv", "julia.pgm", "identity_residual.pgm"}) {
        const std::string a = read_file(tmp.path / "a" / name);
        const std::string b = read_file(tmp.path / "b" / name);
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
    // and the checks themselves all passed
    const auto j = nlohmann::json::parse(read_file(tmp.path / "a" / "verify.json"));
    for (const auto& rep : j["reports"]) CHECK(rep["passed"] == true);
}

TEST_CASE("render_points bins a single atom into exactly one pixel") {
    GridSpec grid;
    grid.origin = {-1.0, -1.0};
    grid.spacing = 2.0 / 32;
    grid.rows = 32;
    grid.cols = 32;
    const std::vector<cplx> one{cplx{0.01, 0.01}};
    const RasterImage img = render_points(one, grid);
    long lit = 0;
    for (auto p : img.pixels) lit += p > 0;
    CHECK(lit == 1);

    const RasterImage blank = render_points({}, grid);
    for (auto p : blank.pixels) CHECK(p == 0);
}

TEST_CASE("render_field maps -log|z| to a monotone radial ramp") {
    GridField field;
    field.origin = {-2.0, -2.0};
    field.spacing = 4.0 / 31;
    field.rows = 32;
    field.cols = 32;
    field.values.resize(32 * 32);
    field.singular.assign(32 * 32, 0);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c) {
            const cplx z = field.node(r, c);
            const double az = std::abs(z);
            if (az < 0.5) {
                field.singular[field.index(r, c)] = 1;
                field.values[field.index(r, c)] =
                    std::numeric_limits<double>::quiet_NaN();
            } else {
                field.values[field.index(r, c)] = -std::log(az);
            }
        }
    const RasterImage img = render_field(field);
    // along the positive real axis of the middle row, intensity decreases
    // outward (larger |z| -> smaller -log|z| -> darker)
    const int row = 15; // image row for grid row 16
    int prev = 256;
    for (int c = 21; c < 32; ++c) {
        const int v = img.pixels[static_cast<std::size_t>(row) * 32 + c];
        CHECK(v <= prev);
        prev = v;
    }
    // masked nodes carry the sentinel
    CHECK(img.pixels[static_cast<std::size_t>(15) * 32 + 15] == 255);
}

TEST_CASE("write_raster emits both P5 and P6 headers") {
    TempDir tmp;
    RasterImage img;
    img.width = 3;
    img.height = 2;
    img.channels = 1;
    img.pixels = {0, 10, 20, 30, 40, 250};
    write_raster(img, (tmp.path / "gray.pgm").string());
    const std::string pgm = read_file(tmp.path / "gray.pgm");
    CHECK(pgm.substr(0, 11) == "P5\n3 2\n255\n");
    CHECK(pgm.size() == 11 + 6);

    img.channels = 3;
    img.pixels.assign(3 * 2 * 3, 128);
    write_raster(img, (tmp.path / "color.ppm").string());
    const std::string ppm = read_file(tmp.path / "color.ppm");
    CHECK(ppm.substr(0, 11) == "P6\n3 2\n255\n");
    CHECK(ppm.size() == 11 + 18); // header plus raw bytes
}

TEST_CASE("numerical failure exits 4") {
    TempDir tmp;
    // N^depth far beyond the enumeration cap
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + "," + zm1sq_json + R"(],
      "depth": 40,
      "grid": {"origin": [-2,-2], "spacing": 0.5, "rows": 8, "cols": 8}
    })");
    CHECK(run_cli("green --config " + (tmp.path / "cfg.json").string() + " --out " +
                  (tmp.path / "out").string()) == 4);
}

TEST_CASE("unwritable output directory exits 5") {
    TempDir tmp;
    write_file(tmp.path / "cfg.json", R"({
      "generators": [)" + z2_json + R"(], "depth": 0, "base_point": [0,0], "sample_count": 1
    })");
    write_file(tmp.path / "blocker", "file, not a directory");
    CHECK(run_cli("measure --config " + (tmp.path / "cfg.json").string() + " --out " +
                  (tmp.path / "blocker" / "sub").string()) == 5);
}
