// polysemi: backward-iteration sampling, Green's-function fields, Robin
// constants, and capacity diagnostics for finitely generated polynomial
// semigroups. Artifacts are byte-stable for a fixed (config, seed).

#include "polysemi/config.hpp"
#include "polysemi/errors.hpp"
#include "polysemi/parallel.hpp"
#include "polysemi/raster.hpp"
#include "polysemi/rng.hpp"
#include "polysemi/serialize.hpp"
#include "polysemi/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace polysemi;

namespace fs = std::filesystem;

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw OutputError("cannot create output directory " + dir);
}

int run_julia(const GeneratorSet& G, const RunConfig& cfg, const std::string& dir) {
    SampleConfig sc;
    sc.base_point = cfg.base_point ? *cfg.base_point : default_base_point(G, cfg.seed);
    sc.depth = cfg.depth;
    sc.mode = SampleMode::stochastic;
    sc.sample_count = cfg.sample_count;
    sc.seed = cfg.seed;
    const std::vector<cplx> pts = julia_sample(G, sc, std::min(cfg.burn_in, cfg.depth - 1));
    write_raster(render_points(pts, cfg.grid), out_path(dir, "julia.pgm"));
    write_text_file(out_path(dir, "julia_points.csv"), points_to_csv(pts));
    return 0;
}

int run_measure(const GeneratorSet& G, const RunConfig& cfg, const std::string& dir) {
    SampleConfig sc;
    sc.base_point = cfg.base_point ? *cfg.base_point : default_base_point(G, cfg.seed);
    sc.depth = cfg.depth;
    sc.seed = cfg.seed;
    sc.sample_count = cfg.sample_count;
    double leaves = 1.0;
    for (int k = 0; k < cfg.depth; ++k) leaves *= G.D;
    sc.mode = leaves <= static_cast<double>(kDefaultEnumerationCap)
                  ? SampleMode::exhaustive
                  : SampleMode::stochastic;
    const EmpiricalMeasure mu = iterate_pullback(G, sc);
    write_text_file(out_path(dir, "measure.csv"), measure_to_csv(mu));
    write_raster(render_points(mu.locations(), cfg.grid), out_path(dir, "measure.pgm"));
    return 0;
}

int run_green(const GeneratorSet& G, const RunConfig& cfg, const std::string& dir) {
    const cplx a = cfg.base_point ? *cfg.base_point : default_base_point(G, cfg.seed);
    GridField field;
    field.origin = cfg.grid.origin;
    field.spacing = cfg.grid.spacing;
    field.rows = cfg.grid.rows;
    field.cols = cfg.grid.cols;
    const std::size_t total = static_cast<std::size_t>(field.rows) * field.cols;
    field.values.assign(total, 0.0);
    field.singular.assign(total, 0);
    parallel_for(total, [&](std::size_t idx) {
        const int row = static_cast<int>(idx) / field.cols;
        const int col = static_cast<int>(idx) % field.cols;
        const double v = green_partial(G, a, field.node(row, col), cfg.depth);
        field.values[idx] = v;
        if (!std::isfinite(v)) field.singular[idx] = 1;
    });
    write_raster(render_field(field), out_path(dir, "green.pgm"));

    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    long finite = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (!std::isfinite(field.values[i])) continue;
        lo = std::min(lo, field.values[i]);
        hi = std::max(hi, field.values[i]);
        sum += field.values[i];
        ++finite;
    }
    JsonWriter w;
    w.begin_object();
    w.field("command", std::string("green"));
    w.field("depth", cfg.depth);
    w.key("base_point").complex_value(a);
    w.field("robin_constant", robin_constant(G));
    w.field("min", lo);
    w.field("max", hi);
    w.field("mean", finite > 0 ? sum / finite : 0.0);
    w.field("finite_nodes", finite);
    w.end_object();
    write_text_file(out_path(dir, "green_stats.json"), w.str() + "\n");
    return 0;
}

int run_verify(const GeneratorSet& G, const RunConfig& cfg, const std::string& dir) {
    const VerificationRun run = run_verification(G, cfg);
    write_text_file(out_path(dir, "verify.json"),
                    reports_to_json("verify", cfg.seed, run.reports));
    write_text_file(out_path(dir, "measure.csv"), measure_to_csv(run.sample));
    write_raster(render_points(run.julia_points, cfg.grid),
                 out_path(dir, "julia.pgm"));
    if (!run.identity_residuals.values.empty())
        write_raster(render_field(run.identity_residuals),
                     out_path(dir, "identity_residual.pgm"));
    bool all = true;
    for (const auto& r : run.reports) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.details
                  << "\n";
        all = all && r.passed;
    }
    return all ? 0 : 4;
}

int run_capacity(const GeneratorSet& G, const RunConfig& cfg, const std::string& dir) {
    SampleConfig sc;
    sc.base_point = cfg.base_point ? *cfg.base_point : default_base_point(G, cfg.seed);
    sc.depth = cfg.depth;
    sc.mode = SampleMode::stochastic;
    sc.sample_count = cfg.sample_count;
    sc.seed = cfg.seed;
    const std::vector<cplx> pts = julia_sample(G, sc, std::min(cfg.burn_in, cfg.depth - 1));
    const cplx z0 = cfg.z0 ? *cfg.z0 : pts.front();
    CapacityReportOptions opts;
    opts.leja_count = cfg.leja_count;
    opts.eps_J = cfg.eps_j;
    const CapacityReport rep = capacity_report(G, pts, z0, opts);
    write_text_file(out_path(dir, "capacity.json"), capacity_report_to_json(rep));
    return 0;
}

int run_mingen(const GeneratorSet& G, const RunConfig&, const std::string& dir) {
    const GeneratorSet minimal = minimal_generating_set(G);
    write_text_file(out_path(dir, "mingen.json"), generators_to_json(minimal));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial semigroup dynamics toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir_flag;
    int threads = 0;

    const std::vector<std::string> names = {"julia",  "measure",  "green",
                                            "verify", "capacity", "mingen"};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file (JSON)")->required();
        sub->add_option("--out", out_dir_flag, "output directory (overrides config)");
        sub->add_option("--threads", threads, "worker threads (default: POLYSEMI_THREADS or hardware)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    if (threads > 0) polysemi::set_thread_count(threads);

    try {
        const RunConfig cfg = load_config(config_path);
        GeneratorSet G;
        try {
            G = validate(cfg.generators);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
        const std::string dir = out_dir_flag.empty() ? cfg.output_dir : out_dir_flag;
        try {
            ensure_out_dir(dir);
            if (command == "julia") return run_julia(G, cfg, dir);
            if (command == "measure") return run_measure(G, cfg, dir);
            if (command == "green") return run_green(G, cfg, dir);
            if (command == "verify") return run_verify(G, cfg, dir);
            if (command == "capacity") return run_capacity(G, cfg, dir);
            if (command == "mingen") return run_mingen(G, cfg, dir);
        } catch (const OutputError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 5;
        } catch (const Error& e) {
            std::cerr << "error in " << command << ": " << e.what() << "\n";
            return 4;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
