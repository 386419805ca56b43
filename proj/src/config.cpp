#include "polysemi/config.hpp"

#include "polysemi/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace polysemi {

namespace {

using nlohmann::json;

cplx parse_complex(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("config: " + what + " must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig cfg;
    try {
        if (!j.contains("generators") || !j["generators"].is_array() ||
            j["generators"].empty())
            throw ConfigError("config: generators must be a nonempty array");
        for (const auto& gj : j["generators"]) {
            if (!gj.is_array() || gj.empty())
                throw ConfigError("config: each generator is a nonempty coefficient array");
            std::vector<cplx> coeffs;
            for (const auto& cj : gj) coeffs.push_back(parse_complex(cj, "coefficient"));
            cfg.generators.emplace_back(std::move(coeffs));
        }
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("depth")) cfg.depth = j["depth"].get<int>();
        if (j.contains("sample_count")) cfg.sample_count = j["sample_count"].get<long>();
        if (j.contains("burn_in")) cfg.burn_in = j["burn_in"].get<int>();
        if (j.contains("eps_j")) cfg.eps_j = j["eps_j"].get<double>();
        if (j.contains("leja_count")) cfg.leja_count = j["leja_count"].get<int>();
        if (j.contains("base_point"))
            cfg.base_point = parse_complex(j["base_point"], "base_point");
        if (j.contains("z0")) cfg.z0 = parse_complex(j["z0"], "z0");
        if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("grid")) {
            const auto& gj = j["grid"];
            cfg.grid.origin = parse_complex(gj.at("origin"), "grid.origin");
            cfg.grid.spacing = gj.at("spacing").get<double>();
            cfg.grid.rows = gj.at("rows").get<int>();
            cfg.grid.cols = gj.at("cols").get<int>();
            if (gj.contains("annulus_rmin"))
                cfg.grid.annulus_rmin = gj["annulus_rmin"].get<double>();
            if (gj.contains("annulus_rmax"))
                cfg.grid.annulus_rmax = gj["annulus_rmax"].get<double>();
        } else {
            cfg.grid.origin = {-2.0, -2.0};
            cfg.grid.spacing = 4.0 / 512;
            cfg.grid.rows = 512;
            cfg.grid.cols = 512;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: schema error: ") + e.what());
    }

    if (!(cfg.grid.spacing > 0.0)) throw ConfigError("config: grid.spacing must be > 0");
    if (cfg.grid.rows < 1 || cfg.grid.cols < 1)
        throw ConfigError("config: grid dimensions must be positive");
    if (static_cast<long long>(cfg.grid.rows) * cfg.grid.cols > (1ll << 24))
        throw ConfigError("config: rows*cols exceeds 2^24");
    if (cfg.depth < 0) throw ConfigError("config: depth must be >= 0");
    if (cfg.sample_count < 1) throw ConfigError("config: sample_count must be >= 1");
    return cfg;
}

} // namespace polysemi
