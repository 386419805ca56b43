#ifndef POLYSEMI_CONFIG_HPP
#define POLYSEMI_CONFIG_HPP

#include "polysemi/potential.hpp"
#include "polysemi/semigroup.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace polysemi {

/// Parsed run configuration. Generators are coefficient arrays of [re, im]
/// pairs in ascending degree order; all randomness derives from the single
/// seed.
struct RunConfig {
    std::vector<ComplexPoly> generators;
    std::uint64_t seed = 0;
    int depth = 12;
    long sample_count = 100000;
    GridSpec grid;
    std::optional<cplx> base_point;
    std::string output_dir = ".";
    int burn_in = 8;
    double eps_j = 1e-3;
    int leja_count = 256;
    std::optional<cplx> z0;
};

/// Parse a config file. Throws ConfigError on unreadable files, JSON
/// syntax errors, or schema violations (including rows*cols > 2^24).
RunConfig load_config(const std::string& path);

} // namespace polysemi

#endif
