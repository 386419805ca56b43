#ifndef POLYSEMI_VERIFY_HPP
#define POLYSEMI_VERIFY_HPP

#include "polysemi/config.hpp"
#include "polysemi/serialize.hpp"

#include <vector>

namespace polysemi {

/// Artifacts produced by the verification battery, so the caller can emit
/// them alongside the report.
struct VerificationRun {
    std::vector<VerificationReport> reports;
    EmpiricalMeasure sample;          // the stochastic depth-n sample used
    std::vector<cplx> julia_points;   // Julia sample used for diagnostics
    GridField identity_residuals;
};

/// Numerical checks for one semigroup: mass conservation of the exhaustive
/// pullback, the two Robin-partial routes, the potential identity residual,
/// the disc-count bound (when more than one critical point exists), the
/// Holder mass exponent, and the capacity bounds. Tolerances are fixed
/// here, not configurable.
VerificationRun run_verification(const GeneratorSet& G, const RunConfig& cfg);

} // namespace polysemi

#endif
