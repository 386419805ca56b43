#include "polysemi/verify.hpp"

#include "polysemi/errors.hpp"

#include <algorithm>
#include <cmath>

namespace polysemi {

namespace {

VerificationReport mass_conservation_check(const GeneratorSet& G, cplx base,
                                           int depth) {
    VerificationReport rep;
    rep.name = "mass_conservation";
    rep.tolerance = 1e-12;
    SampleConfig cfg;
    cfg.base_point = base;
    cfg.depth = depth;
    const EmpiricalMeasure mu = iterate_pullback(G, cfg);
    double leaves = 0.0, dn = 1.0;
    for (int k = 0; k < depth; ++k) dn *= G.D;
    for (const auto& a : mu.atoms) leaves += a.weight * dn;
    rep.observed = std::abs(mu.total_mass() - 1.0);
    const bool leaf_ok = std::llround(leaves) == static_cast<long long>(dn);
    rep.passed = rep.observed <= rep.tolerance && leaf_ok;
    rep.details = "depth " + std::to_string(depth) + ", " +
                  std::to_string(static_cast<long long>(dn)) +
                  " multiplicity-counted leaves";
    return rep;
}

VerificationReport robin_routes_check(const GeneratorSet& G, int max_n) {
    VerificationReport rep;
    rep.name = "robin_partial_two_routes";
    rep.tolerance = 1e-9;
    double worst = 0.0;
    for (int n = 1; n <= max_n; ++n)
        worst = std::max(worst, std::abs(robin_partial_direct(G, n) -
                                         robin_partial_closed(G, n)));
    rep.observed = worst;
    rep.passed = worst <= rep.tolerance;
    rep.details = "direct enumeration vs closed form, n <= " + std::to_string(max_n);
    return rep;
}

VerificationReport identity_check(const IdentityReport& ir, double tol) {
    VerificationReport rep;
    rep.name = "potential_identity_residual";
    rep.tolerance = tol;
    rep.observed = ir.max_residual;
    const double finite_frac =
        ir.unmasked_nodes > 0
            ? static_cast<double>(ir.finite_nodes) / ir.unmasked_nodes
            : 0.0;
    rep.passed = ir.max_residual <= tol && finite_frac >= 0.95;
    rep.details = "depth " + std::to_string(ir.depth) + ", " +
                  std::to_string(ir.finite_nodes) + "/" +
                  std::to_string(ir.unmasked_nodes) + " finite unmasked nodes";
    return rep;
}

VerificationReport card_bound_check(const GeneratorSet& G, cplx a,
                                    std::span<const cplx> julia_pts, int max_n) {
    VerificationReport rep;
    rep.name = "disc_count_bound";
    rep.tolerance = 0.0;
    std::vector<cplx> centers;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            centers.push_back({-1.5 + 4.0 * i / 10.0, -1.5 + 4.0 * j / 10.0});
    try {
        const CardBoundCheck cc =
            calibrate_card_bound(G, a, julia_pts, centers, max_n);
        rep.observed = static_cast<double>(cc.violations);
        rep.passed = cc.r0 > 0.0 && cc.violations == 0;
        rep.details = "kappa " + std::to_string(cc.kappa) + ", calibrated r0 " +
                      fmt17(cc.r0) + ", " + std::to_string(cc.tested) +
                      " (n,z,r) triples";
    } catch (const HypothesisViolationError& e) {
        rep.passed = true;
        rep.details = std::string("skipped: ") + e.what();
    }
    return rep;
}

VerificationReport holder_check(const EmpiricalMeasure& mu) {
    VerificationReport rep;
    rep.name = "holder_mass_exponent";
    rep.tolerance = 0.0;
    std::vector<cplx> centers;
    for (std::size_t i = 0; i < mu.atoms.size() && centers.size() < 24;
         i += std::max<std::size_t>(1, mu.atoms.size() / 24))
        centers.push_back(mu.atoms[i].location);
    std::vector<double> radii;
    for (int k = 2; k <= 12; ++k) radii.push_back(std::pow(2.0, -k));
    const double alpha = holder_mass_estimate(mu, centers, radii);
    rep.observed = alpha;
    rep.passed = alpha > 0.0;
    rep.details = "fitted mass exponent over dyadic radii";
    return rep;
}

VerificationReport capacity_check(const CapacityReport& cr) {
    VerificationReport rep;
    rep.name = "capacity_bounds";
    rep.tolerance = 0.0;
    rep.observed = cr.cap_estimate;
    const bool hypotheses = cr.orbit_unbounded && cr.orbit_nondense &&
                            cr.all_deg_ge_2 && cr.main_condition;
    // The strict bound is only expected under the hypotheses; otherwise the
    // check records the estimates without judging them.
    rep.passed = !hypotheses || (cr.cap_exceeds_bound && cr.diam_exceeds_bound);
    rep.details = "lower bound " + fmt17(cr.lower_bound) + ", estimate " +
                  fmt17(cr.cap_estimate) +
                  (hypotheses ? " (hypotheses hold)" : " (hypotheses not all met)");
    return rep;
}

} // namespace

VerificationRun run_verification(const GeneratorSet& G, const RunConfig& cfg) {
    VerificationRun run;

    const cplx base =
        cfg.base_point ? *cfg.base_point : default_base_point(G, cfg.seed);

    SampleConfig stoch;
    stoch.base_point = base;
    stoch.depth = cfg.depth;
    stoch.mode = SampleMode::stochastic;
    stoch.sample_count = cfg.sample_count;
    stoch.seed = cfg.seed;

    run.sample = iterate_pullback(G, stoch);
    run.julia_points = julia_sample(G, stoch, std::min(cfg.burn_in, cfg.depth - 1));

    run.reports.push_back(mass_conservation_check(G, base, std::min(cfg.depth, 6)));
    run.reports.push_back(robin_routes_check(G, 8));

    const IdentityReport ir = verify_identity(G, stoch, cfg.grid);
    run.identity_residuals = ir.residuals;
    run.reports.push_back(identity_check(ir, 0.05));

    cplx a_card = base;
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& p : run.julia_points) {
        // disc-count base point should sit on the Julia set; take the
        // sampled point closest to the set's centroid for determinism
        const double d = std::abs(p);
        if (d < best) {
            best = d;
            a_card = p;
        }
    }
    run.reports.push_back(card_bound_check(G, a_card, run.julia_points,
                                           std::min(cfg.depth, 5)));
    run.reports.push_back(holder_check(run.sample));

    const cplx z0 = cfg.z0 ? *cfg.z0 : run.julia_points.front();
    CapacityReportOptions copts;
    copts.leja_count = cfg.leja_count;
    copts.eps_J = cfg.eps_j;
    run.reports.push_back(capacity_check(capacity_report(G, run.julia_points, z0, copts)));
    return run;
}

} // namespace polysemi
