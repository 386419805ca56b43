#include "polysemi/backward.hpp"

#include "polysemi/errors.hpp"
#include "polysemi/parallel.hpp"
#include "polysemi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polysemi {

double EmpiricalMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    return m;
}

std::vector<cplx> EmpiricalMeasure::locations() const {
    std::vector<cplx> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(a.location);
    return out;
}

cplx default_base_point(const GeneratorSet& G, std::uint64_t seed) {
    const EscapeData esc = escape_radius(G);
    Rng rng(seed, streams::kBasePoint);
    return rng.on_circle(2.0 * esc.R_esc);
}

EmpiricalMeasure pullback_dirac(const GeneratorSet& G, cplx a) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw HypothesisViolationError("pullback_dirac: base point must be finite");
    EmpiricalMeasure mu;
    for (const auto& g : G.gens)
        for (const auto& r : roots(g, a).roots)
            mu.atoms.push_back({r.location, static_cast<double>(r.multiplicity)});
    return mu;
}

namespace {

void check_leaf_cap(const GeneratorSet& G, int depth, long cap) {
    double total = 1.0;
    for (int k = 0; k < depth; ++k) {
        total *= G.D;
        if (total > static_cast<double>(cap))
            throw EnumerationCapError(
                "iterate_pullback: D^n = " + std::to_string(total) +
                " leaves exceed the enumeration cap; use stochastic mode");
    }
}

// One backward step of a stochastic walk: generator i with probability
// d_i/D, then a root of g_i(w) = x weighted by multiplicity.
cplx backward_step(const GeneratorSet& G, cplx x, Rng& rng) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw SolverFailureError("backward walk reached a non-finite point", 0.0);
    long pick = static_cast<long>(rng.uniform_index(static_cast<std::uint64_t>(G.D)));
    int gi = 0;
    while (pick >= G.degrees[static_cast<std::size_t>(gi)]) {
        pick -= G.degrees[static_cast<std::size_t>(gi)];
        ++gi;
    }
    const RootSet rs = roots(G.gens[static_cast<std::size_t>(gi)], x);
    long slot = static_cast<long>(rng.uniform_index(
        static_cast<std::uint64_t>(G.degrees[static_cast<std::size_t>(gi)])));
    for (const auto& r : rs.roots) {
        if (slot < r.multiplicity) return r.location;
        slot -= r.multiplicity;
    }
    return rs.roots.back().location;
}

} // namespace

EmpiricalMeasure iterate_pullback(const GeneratorSet& G, const SampleConfig& cfg,
                                  long cap) {
    if (!std::isfinite(cfg.base_point.real()) || !std::isfinite(cfg.base_point.imag()))
        throw HypothesisViolationError("iterate_pullback: base point must be finite");
    EmpiricalMeasure mu;

    if (cfg.mode == SampleMode::exhaustive || cfg.depth == 0) {
        check_leaf_cap(G, cfg.depth, cap);
        // Level-by-level pullback carrying multiplicity-counted weights;
        // after n levels the weights are mult/D^n and sum to one.
        std::vector<MeasureAtom> level{{cfg.base_point, 1.0}};
        std::vector<MeasureAtom> next;
        for (int k = 0; k < cfg.depth; ++k) {
            next.clear();
            next.reserve(level.size() * static_cast<std::size_t>(G.D));
            for (const auto& atom : level)
                for (const auto& g : G.gens)
                    for (const auto& r : roots(g, atom.location).roots)
                        next.push_back(
                            {r.location, atom.weight * r.multiplicity / G.D});
            level.swap(next);
        }
        mu.atoms = std::move(level);
        return mu;
    }

    if (cfg.sample_count <= 0)
        throw InsufficientDataError("iterate_pullback: stochastic mode needs a "
                                    "positive sample count");
    const double w = 1.0 / static_cast<double>(cfg.sample_count);
    mu.atoms.resize(static_cast<std::size_t>(cfg.sample_count));
    parallel_for(static_cast<std::size_t>(cfg.sample_count), [&](std::size_t i) {
        Rng rng(cfg.seed, streams::kMeasureWalk ^ static_cast<std::uint64_t>(i));
        cplx x = cfg.base_point;
        for (int k = 0; k < cfg.depth; ++k) x = backward_step(G, x, rng);
        mu.atoms[i] = {x, w};
    });
    return mu;
}

std::vector<cplx> julia_sample(const GeneratorSet& G, const SampleConfig& cfg,
                               int burn_in) {
    if (cfg.mode != SampleMode::stochastic)
        throw HypothesisViolationError("julia_sample: requires stochastic mode");
    if (burn_in < 0 || burn_in >= cfg.depth)
        throw HypothesisViolationError("julia_sample: need 0 <= burn_in < depth");
    const int per_walk = cfg.depth - burn_in;
    const long walks = (cfg.sample_count + per_walk - 1) / per_walk;
    std::vector<cplx> pts(static_cast<std::size_t>(walks * per_walk));
    parallel_for(static_cast<std::size_t>(walks), [&](std::size_t i) {
        Rng rng(cfg.seed, streams::kJuliaWalk ^ static_cast<std::uint64_t>(i));
        cplx x = cfg.base_point;
        for (int k = 0; k < cfg.depth; ++k) {
            x = backward_step(G, x, rng);
            if (k >= burn_in)
                pts[i * static_cast<std::size_t>(per_walk) +
                    static_cast<std::size_t>(k - burn_in)] = x;
        }
    });
    pts.resize(static_cast<std::size_t>(cfg.sample_count));
    return pts;
}

long disc_count(const GeneratorSet& G, cplx a, int n, cplx z, double r, long cap) {
    SampleConfig cfg;
    cfg.base_point = a;
    cfg.depth = n;
    cfg.mode = SampleMode::exhaustive;
    const EmpiricalMeasure mu = iterate_pullback(G, cfg, cap);
    double dn = 1.0;
    for (int k = 0; k < n; ++k) dn *= G.D;
    long count = 0;
    for (const auto& atom : mu.atoms)
        if (std::abs(atom.location - z) < r)
            count += static_cast<long>(std::llround(atom.weight * dn));
    return count;
}

double card_bound_rhs(int D, int N, int kappa, int n, int nu) {
    const double t = static_cast<double>(nu) / kappa;
    const double first = std::pow(D, n - t + 1.0) * std::pow(N, t - 1.0);
    const double second = std::pow(D - 0.5, n);
    return std::max(first, second);
}

int dyadic_interval_index(double r, double r0, double M_J) {
    const double x = std::log(r0 / r) / (2.0 * std::log(M_J));
    // r = r0 * M_J^{-2k} lands in interval k+1; nudge off exact boundaries.
    return std::max(1, static_cast<int>(std::floor(x - 1e-12)) + 1);
}

bool escapes(const GeneratorSet& G, const EscapeData& esc, cplx z, int max_depth,
             std::size_t frontier_cap) {
    std::vector<cplx> frontier{z};
    if (std::abs(z) > esc.R_esc) return true;
    std::vector<cplx> next;
    for (int depth = 0; depth < max_depth; ++depth) {
        next.clear();
        for (const cplx& v : frontier) {
            for (const auto& g : G.gens) {
                const cplx w = g(v);
                const double mag = std::abs(w);
                if (!(mag > esc.R_esc)) next.push_back(w); // still bounded
                if (next.size() > frontier_cap) return false;
            }
        }
        if (next.empty()) return true;
        frontier.swap(next);
    }
    return false;
}

CardBoundCheck calibrate_card_bound(const GeneratorSet& G, cplx a,
                                    std::span<const cplx> julia_sample,
                                    std::span<const cplx> disc_centers, int max_n,
                                    double r_min) {
    CardBoundCheck out;
    out.kappa = select_kappa(G);
    const EscapeData esc = with_julia_bound(escape_radius(G), G, julia_sample);
    out.M_J = esc.M_J;
    out.lambda = esc.lambda;
    if (!(esc.M_J > 1.0))
        throw HypothesisViolationError(
            "calibrate_card_bound: Julia derivative bound must exceed 1");

    std::vector<double> r0_grid;
    for (double r0 = 1.0; r0 >= r_min; r0 /= 2.0) r0_grid.push_back(r0);
    std::vector<double> radii;
    for (double r = 1.0; r >= r_min; r /= 2.0) radii.push_back(r);

    std::vector<long> violations(r0_grid.size(), 0);
    std::vector<long> tested(r0_grid.size(), 0);

    for (int n = 0; n <= max_n; ++n) {
        SampleConfig cfg;
        cfg.base_point = a;
        cfg.depth = n;
        const EmpiricalMeasure mu = iterate_pullback(G, cfg);
        double dn = 1.0;
        for (int k = 0; k < n; ++k) dn *= G.D;

        // Per center: multiplicity-weighted leaf distances sorted with a
        // running prefix sum, so each disc count is a binary search.
        std::vector<std::vector<std::pair<double, long>>> per_center(disc_centers.size());
        parallel_for(disc_centers.size(), [&](std::size_t ci) {
            auto& dist = per_center[ci];
            dist.reserve(mu.atoms.size());
            for (const auto& atom : mu.atoms)
                dist.push_back({std::abs(atom.location - disc_centers[ci]),
                                static_cast<long>(std::llround(atom.weight * dn))});
            std::sort(dist.begin(), dist.end());
            long acc = 0;
            for (auto& d : dist) {
                acc += d.second;
                d.second = acc;
            }
        });
        auto count_inside = [&](std::size_t ci, double r) -> long {
            const auto& dist = per_center[ci];
            // strictly inside the open disc
            auto it = std::lower_bound(
                dist.begin(), dist.end(), r,
                [](const std::pair<double, long>& p, double rr) { return p.first < rr; });
            if (it == dist.begin()) return 0;
            return std::prev(it)->second;
        };

        for (std::size_t g0 = 0; g0 < r0_grid.size(); ++g0) {
            const double r0 = r0_grid[g0];
            for (std::size_t ci = 0; ci < disc_centers.size(); ++ci) {
                for (double r : radii) {
                    if (r > r0) continue;
                    const int nu = dyadic_interval_index(r, r0, esc.M_J);
                    const double rhs = card_bound_rhs(G.D, G.N, out.kappa, n, nu);
                    ++tested[g0];
                    if (static_cast<double>(count_inside(ci, r)) > rhs) ++violations[g0];
                }
            }
        }
    }

    for (std::size_t g0 = 0; g0 < r0_grid.size(); ++g0) {
        if (violations[g0] == 0) {
            out.r0 = r0_grid[g0];
            out.tested = tested[g0];
            out.violations = 0;
            return out;
        }
    }
    out.r0 = 0.0;
    out.tested = tested.empty() ? 0 : tested.back();
    out.violations = violations.empty() ? 0 : violations.back();
    return out;
}

} // namespace polysemi
