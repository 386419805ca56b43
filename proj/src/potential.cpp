#include "polysemi/potential.hpp"

#include "polysemi/errors.hpp"
#include "polysemi/parallel.hpp"
#include "polysemi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace polysemi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Word-orbit value: exact complex while representable, log-magnitude once
// the modulus passes the switch threshold. Beyond the threshold the
// dropped lower-order and base-point corrections are below 1e-14
// relative, and composing through a polynomial only needs
// log|g(v)| = log|lead| + deg * log|v|.
constexpr double kEscapeSwitch = 1e15;

struct OrbitVal {
    cplx z;
    double logmag = 0.0;
    bool escaped = false;
};

OrbitVal orbit_step(const ComplexPoly& g, const OrbitVal& v) {
    if (v.escaped)
        return {cplx{}, std::log(std::abs(g.leading())) + g.degree() * v.logmag, true};
    const cplx w = g(v.z);
    const double mag = std::abs(w);
    if (std::isfinite(mag) && mag <= kEscapeSwitch) return {w, 0.0, false};
    if (std::isfinite(mag)) return {cplx{}, std::log(mag), true};
    // Evaluation overflowed in one step; recover via the far-field form.
    return {cplx{}, log_abs_eval_far(g, v.z), true};
}

double log_abs_minus(const OrbitVal& v, cplx a) {
    if (v.escaped) return v.logmag; // |v - a| = |v| to ~1e-15 relative
    const double d = std::abs(v.z - a);
    return d == 0.0 ? -kInf : std::log(d);
}

} // namespace

double log_potential(const EmpiricalMeasure& mu, cplx z) {
    double acc = 0.0;
    for (const auto& atom : mu.atoms) {
        const double d = std::abs(z - atom.location);
        if (d == 0.0) return kInf;
        acc -= atom.weight * std::log(d);
    }
    return acc;
}

double energy(const EmpiricalMeasure& mu) {
    if (mu.atoms.size() < 2)
        throw InsufficientDataError("energy: need at least two atoms");
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < mu.atoms.size(); ++j) {
            const double d = std::abs(mu.atoms[i].location - mu.atoms[j].location);
            if (d == 0.0) return kInf;
            acc -= 2.0 * mu.atoms[i].weight * mu.atoms[j].weight * std::log(d);
        }
    }
    return acc;
}

double green_partial(const GeneratorSet& G, cplx a, cplx z, int n, long cap) {
    double words = 1.0;
    for (int k = 0; k < n; ++k) {
        words *= G.N;
        if (words > static_cast<double>(cap))
            throw EnumerationCapError("green_partial: N^n exceeds the enumeration cap");
    }
    std::vector<OrbitVal> level{{z, 0.0, false}};
    std::vector<OrbitVal> next;
    for (int k = 0; k < n; ++k) {
        next.clear();
        next.reserve(level.size() * static_cast<std::size_t>(G.N));
        for (const auto& v : level)
            for (const auto& g : G.gens) next.push_back(orbit_step(g, v));
        level.swap(next);
    }
    double sum = 0.0;
    for (const auto& v : level) {
        const double term = log_abs_minus(v, a);
        if (term == -kInf) return -kInf;
        sum += term;
    }
    double dn = 1.0;
    for (int k = 0; k < n; ++k) dn *= G.D;
    return sum / dn;
}

double robin_constant(const GeneratorSet& G) {
    double log_a = 0.0;
    for (const auto& g : G.gens) log_a += std::log(std::abs(g.leading()));
    return log_a / (G.D - G.N);
}

double robin_partial_direct(const GeneratorSet& G, int n, long cap) {
    WordStream stream(G, n, cap);
    Word w;
    double sum = 0.0;
    while (stream.next(w)) sum += word_log_abs_leading(G, w);
    double dn = 1.0;
    for (int k = 0; k < n; ++k) dn *= G.D;
    return sum / dn;
}

double robin_partial_closed(const GeneratorSet& G, int n) {
    double log_a = 0.0;
    for (const auto& g : G.gens) log_a += std::log(std::abs(g.leading()));
    const double ratio = static_cast<double>(G.N) / G.D;
    return (1.0 - std::pow(ratio, n)) / (G.D - G.N) * log_a;
}

IdentityReport verify_identity(const GeneratorSet& G, const SampleConfig& cfg,
                               const GridSpec& grid) {
    IdentityReport rep;
    rep.depth = cfg.depth;

    // Independent stochastic sample for the potential side and an
    // independently drawn base point for the Green side.
    Rng base_rng(cfg.seed, streams::kMeasureBase);
    Rng green_rng(cfg.seed, streams::kGreenBase);
    const EscapeData esc = escape_radius(G);
    rep.measure_base = base_rng.on_circle(2.0 * esc.R_esc);
    rep.green_base = green_rng.on_circle(2.0 * esc.R_esc);

    SampleConfig walk_cfg = cfg;
    walk_cfg.mode = SampleMode::stochastic;
    walk_cfg.base_point = rep.measure_base;
    const EmpiricalMeasure mu = iterate_pullback(G, walk_cfg);

    {
        // The identity is only guaranteed under the critical-point
        // hypothesis; warn and continue otherwise. The sampled leaves
        // stand in for the Julia set.
        std::vector<cplx> probe;
        for (std::size_t i = 0; i < mu.atoms.size() && probe.size() < 2000;
             i += std::max<std::size_t>(1, mu.atoms.size() / 2000))
            probe.push_back(mu.atoms[i].location);
        const MainConditionResult mc = check_main_condition(G, probe);
        if (!mc.holds)
            std::fprintf(stderr,
                         "verify_identity: critical-point hypothesis fails (%s); "
                         "residuals may not converge\n",
                         mc.explanation.c_str());
    }

    const double f_g = robin_constant(G);

    GridField field;
    field.origin = grid.origin;
    field.spacing = grid.spacing;
    field.rows = grid.rows;
    field.cols = grid.cols;
    const std::size_t total = static_cast<std::size_t>(grid.rows) * grid.cols;
    field.values.assign(total, std::numeric_limits<double>::quiet_NaN());
    field.singular.assign(total, 1);

    parallel_for(total, [&](std::size_t idx) {
        const int row = static_cast<int>(idx) / grid.cols;
        const int col = static_cast<int>(idx) % grid.cols;
        const cplx z = field.node(row, col);
        const double az = std::abs(z);
        if (az < grid.annulus_rmin || az > grid.annulus_rmax) return;
        // mask nodes within one spacing of a sampled atom
        for (const auto& atom : mu.atoms)
            if (std::abs(z - atom.location) < grid.spacing) return;
        const double u = log_potential(mu, z);
        const double g_n = green_partial(G, rep.green_base, z, cfg.depth);
        field.values[idx] = std::abs(u + g_n - f_g);
        field.singular[idx] = 0;
    });

    double sum = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (field.singular[idx]) continue;
        ++rep.unmasked_nodes;
        const double v = field.values[idx];
        if (std::isfinite(v)) {
            ++rep.finite_nodes;
            rep.max_residual = std::max(rep.max_residual, v);
            sum += v;
        }
    }
    rep.mean_residual = rep.finite_nodes > 0 ? sum / rep.finite_nodes : kInf;
    rep.residuals = std::move(field);
    return rep;
}

std::vector<std::size_t> leja_select(std::span<const cplx> points, int m) {
    if (m < 2 || static_cast<std::size_t>(m) > points.size())
        throw InsufficientDataError("leja_select: need 2 <= m <= point count");
    const std::size_t n = points.size();
    cplx centroid{};
    for (const cplx& p : points) centroid += p;
    centroid /= static_cast<double>(n);

    std::size_t start = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(points[i] - centroid);
        if (d > best) {
            best = d;
            start = i;
        }
    }

    std::vector<std::size_t> chosen{start};
    std::vector<double> logsum(n, 0.0);
    std::vector<bool> used(n, false);
    used[start] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == start) continue;
        const double d = std::abs(points[i] - points[start]);
        logsum[i] = d == 0.0 ? -kInf : std::log(d);
    }
    while (static_cast<int>(chosen.size()) < m) {
        std::size_t pick = 0;
        double best_sum = -kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (!used[i] && logsum[i] > best_sum) {
                best_sum = logsum[i];
                pick = i;
            }
        }
        used[pick] = true;
        chosen.push_back(pick);
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double d = std::abs(points[i] - points[pick]);
            logsum[i] += d == 0.0 ? -kInf : std::log(d);
        }
    }
    return chosen;
}

double capacity_leja(std::span<const cplx> points, int m) {
    const std::vector<std::size_t> sel = leja_select(points, m);
    double log_prod = 0.0; // sum over i<j of log|x_i - x_j|
    for (std::size_t i = 1; i < sel.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double d = std::abs(points[sel[i]] - points[sel[j]]);
            if (d == 0.0) return 0.0;
            log_prod += std::log(d);
        }
    }
    const double mm = static_cast<double>(m);
    const double raw = 2.0 * log_prod / (mm * (mm - 1.0));
    const double debias = std::log(mm) / (mm - 1.0);
    return std::exp(raw - debias);
}

double f_functional(std::span<const cplx> points, std::span<const double> q_at_leja,
                    int m) {
    if (static_cast<int>(q_at_leja.size()) != m)
        throw MisalignedLengthsError(
            "f_functional: field values must align with the m Leja points");
    const double cap = capacity_leja(points, m);
    double q_mean = 0.0;
    for (double q : q_at_leja) q_mean += q;
    q_mean /= m;
    return std::log(cap) - q_mean;
}

std::optional<Word> orbit_witness(const GeneratorSet& G, const EscapeData& esc,
                                  cplx z0, int max_len, std::size_t node_cap) {
    struct Node {
        cplx value;
        Word word;
    };
    std::vector<Node> frontier{{z0, {}}};
    std::vector<Node> next;
    std::size_t visited = 0;
    for (int len = 1; len <= max_len; ++len) {
        next.clear();
        for (const auto& node : frontier) {
            for (int i = 0; i < G.N; ++i) {
                const cplx w = G.gens[static_cast<std::size_t>(i)](node.value);
                Word word = node.word;
                word.indices.push_back(i);
                if (std::abs(w) > esc.R_esc) return word;
                if (++visited > node_cap) return std::nullopt;
                next.push_back({w, std::move(word)});
            }
        }
        frontier.swap(next);
        if (frontier.empty()) break;
    }
    return std::nullopt;
}

std::optional<std::pair<cplx, double>> find_empty_disc(std::span<const cplx> points,
                                                       cplx box_lo, cplx box_hi,
                                                       int grid_res,
                                                       double min_radius) {
    if (points.empty()) return std::nullopt;
    cplx best_center{};
    double best_clearance = -1.0;
    for (int r = 0; r < grid_res; ++r) {
        for (int c = 0; c < grid_res; ++c) {
            const cplx cand{
                box_lo.real() + (box_hi.real() - box_lo.real()) * (c + 0.5) / grid_res,
                box_lo.imag() + (box_hi.imag() - box_lo.imag()) * (r + 0.5) / grid_res};
            double clearance = kInf;
            for (const cplx& p : points) clearance = std::min(clearance, std::abs(p - cand));
            if (clearance > best_clearance) {
                best_clearance = clearance;
                best_center = cand;
            }
        }
    }
    // Report half the clearance so D(center, 2*radius) is sample-free.
    if (best_clearance / 2.0 >= min_radius) return {{best_center, best_clearance / 2.0}};
    return std::nullopt;
}

std::optional<std::pair<cplx, double>> nondense_witness(const GeneratorSet& G,
                                                        const EscapeData& esc,
                                                        cplx z0, long budget) {
    if (budget <= 0) return std::nullopt;
    // Breadth-first orbit sample up to the budget.
    std::vector<cplx> orbit;
    std::vector<cplx> frontier{z0};
    std::vector<cplx> next;
    while (static_cast<long>(orbit.size()) < budget && !frontier.empty()) {
        next.clear();
        for (const cplx& v : frontier) {
            for (const auto& g : G.gens) {
                const cplx w = g(v);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
                orbit.push_back(w);
                if (static_cast<long>(orbit.size()) >= budget) break;
                // beyond the escape radius the branch only runs further out
                if (std::abs(w) <= 4.0 * esc.R_esc) next.push_back(w);
            }
            if (static_cast<long>(orbit.size()) >= budget) break;
        }
        frontier.swap(next);
    }
    if (orbit.empty()) return std::nullopt;
    const double l = 2.0 * esc.R_esc;
    return find_empty_disc(orbit, {-l, -l}, {l, l}, 24, l / 64.0);
}

CapacityReport capacity_report(const GeneratorSet& G,
                               std::span<const cplx> julia_points, cplx z0,
                               const CapacityReportOptions& opts) {
    CapacityReport rep;
    rep.robin_F = robin_constant(G);
    rep.lower_bound = std::exp(-rep.robin_F);
    rep.diam_lower = 2.0 * rep.lower_bound;

    const int m = std::min<int>(opts.leja_count, static_cast<int>(julia_points.size()));
    rep.cap_estimate = capacity_leja(julia_points, m);

    // Exact max pairwise distance over (a cap-limited subsample of) the cloud.
    std::vector<cplx> pts(julia_points.begin(), julia_points.end());
    if (pts.size() > opts.diam_subsample_cap) {
        const std::size_t stride = pts.size() / opts.diam_subsample_cap + 1;
        std::vector<cplx> sub;
        for (std::size_t i = 0; i < pts.size(); i += stride) sub.push_back(pts[i]);
        pts.swap(sub);
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            rep.diam_estimate = std::max(rep.diam_estimate, std::abs(pts[i] - pts[j]));

    const EscapeData esc = escape_radius(G);
    rep.orbit_unbounded = orbit_witness(G, esc, z0, opts.witness_max_len).has_value();
    rep.orbit_nondense = nondense_witness(G, esc, z0, opts.witness_budget).has_value();
    rep.all_deg_ge_2 = true;
    for (int d : G.degrees)
        if (d < 2) rep.all_deg_ge_2 = false;
    const MainConditionResult mc = check_main_condition(G, julia_points, opts.eps_J);
    rep.main_condition = mc.holds;
    rep.main_condition_note = mc.explanation;
    rep.cap_exceeds_bound = rep.cap_estimate > rep.lower_bound;
    rep.diam_exceeds_bound = rep.diam_estimate > rep.diam_lower;
    return rep;
}

double holder_mass_estimate(const EmpiricalMeasure& mu, std::span<const cplx> centers,
                            std::span<const double> radii, int min_count,
                            std::size_t min_atoms) {
    if (mu.atoms.size() < min_atoms)
        throw InsufficientDataError("holder_mass_estimate: too few atoms");
    if (centers.empty() || radii.size() < 2)
        throw InsufficientDataError("holder_mass_estimate: need centers and radii");

    double alpha_min = kInf;
    for (const cplx& z : centers) {
        std::vector<double> xs, ys;
        for (double r : radii) {
            double mass = 0.0;
            long count = 0;
            for (const auto& atom : mu.atoms) {
                if (std::abs(atom.location - z) < r) {
                    mass += atom.weight;
                    ++count;
                }
            }
            if (count >= min_count && mass > 0.0) {
                xs.push_back(std::log(r));
                ys.push_back(std::log(mass));
            }
        }
        if (xs.size() < 2) continue;
        // least-squares slope
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= xs.size();
        my /= ys.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        if (sxx == 0.0) continue;
        alpha_min = std::min(alpha_min, sxy / sxx);
    }
    if (!std::isfinite(alpha_min))
        throw InsufficientDataError(
            "holder_mass_estimate: no radius had enough atoms at any center");
    return alpha_min;
}

bool uniform_perfectness_check(std::span<const cplx> points, double c) {
    if (points.size() < 2)
        throw InsufficientDataError("uniform_perfectness_check: need >= 2 points");
    if (!(c > 0.0 && c < 1.0))
        throw HypothesisViolationError("uniform_perfectness_check: c must be in (0,1)");

    double diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            diam = std::max(diam, std::abs(points[i] - points[j]));
    if (diam == 0.0) return false;

    // Median nearest-neighbour spacing fixes the smallest meaningful radius.
    std::vector<double> nn(points.size(), kInf);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            if (i != j) nn[i] = std::min(nn[i], std::abs(points[i] - points[j]));
    std::vector<double> nn_sorted = nn;
    std::nth_element(nn_sorted.begin(), nn_sorted.begin() + nn_sorted.size() / 2,
                     nn_sorted.end());
    const double r_floor = 8.0 * nn_sorted[nn_sorted.size() / 2] / (1.0 - c);

    for (std::size_t i = 0; i < points.size(); ++i) {
        for (double r = diam / 2.0; r >= r_floor; r /= 2.0) {
            bool hit = false;
            for (std::size_t j = 0; j < points.size(); ++j) {
                const double d = std::abs(points[j] - points[i]);
                if (d >= c * r && d <= r) {
                    hit = true;
                    break;
                }
            }
            if (!hit) return false;
        }
    }
    return true;
}

} // namespace polysemi
