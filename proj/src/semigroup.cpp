#include "polysemi/semigroup.hpp"

#include "polysemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace polysemi {

GeneratorSet validate(std::vector<ComplexPoly> gens) {
    if (gens.empty()) throw DegenerateGeneratorError("validate: empty generator list");
    GeneratorSet G;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto& g = gens[i];
        if (g.degree() < 1)
            throw DegenerateGeneratorError("validate: generator " + std::to_string(i) +
                                           " is constant");
        if (g.degree() == 1 && std::abs(g.leading()) <= 1.0)
            throw InadmissibleGeneratorError(
                "validate: degree-one generator " + std::to_string(i) +
                " has |a| <= 1, no attracting fixed point at infinity");
        G.degrees.push_back(g.degree());
        G.D += g.degree();
    }
    if (*std::max_element(G.degrees.begin(), G.degrees.end()) < 2)
        throw MissingExpandingGeneratorError(
            "validate: no generator of degree >= 2");
    G.gens = std::move(gens);
    G.N = static_cast<int>(G.gens.size());
    G.R = static_cast<double>(G.D) / G.N;
    return G;
}

WordStream::WordStream(const GeneratorSet& G, int n, long cap) : N_(G.N), count_(1) {
    if (n < 0) throw EnumerationCapError("enumerate_words: negative length");
    double total = 1.0;
    for (int k = 0; k < n; ++k) {
        total *= N_;
        if (total > static_cast<double>(cap))
            throw EnumerationCapError(
                "enumerate_words: N^n exceeds the enumeration cap; use "
                "stochastic sampling instead");
    }
    count_ = static_cast<long>(total);
    odometer_.assign(static_cast<std::size_t>(n), 0);
}

bool WordStream::next(Word& w) {
    if (done_) return false;
    if (first_) {
        first_ = false;
        w.indices = odometer_;
        return true;
    }
    // increment from the rightmost slot (lexicographic order)
    for (std::size_t j = odometer_.size(); j-- > 0;) {
        if (++odometer_[j] < N_) {
            w.indices = odometer_;
            return true;
        }
        odometer_[j] = 0;
    }
    done_ = true;
    return false;
}

std::vector<Word> enumerate_words(const GeneratorSet& G, int n, long cap) {
    WordStream stream(G, n, cap);
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(stream.count()));
    Word w;
    while (stream.next(w)) out.push_back(w);
    return out;
}

cplx word_eval(const GeneratorSet& G, const Word& w, cplx z) {
    for (int idx : w.indices) z = G.gens[static_cast<std::size_t>(idx)](z);
    return z;
}

long long word_degree(const GeneratorSet& G, const Word& w) {
    long long d = 1;
    for (int idx : w.indices) d *= G.degrees[static_cast<std::size_t>(idx)];
    return d;
}

double word_log_abs_leading(const GeneratorSet& G, const Word& w) {
    // lead(g o f) = lead(g) * lead(f)^deg(g), accumulated right to left.
    double log_lead = 0.0;
    for (int idx : w.indices) {
        const auto& g = G.gens[static_cast<std::size_t>(idx)];
        log_lead = std::log(std::abs(g.leading())) + g.degree() * log_lead;
    }
    return log_lead;
}

int representation_bound(const GeneratorSet& G, const ComplexPoly& target) {
    const double target_mag = std::abs(target.leading());
    const long long dt = std::max(1, target.degree());

    double lambda1 = 0.0; // min |lead| over degree-one generators (> 1)
    double lambda2 = 0.0; // min |lead| over degree >= 2 generators
    int dmin2 = 0;        // min degree among degree >= 2 generators
    bool has_deg1 = false, has_deg2 = false;
    for (const auto& g : G.gens) {
        const double m = std::abs(g.leading());
        if (g.degree() == 1) {
            lambda1 = has_deg1 ? std::min(lambda1, m) : m;
            has_deg1 = true;
        } else {
            lambda2 = has_deg2 ? std::min(lambda2, m) : m;
            dmin2 = has_deg2 ? std::min(dmin2, g.degree()) : g.degree();
            has_deg2 = true;
        }
    }

    // Degree-matched words have at most m factors of degree >= 2.
    int m = 0;
    if (has_deg2) {
        long long prod = 1;
        while (prod * dmin2 <= dt) {
            prod *= dmin2;
            ++m;
        }
    }
    if (!has_deg1) return std::max(2, m + 1); // no longer degree-matched words exist

    // |lead(word)| >= lambda1^{n-m} * C with C the worst-case degree >= 2
    // contribution (lemma bound with d = max degree).
    double logC = 0.0;
    if (has_deg2 && lambda2 < 1.0) {
        const int d = *std::max_element(G.degrees.begin(), G.degrees.end());
        double geom = 0.0, pow = 1.0;
        for (int k = 0; k < m; ++k) {
            geom += pow;
            pow *= d;
        }
        logC = geom * std::log(lambda2);
    }
    const double need = std::log(std::max(target_mag, 1e-300)) - logC;
    int extra = 1;
    if (need > 0.0) extra = static_cast<int>(std::floor(need / std::log(lambda1))) + 1;
    return std::max(2, m + extra);
}

namespace {

bool poly_equal(const ComplexPoly& a, const ComplexPoly& b, double tol) {
    if (a.degree() != b.degree()) return false;
    double scale = 0.0;
    for (const cplx& c : a.coeffs()) scale = std::max(scale, std::abs(c));
    for (std::size_t k = 0; k < a.coeffs().size(); ++k)
        if (std::abs(a.coeffs()[k] - b.coeffs()[k]) > tol * std::max(scale, 1e-300))
            return false;
    return true;
}

// DFS over words of `others` (length >= 2, composed degree dividing the
// target degree) testing coefficientwise equality with the target.
bool representable(const std::vector<ComplexPoly>& others, const ComplexPoly& target,
                   int max_len, double tol, long& budget) {
    struct Frame {
        ComplexPoly value;
        int length;
    };
    std::vector<Frame> stack;
    for (const auto& g : others) {
        if (target.degree() % g.degree() == 0)
            stack.push_back({g, 1});
    }
    while (!stack.empty()) {
        if (--budget < 0)
            throw UndecidedRedundancyError(
                "minimal_generating_set: redundancy search exceeded the word cap");
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.length >= 2 && poly_equal(f.value, target, tol)) return true;
        if (f.length >= max_len) continue;
        for (const auto& g : others) {
            const long long d = static_cast<long long>(g.degree()) * f.value.degree();
            if (d > target.degree() || target.degree() % d != 0) continue;
            stack.push_back({compose(g, f.value), f.length + 1});
        }
    }
    return false;
}

} // namespace

GeneratorSet minimal_generating_set(const GeneratorSet& G, double tol, long word_cap) {
    std::vector<ComplexPoly> current;
    for (const auto& g : G.gens) {
        bool dup = false;
        for (const auto& h : current)
            if (poly_equal(g, h, tol)) dup = true;
        if (!dup) current.push_back(g);
    }

    bool changed = true;
    while (changed) {
        changed = false;
        // Canonical candidate order (largest degree, then largest |lead|)
        // so the removal sequence does not depend on input order.
        std::vector<std::size_t> order(current.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (current[a].degree() != current[b].degree())
                return current[a].degree() > current[b].degree();
            return std::abs(current[a].leading()) > std::abs(current[b].leading());
        });
        for (std::size_t pos : order) {
            std::vector<ComplexPoly> others;
            for (std::size_t j = 0; j < current.size(); ++j)
                if (j != pos) others.push_back(current[j]);
            if (others.empty()) continue;
            GeneratorSet others_set;
            try {
                others_set = validate(others);
            } catch (const Error&) {
                continue; // removal would leave no expanding generator
            }
            const int bound = representation_bound(others_set, current[pos]);
            long budget = word_cap;
            bool redundant = false;
            try {
                redundant = representable(others, current[pos], bound, tol, budget);
            } catch (const UndecidedRedundancyError&) {
                throw UndecidedRedundancyError(
                    "minimal_generating_set: redundancy of the degree-" +
                    std::to_string(current[pos].degree()) +
                    " generator (index " + std::to_string(pos) +
                    " of the working set) exceeded the word cap");
            }
            if (redundant) {
                current.erase(current.begin() + static_cast<std::ptrdiff_t>(pos));
                changed = true;
                break;
            }
        }
    }
    // Restore the input's relative order among the survivors.
    std::vector<ComplexPoly> ordered;
    for (const auto& g : G.gens)
        for (const auto& kept : current)
            if (poly_equal(g, kept, tol)) {
                bool seen = false;
                for (const auto& o : ordered)
                    if (poly_equal(o, kept, tol)) seen = true;
                if (!seen) ordered.push_back(kept);
            }
    return validate(std::move(ordered));
}

namespace {

// Smallest R >= lo with |lead|R^d - sum_{k<d}|a_k|R^k - M*R >= 0, by
// bisection against a safe upper bound.
double escape_threshold(const ComplexPoly& g, double M) {
    const int d = g.degree();
    const double lead = std::abs(g.leading());
    if (d == 1) {
        // |a||z| - |b| > M|z|  <=>  |z| > |b| / (|a| - M)
        return std::abs(g.coeffs()[0]) / (lead - M);
    }
    double coeff_sum = 0.0;
    for (int k = 0; k < d; ++k) coeff_sum += std::abs(g.coeffs()[static_cast<std::size_t>(k)]);
    auto margin = [&](double r) {
        double v = lead;
        for (int k = d - 1; k >= 0; --k)
            v = v * r - std::abs(g.coeffs()[static_cast<std::size_t>(k)]);
        return v - M * r;
    };
    double hi = std::max(1.0, std::pow((M + coeff_sum) / lead, 1.0 / (d - 1)));
    while (margin(hi) < 0.0) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

EscapeData escape_radius(const GeneratorSet& G) {
    double M = 2.0;
    for (const auto& g : G.gens)
        if (g.degree() == 1) M = std::min(M, 0.5 * (1.0 + std::abs(g.leading())));
    EscapeData esc;
    esc.M = M;
    for (const auto& g : G.gens)
        esc.R_esc = std::max(esc.R_esc, std::ceil(escape_threshold(g, M)));
    esc.R_esc = std::max(esc.R_esc, 1.0);
    return esc;
}

EscapeData with_julia_bound(EscapeData esc, const GeneratorSet& G,
                            std::span<const cplx> julia_sample) {
    double mj = 0.0;
    for (const auto& g : G.gens) {
        const ComplexPoly dg = derivative(g);
        for (const cplx& z : julia_sample) mj = std::max(mj, std::abs(dg(z)));
    }
    esc.M_J = mj;
    esc.lambda = mj > 1.0 ? std::log(G.R) / std::log(mj) : 0.0;
    return esc;
}

CriticalData critical_sets(const GeneratorSet& G, std::span<const cplx> julia_sample,
                           double eps_J) {
    CriticalData cd;
    for (const auto& g : G.gens) {
        for (const auto& r : critical_points(g).roots) {
            bool known = false;
            for (const cplx& c : cd.c_star)
                if (std::abs(c - r.location) <= 1e-9 * (1.0 + std::abs(c))) known = true;
            if (!known) cd.c_star.push_back(r.location);
        }
    }
    std::sort(cd.c_star.begin(), cd.c_star.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (const cplx& c : cd.c_star) {
        for (const cplx& z : julia_sample) {
            if (std::abs(z - c) <= eps_J) {
                cd.c_julia.push_back(c);
                break;
            }
        }
    }
    if (cd.c_star.size() > 1) cd.kappa = select_kappa(G);
    return cd;
}

int select_kappa(const GeneratorSet& G) {
    std::vector<cplx> c_star;
    for (const auto& g : G.gens)
        for (const auto& r : critical_points(g).roots) {
            bool known = false;
            for (const cplx& c : c_star)
                if (std::abs(c - r.location) <= 1e-9 * (1.0 + std::abs(c))) known = true;
            if (!known) c_star.push_back(r.location);
        }
    if (c_star.size() <= 1)
        throw HypothesisViolationError(
            "select_kappa: needs more than one distinct critical point");

    const double bound = G.D - 0.5;
    for (int kappa = 1; kappa <= 64; ++kappa) {
        bool ok = true;
        for (const cplx& x : c_star) {
            double lhs = 0.0;
            for (const auto& g : G.gens) {
                const cplx dv = derivative(g)(x);
                const bool critical =
                    std::abs(dv) <= 1e-9 * (1.0 + std::abs(g.leading()));
                if (critical)
                    lhs += local_order(g, x);
                else
                    lhs += std::pow(G.R, 1.0 / kappa);
            }
            if (lhs > bound) {
                ok = false;
                break;
            }
        }
        if (ok) return kappa;
    }
    throw HypothesisViolationError("select_kappa: no kappa <= 64 satisfies the bound");
}

namespace {

// True when every generator has the form B(z-a)^m + a.
bool common_center_form(const GeneratorSet& G, cplx a, double tol) {
    for (const auto& g : G.gens) {
        const std::vector<cplx> t = taylor_shift(g, a);
        // Expect t = {a, 0, ..., 0, B}.
        double scale = 0.0;
        for (const cplx& c : t) scale = std::max(scale, std::abs(c));
        if (std::abs(t[0] - a) > tol * std::max(1.0, scale)) return false;
        for (std::size_t k = 1; k + 1 < t.size(); ++k)
            if (std::abs(t[k]) > tol * std::max(1.0, scale)) return false;
    }
    return true;
}

// Grow the preimage orbit of a to the given depth, merging nearby points.
// Returns (points, closed) where closed means no new point appeared at some
// depth (so the orbit is finite).
std::pair<std::vector<cplx>, bool> preimage_orbit(const GeneratorSet& G, cplx a,
                                                  int depth, std::size_t size_cap) {
    std::vector<cplx> all{a};
    std::vector<cplx> frontier{a};
    auto known = [&](cplx z) {
        for (const cplx& w : all)
            if (std::abs(w - z) <= 1e-7 * (1.0 + std::abs(w))) return true;
        return false;
    };
    for (int level = 0; level < depth; ++level) {
        std::vector<cplx> fresh;
        for (const cplx& x : frontier) {
            for (const auto& g : G.gens) {
                for (const auto& r : roots(g, x).roots) {
                    if (!known(r.location)) {
                        all.push_back(r.location);
                        fresh.push_back(r.location);
                    }
                }
            }
        }
        if (fresh.empty()) return {all, true};
        if (all.size() > size_cap) return {all, false};
        frontier = std::move(fresh);
    }
    return {all, false};
}

} // namespace

MainConditionResult check_main_condition(const GeneratorSet& G,
                                         std::span<const cplx> julia_sample,
                                         double eps_J) {
    const GeneratorSet GS = minimal_generating_set(G);
    const CriticalData cd = critical_sets(GS, julia_sample, eps_J);
    if (cd.c_star.size() != 1)
        return {true, "condition holds: critical set C* has " +
                          std::to_string(cd.c_star.size()) + " points"};
    if (cd.c_julia.empty())
        return {true, "condition holds: the single critical point is not within " +
                          std::to_string(eps_J) + " of the Julia sample"};

    const cplx a = cd.c_star[0];
    if (common_center_form(GS, a, 1e-9))
        return {false,
                "condition fails: all minimal generators have the form "
                "B(z-a)^m + a, so the shared critical point is exceptional"};

    const auto [orbit, closed] = preimage_orbit(GS, a, 6, 4096);
    if (closed)
        return {false, "condition fails: preimage orbit of the critical point is "
                       "finite (" +
                           std::to_string(orbit.size()) + " points)"};
    return {true,
            "condition holds: no common-center certificate and the preimage orbit "
            "keeps growing (" +
                std::to_string(orbit.size()) +
                " points at probe depth 6; exceptionality certificate absent, probe "
                "evidence only)"};
}

} // namespace polysemi
