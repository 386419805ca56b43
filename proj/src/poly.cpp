#include "polysemi/poly.hpp"

#include "polysemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polysemi {

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

ComplexPoly ComplexPoly::monomial(int k, cplx c) {
    if (c == cplx{}) return {};
    std::vector<cplx> v(static_cast<std::size_t>(k) + 1, cplx{});
    v.back() = c;
    return ComplexPoly(std::move(v));
}

cplx ComplexPoly::operator()(cplx z) const {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

cplx ComplexPoly::eval_with_scale(cplx z, double& scale) const {
    cplx acc{};
    double s = 0.0;
    const double az = std::abs(z);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * z + *it;
        s = s * az + std::abs(*it);
    }
    scale = s;
    return acc;
}

ComplexPoly derivative(const ComplexPoly& p) {
    if (p.is_constant()) return {};
    std::vector<cplx> d(p.coeffs().size() - 1);
    for (std::size_t k = 1; k < p.coeffs().size(); ++k)
        d[k - 1] = static_cast<double>(k) * p.coeffs()[k];
    return ComplexPoly(std::move(d));
}

ComplexPoly compose(const ComplexPoly& outer, const ComplexPoly& inner, int degree_cap) {
    if (outer.is_zero()) return {};
    if (outer.is_constant()) return outer;
    if (inner.is_constant()) return ComplexPoly({outer(inner.is_zero() ? cplx{} : inner.coeffs()[0])});
    const long long target = static_cast<long long>(outer.degree()) * inner.degree();
    if (target > degree_cap)
        throw DegreeCapError("compose: result degree " + std::to_string(target) +
                             " exceeds cap " + std::to_string(degree_cap));
    // Horner in polynomial arithmetic: acc <- acc*inner + a_k.
    std::vector<cplx> acc{outer.coeffs().back()};
    std::vector<cplx> next;
    for (int k = outer.degree() - 1; k >= 0; --k) {
        next.assign(acc.size() + inner.coeffs().size() - 1, cplx{});
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < inner.coeffs().size(); ++j)
                next[i + j] += acc[i] * inner.coeffs()[j];
        next[0] += outer.coeffs()[static_cast<std::size_t>(k)];
        acc.swap(next);
    }
    return ComplexPoly(std::move(acc));
}

int RootSet::total_multiplicity() const {
    int total = 0;
    for (const auto& r : roots) total += r.multiplicity;
    return total;
}

namespace {

// Solve the monic-equivalent problem coeffs(z) = 0 by simultaneous Aberth
// iteration. coeffs has the target already subtracted from the constant term.
std::vector<cplx> aberth(const std::vector<cplx>& coeffs, const RootSolveOptions& opts) {
    const int d = static_cast<int>(coeffs.size()) - 1;
    const ComplexPoly p{std::vector<cplx>(coeffs)};
    const ComplexPoly dp = derivative(p);

    // Cauchy bound: all roots lie in |z| <= 1 + max |a_k / a_d|.
    double maxratio = 0.0;
    for (int k = 0; k < d; ++k)
        maxratio = std::max(maxratio, std::abs(coeffs[static_cast<std::size_t>(k)] / coeffs.back()));
    const double radius = std::max(0.5, 0.9 * (1.0 + maxratio));

    // Perturbed circle start: irrational-ish angle offset breaks symmetry
    // locks on polynomials like z^d - c.
    std::vector<cplx> x(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double th = 2.0 * 3.14159265358979323846 * (i + 0.25) / d + 0.5772156649 / d;
        const double r = radius * (1.0 + 1e-3 * (i % 7));
        x[static_cast<std::size_t>(i)] = {r * std::cos(th), r * std::sin(th)};
    }

    double worst_resid = 0.0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        bool all_ok = true;
        worst_resid = 0.0;
        for (int i = 0; i < d; ++i) {
            auto& xi = x[static_cast<std::size_t>(i)];
            double scale = 0.0;
            const cplx pv = p.eval_with_scale(xi, scale);
            const double resid = std::abs(pv);
            worst_resid = std::max(worst_resid, scale > 0 ? resid / scale : resid);
            if (resid <= opts.residual_tol * scale) continue;
            all_ok = false;
            cplx dv = dp(xi);
            if (dv == cplx{}) dv = 1e-30; // nudge off an exact critical point
            const cplx newton = pv / dv;
            cplx rep{};
            for (int j = 0; j < d; ++j)
                if (j != i) rep += 1.0 / (xi - x[static_cast<std::size_t>(j)]);
            const cplx denom = 1.0 - newton * rep;
            const cplx step = denom == cplx{} ? newton : newton / denom;
            xi -= step;
        }
        if (all_ok) return x;
    }
    // Accept if every residual is within a relaxed floor; multiple roots
    // stagnate above the tight tolerance without being wrong.
    if (worst_resid <= 1e6 * opts.residual_tol) return x;
    throw SolverFailureError("roots: no convergence after " +
                                 std::to_string(opts.max_iterations) +
                                 " iterations (relative residual " +
                                 std::to_string(worst_resid) + ")",
                             worst_resid);
}

RootSet cluster(std::vector<cplx> raw, double radius_scale) {
    std::sort(raw.begin(), raw.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    RootSet rs;
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        cplx sum = raw[i];
        int count = 1;
        used[i] = true;
        const double rad = radius_scale * (1.0 + std::abs(raw[i]));
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (!used[j] && std::abs(raw[j] - raw[i]) <= rad) {
                sum += raw[j];
                ++count;
                used[j] = true;
            }
        }
        rs.roots.push_back({sum / static_cast<double>(count), count});
    }
    std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) {
        return a.location.real() != b.location.real()
                   ? a.location.real() < b.location.real()
                   : a.location.imag() < b.location.imag();
    });
    return rs;
}

} // namespace

RootSet roots(const ComplexPoly& p, cplx a, const RootSolveOptions& opts) {
    if (p.degree() < 1)
        throw DegenerateGeneratorError("roots: polynomial must be nonconstant");
    std::vector<cplx> c = p.coeffs();
    c[0] -= a;

    const int d = static_cast<int>(c.size()) - 1;
    std::vector<cplx> raw;
    if (d == 1) {
        raw = {-c[0] / c[1]};
    } else if (d == 2) {
        // Stable quadratic: q = -(b + sgn(b)*sqrt(disc))/2, roots q/a, c/q.
        const cplx A = c[2], B = c[1], C = c[0];
        const cplx disc = std::sqrt(B * B - 4.0 * A * C);
        const cplx s = (std::real(std::conj(B) * disc) >= 0.0) ? disc : -disc;
        const cplx q = -0.5 * (B + s);
        if (q == cplx{}) {
            raw = {cplx{}, -B / A};
        } else {
            raw = {q / A, C / q};
        }
    } else {
        raw = aberth(c, opts);
    }
    RootSet rs = cluster(std::move(raw), opts.cluster_radius_scale);
    // Refine each cluster representative by multiplicity-adjusted Newton
    // steps, keeping a step only while it reduces the residual.
    const ComplexPoly q{std::move(c)};
    const ComplexPoly dq = derivative(q);
    for (auto& r : rs.roots) {
        double best = std::abs(q(r.location));
        for (int it = 0; it < 3; ++it) {
            const cplx dv = dq(r.location);
            if (dv == cplx{}) break;
            const cplx step = static_cast<double>(r.multiplicity) * q(r.location) / dv;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            const cplx candidate = r.location - step;
            const double resid = std::abs(q(candidate));
            if (resid >= best) break;
            r.location = candidate;
            best = resid;
        }
    }
    return rs;
}

RootSet critical_points(const ComplexPoly& p) {
    if (p.degree() < 2) return {};
    return roots(derivative(p));
}

std::vector<cplx> taylor_shift(const ComplexPoly& p, cplx x) {
    // Repeated in-place synthetic division by (z - x); after pass k the
    // slot a[k] holds the k-th Taylor coefficient at x.
    std::vector<cplx> a = p.coeffs();
    if (a.empty()) return a;
    const std::size_t n = a.size() - 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = n; j-- > k;) a[j] += x * a[j + 1];
    return a;
}

int local_order(const ComplexPoly& p, cplx x) {
    if (p.is_constant())
        throw DegenerateGeneratorError("local_order: polynomial must be nonconstant");
    const std::vector<cplx> q = taylor_shift(p, x);
    double maxmag = 0.0;
    for (const cplx& c : q) maxmag = std::max(maxmag, std::abs(c));
    const double threshold = 1e-9 * maxmag;
    for (std::size_t k = 1; k < q.size(); ++k)
        if (std::abs(q[k]) > threshold) return static_cast<int>(k);
    throw IndeterminateOrderError(
        "local_order: all Taylor coefficients beyond the constant are below "
        "the zero threshold");
}

ComplexPoly from_roots(cplx lead, const RootSet& rs) {
    std::vector<cplx> acc{lead};
    for (const auto& r : rs.roots) {
        for (int m = 0; m < r.multiplicity; ++m) {
            std::vector<cplx> next(acc.size() + 1, cplx{});
            for (std::size_t i = 0; i < acc.size(); ++i) {
                next[i + 1] += acc[i];
                next[i] -= acc[i] * r.location;
            }
            acc.swap(next);
        }
    }
    return ComplexPoly(std::move(acc));
}

double log_abs_eval_far(const ComplexPoly& p, cplx z) {
    const int d = p.degree();
    if (d < 0) throw DegenerateGeneratorError("log_abs_eval_far: zero polynomial");
    // s = sum_{k<d} (a_k/a_d) z^{k-d}, each term bounded by |a_k/a_d| for |z|>=1.
    cplx s{};
    const cplx inv = 1.0 / z;
    cplx zpow = inv;
    for (int k = d - 1; k >= 0; --k) {
        s += (p.coeffs()[static_cast<std::size_t>(k)] / p.leading()) * zpow;
        zpow *= inv;
    }
    return std::log(std::abs(p.leading())) + d * std::log(std::abs(z)) +
           std::log(std::abs(1.0 + s));
}

} // namespace polysemi
