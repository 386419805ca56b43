#ifndef POLYSEMI_POLY_HPP
#define POLYSEMI_POLY_HPP

#include <complex>
#include <vector>

namespace polysemi {

using cplx = std::complex<double>;

/// Dense univariate polynomial with complex double coefficients in
/// ascending degree order. Exact-zero leading coefficients are trimmed on
/// construction, so the stored leading coefficient is nonzero unless the
/// polynomial is identically zero. Immutable after construction.
class ComplexPoly {
public:
    ComplexPoly() = default; // zero polynomial

    explicit ComplexPoly(std::vector<cplx> coeffs);

    /// c * z^k
    static ComplexPoly monomial(int k, cplx c = 1.0);

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    /// Degree of a nonzero polynomial; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const std::vector<cplx>& coeffs() const { return coeffs_; }

    /// Leading coefficient; 0 for the zero polynomial.
    cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }

    /// Horner evaluation.
    cplx operator()(cplx z) const;

    /// Horner evaluation plus a running magnitude bound sum |a_k||z|^k,
    /// used as the residual scale in the root solver.
    cplx eval_with_scale(cplx z, double& scale) const;

    bool operator==(const ComplexPoly& other) const = default;

private:
    std::vector<cplx> coeffs_;
};

ComplexPoly derivative(const ComplexPoly& p);

/// outer(inner(z)). Throws DegreeCapError if deg(outer)*deg(inner) exceeds
/// the cap; both inputs must be nonconstant or the identity.
ComplexPoly compose(const ComplexPoly& outer, const ComplexPoly& inner,
                    int degree_cap = 4096);

struct Root {
    cplx location;
    int multiplicity = 1;
};

struct RootSet {
    std::vector<Root> roots;
    int total_multiplicity() const;
};

struct RootSolveOptions {
    int max_iterations = 500;
    double residual_tol = 1e-12;              // relative to the running scale
    double cluster_radius_scale = 1e-6;       // merge radius 1e-6*(1+|root|)
};

/// All solutions of p(z) = a with multiplicities, multiplicity detected by
/// cluster merging. Simultaneous (Aberth-Ehrlich) iteration from a
/// perturbed circle at the Cauchy bound; degrees 1 and 2 use closed forms.
/// Throws SolverFailureError on nonconvergence.
RootSet roots(const ComplexPoly& p, cplx a = 0.0,
              const RootSolveOptions& opts = {});

/// Roots of p' with multiplicities; empty for degree < 2.
RootSet critical_points(const ComplexPoly& p);

/// Smallest m >= 1 such that the m-th Taylor coefficient of p at x is
/// nonzero beyond the constant term. A shifted coefficient counts as zero
/// when its magnitude is below 1e-9 times the largest shifted coefficient
/// magnitude; if every coefficient beyond the constant is below that
/// threshold the order is numerically ambiguous and
/// IndeterminateOrderError is thrown.
int local_order(const ComplexPoly& p, cplx x);

/// Taylor coefficients of p at x (coefficients of p(x + t) in t).
std::vector<cplx> taylor_shift(const ComplexPoly& p, cplx x);

/// lead * prod (z - r_i)^{m_i}; oracle-side reconstruction of a solved
/// polynomial from its root set.
ComplexPoly from_roots(cplx lead, const RootSet& rs);

/// log|p(z)| evaluated without overflow for large |z| by factoring out the
/// leading term: log|lead| + d*log|z| + log|1 + s| with s the (small)
/// lower-order correction. Requires |z| >= 1 and p nonzero.
double log_abs_eval_far(const ComplexPoly& p, cplx z);

} // namespace polysemi

#endif
