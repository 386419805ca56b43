#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polysemi/errors.hpp"
#include "polysemi/poly.hpp"
#include "polysemi/rng.hpp"

#include <cmath>

using namespace polysemi;

namespace {

// Independent oracle: naive power-sum evaluation.
cplx eval_naive(const ComplexPoly& p, cplx z) {
    cplx acc{};
    cplx zp = 1.0;
    for (const cplx& c : p.coeffs()) {
        acc += c * zp;
        zp *= z;
    }
    return acc;
}

ComplexPoly random_poly(Rng& rng, int degree) {
    std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c) v = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    if (std::abs(c.back()) < 0.2) c.back() += cplx{0.5, 0.5};
    return ComplexPoly(std::move(c));
}

const ComplexPoly z2m1({-1.0, 0.0, 1.0}); // z^2 - 1

} // namespace

TEST_CASE("eval matches direct arithmetic") {
    CHECK(z2m1(2.0) == cplx{3.0, 0.0});
    CHECK(z2m1(cplx{0.0, 1.0}) == cplx{-2.0, 0.0});
}

TEST_CASE("eval agrees with the naive power-sum oracle") {
    Rng rng(7, 0);
    const ComplexPoly p = random_poly(rng, 8);
    for (int k = 0; k < 100; ++k) {
        const cplx z{6.0 * rng.uniform() - 3.0, 6.0 * rng.uniform() - 3.0};
        const cplx a = p(z), b = eval_naive(p, z);
        CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(b)));
    }
    // and across the whole working range |z| <= 1e3, relative to the
    // magnitude scale of the evaluation
    for (int k = 0; k < 100; ++k) {
        const cplx z = rng.on_circle(1e3 * rng.uniform());
        double scale = 0.0;
        const cplx a = p.eval_with_scale(z, scale);
        CHECK(std::abs(a - eval_naive(p, z)) <= 1e-12 * scale);
    }
}

TEST_CASE("derivative basics") {
    CHECK(derivative(ComplexPoly::monomial(3)) == ComplexPoly({0.0, 0.0, 3.0}));
    CHECK(derivative(ComplexPoly({0.0, 1.0, 2.0})) == ComplexPoly({1.0, 4.0}));
    CHECK(derivative(ComplexPoly({5.0})).is_zero());
}

TEST_CASE("derivative matches central finite differences") {
    Rng rng(11, 0);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexPoly p = random_poly(rng, 2 + static_cast<int>(rng.uniform_index(6)));
        const ComplexPoly dp = derivative(p);
        for (int k = 0; k < 10; ++k) {
            const cplx z{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
            const cplx fd = (p(z + h) - p(z - h)) / (2.0 * h);
            CHECK(std::abs(dp(z) - fd) <= 1e-6);
        }
    }
}

TEST_CASE("compose expands symbolically") {
    // 2z^2 o 3z^3 = 2*(3z^3)^2 = 18 z^6; leading 2*3^2 = 18
    const ComplexPoly outer = ComplexPoly::monomial(2, 2.0);
    const ComplexPoly inner = ComplexPoly::monomial(3, 3.0);
    const ComplexPoly got = compose(outer, inner);
    CHECK(got == ComplexPoly::monomial(6, 18.0));

    const ComplexPoly ident = ComplexPoly::monomial(1);
    Rng rng(3, 0);
    const ComplexPoly p = random_poly(rng, 5);
    CHECK(compose(ident, p) == p);
}

TEST_CASE("compose degree and leading-coefficient laws") {
    Rng rng(5, 0);
    for (int k = 0; k < 50; ++k) {
        const ComplexPoly a = random_poly(rng, 1 + static_cast<int>(rng.uniform_index(4)));
        const ComplexPoly b = random_poly(rng, 1 + static_cast<int>(rng.uniform_index(4)));
        const ComplexPoly c = compose(a, b);
        CHECK(c.degree() == a.degree() * b.degree());
        const cplx expected = a.leading() * std::pow(b.leading(), a.degree());
        CHECK(std::abs(c.leading() - expected) <= 1e-10 * std::abs(expected));
    }
}

TEST_CASE("compose cap error") {
    const ComplexPoly p = ComplexPoly::monomial(80);
    CHECK_THROWS_AS(compose(p, p), DegreeCapError);
    CHECK_NOTHROW(compose(p, p, 6400));
}

TEST_CASE("roots of simple targets") {
    const ComplexPoly z2 = ComplexPoly::monomial(2);
    RootSet rs = roots(z2, 1.0);
    REQUIRE(rs.roots.size() == 2);
    CHECK(std::abs(rs.roots[0].location - cplx{-1.0}) < 1e-12);
    CHECK(std::abs(rs.roots[1].location - cplx{1.0}) < 1e-12);

    rs = roots(z2, 0.0);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
    CHECK(std::abs(rs.roots[0].location) < 1e-9);
}

TEST_CASE("roots of an expanded cubic against its known zeros") {
    // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
    const ComplexPoly p({-6.0, 11.0, -6.0, 1.0});
    const RootSet rs = roots(p, 0.0);
    REQUIRE(rs.roots.size() == 3);
    CHECK(rs.total_multiplicity() == 3);
    CHECK(std::abs(rs.roots[0].location - cplx{1.0}) < 1e-9);
    CHECK(std::abs(rs.roots[1].location - cplx{2.0}) < 1e-9);
    CHECK(std::abs(rs.roots[2].location - cplx{3.0}) < 1e-9);
}

TEST_CASE("root/reconstruct round trip") {
    Rng rng(13, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexPoly p = random_poly(rng, 2 + static_cast<int>(rng.uniform_index(6)));
        const cplx a{rng.uniform(), rng.uniform()};
        const RootSet rs = roots(p, a);
        CHECK(rs.total_multiplicity() == p.degree());
        std::vector<cplx> shifted = p.coeffs();
        shifted[0] -= a;
        const ComplexPoly target(std::move(shifted));
        const ComplexPoly rebuilt = from_roots(p.leading(), rs);
        double maxc = 0.0, maxerr = 0.0;
        for (std::size_t k = 0; k < target.coeffs().size(); ++k) {
            maxc = std::max(maxc, std::abs(target.coeffs()[k]));
            maxerr = std::max(maxerr,
                              std::abs(target.coeffs()[k] - rebuilt.coeffs()[k]));
        }
        CHECK(maxerr <= 1e-8 * maxc);
    }
}

TEST_CASE("solver failure carries the residual") {
    const ComplexPoly p({-6.0, 11.0, -6.0, 1.0});
    RootSolveOptions opts;
    opts.max_iterations = 1;
    opts.residual_tol = 1e-300; // unreachable
    try {
        roots(p, 0.0, opts);
        FAIL("expected SolverFailureError");
    } catch (const SolverFailureError& e) {
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("critical points") {
    // z^3 - 3z: critical points of 3z^2 - 3 at -1, 1
    const ComplexPoly p({0.0, -3.0, 0.0, 1.0});
    const RootSet rs = critical_points(p);
    REQUIRE(rs.roots.size() == 2);
    CHECK(std::abs(rs.roots[0].location - cplx{-1.0}) < 1e-9);
    CHECK(std::abs(rs.roots[1].location - cplx{1.0}) < 1e-9);

    const RootSet rz2 = critical_points(ComplexPoly::monomial(2));
    REQUIRE(rz2.roots.size() == 1);
    CHECK(std::abs(rz2.roots[0].location) < 1e-12);

    for (int d = 3; d <= 7; ++d) {
        const RootSet r = critical_points(ComplexPoly::monomial(d));
        REQUIRE(r.roots.size() == 1);
        CHECK(r.roots[0].multiplicity == d - 1);
    }

    CHECK(critical_points(ComplexPoly({1.0, 2.0})).roots.empty());
}

TEST_CASE("local order") {
    CHECK(local_order(ComplexPoly::monomial(2), 0.0) == 2);
    // (z-1)^3 + 5 = z^3 - 3z^2 + 3z + 4
    CHECK(local_order(ComplexPoly({4.0, 3.0, -3.0, 1.0}), 1.0) == 3);
    CHECK(local_order(ComplexPoly({0.0, -3.0, 0.0, 1.0}), 5.0) == 1);
    // badly scaled: z + 1e12 at 0 has its linear term under the threshold
    CHECK_THROWS_AS(local_order(ComplexPoly({1e12, 1.0}), 0.0),
                    IndeterminateOrderError);
}

TEST_CASE("Riemann-Hurwitz sum over critical points") {
    // z^3 - 3z: orders 2 at each of -1, 1; sum of (ord-1) = 2 = deg - 1
    const ComplexPoly p({0.0, -3.0, 0.0, 1.0});
    int sum = 0;
    for (const auto& r : critical_points(p).roots)
        sum += local_order(p, r.location) - 1;
    CHECK(sum == p.degree() - 1);

    Rng rng(17, 0);
    for (int trial = 0; trial < 25; ++trial) {
        const ComplexPoly q = random_poly(rng, 2 + static_cast<int>(rng.uniform_index(7)));
        int acc = 0;
        for (const auto& r : critical_points(q).roots)
            acc += local_order(q, r.location) - 1;
        CHECK(acc == q.degree() - 1);
    }
}

TEST_CASE("far-field log evaluation matches the direct value") {
    Rng rng(23, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexPoly p = random_poly(rng, 1 + static_cast<int>(rng.uniform_index(6)));
        const cplx z{50.0 + 100.0 * rng.uniform(), 100.0 * rng.uniform()};
        const double direct = std::log(std::abs(p(z)));
        CHECK(std::abs(log_abs_eval_far(p, z) - direct) <= 1e-10 * std::abs(direct));
    }
}
