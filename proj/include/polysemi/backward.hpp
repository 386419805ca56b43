#ifndef POLYSEMI_BACKWARD_HPP
#define POLYSEMI_BACKWARD_HPP

#include "polysemi/semigroup.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace polysemi {

struct MeasureAtom {
    cplx location;
    double weight = 0.0;
};

/// Weighted finite point cloud approximating a measure on the plane.
struct EmpiricalMeasure {
    std::vector<MeasureAtom> atoms;
    double total_mass() const;
    std::vector<cplx> locations() const;
};

enum class SampleMode { exhaustive, stochastic };

struct SampleConfig {
    cplx base_point;
    int depth = 0;
    SampleMode mode = SampleMode::exhaustive;
    long sample_count = 0;       // stochastic only
    std::uint64_t seed = 0;
};

/// Default base point for backward iteration: drawn uniformly from the
/// circle |z| = 2*R_esc with the given seed. Exceptional base points form
/// a polar (zero-area) set, so a random draw is sound almost surely.
cplx default_base_point(const GeneratorSet& G, std::uint64_t seed);

/// One-level pullback of the Dirac measure at a: unnormalized sum over
/// generators of multiplicity-weighted preimage atoms, total mass D.
EmpiricalMeasure pullback_dirac(const GeneratorSet& G, cplx a);

/// n-fold normalized pullback of delta_{base_point}. Exhaustive mode
/// carries exactly D^n multiplicity-counted leaves (weights mult/D^n);
/// stochastic mode draws sample_count i.i.d. leaves (each an n-step
/// backward walk choosing generator i with probability d_i/D then a
/// multiplicity-weighted root), so every multiplicity-counted leaf has
/// probability D^-n.
EmpiricalMeasure iterate_pullback(const GeneratorSet& G, const SampleConfig& cfg,
                                  long cap = kDefaultEnumerationCap);

/// Julia-set sampler: stochastic backward walks recording the visited
/// points at levels past burn_in. Returns about cfg.sample_count points
/// (walks of depth cfg.depth each contribute depth - burn_in points).
std::vector<cplx> julia_sample(const GeneratorSet& G, const SampleConfig& cfg,
                               int burn_in);

/// Multiplicity-counted number of depth-n preimages of a strictly inside
/// the open disc D(z, r).
long disc_count(const GeneratorSet& G, cplx a, int n, cplx z, double r,
                long cap = kDefaultEnumerationCap);

/// max(D^{n - nu/kappa + 1} * N^{nu/kappa - 1}, (D - 1/2)^n).
double card_bound_rhs(int D, int N, int kappa, int n, int nu);

/// Dyadic scale index of r relative to r0: the unique nu >= 1 with
/// r in (r0 * M_J^{-2 nu}, r0 * M_J^{-2(nu-1)}].
int dyadic_interval_index(double r, double r0, double M_J);

/// True iff some level n <= max_depth maps z outside the escape radius
/// under every word of length n (escaped branches are pruned, since they
/// stay escaped). Conservative false on depth or frontier exhaustion.
bool escapes(const GeneratorSet& G, const EscapeData& esc, cplx z, int max_depth,
             std::size_t frontier_cap = 1u << 20);

/// Disc-count bound harness: searches r0 in {1, 1/2, ..., 2^-10} for the
/// largest value at which every tested (n, z, r) satisfies
/// disc_count <= card_bound_rhs, over dyadic radii down to r_min.
struct CardBoundCheck {
    double r0 = 0.0;          // largest calibrated value, 0 if none clean
    int kappa = 0;
    double M_J = 0.0;
    double lambda = 0.0;
    long tested = 0;          // (n, z, r) triples checked at the calibrated r0
    long violations = 0;      // violations at the calibrated r0
};

CardBoundCheck calibrate_card_bound(const GeneratorSet& G, cplx a,
                                    std::span<const cplx> julia_sample,
                                    std::span<const cplx> disc_centers, int max_n,
                                    double r_min = 0x1p-10);

} // namespace polysemi

#endif
