#ifndef POLYSEMI_POTENTIAL_HPP
#define POLYSEMI_POTENTIAL_HPP

#include "polysemi/backward.hpp"
#include "polysemi/semigroup.hpp"

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace polysemi {

/// Rectangular lattice of sample points with real values. Node (row, col)
/// sits at origin + col*spacing + i*row*spacing. Non-finite values are
/// allowed only where the singular flag is set.
struct GridField {
    cplx origin;
    double spacing = 0.0;
    int rows = 0, cols = 0;
    std::vector<double> values;       // row-major, rows*cols
    std::vector<std::uint8_t> singular;

    cplx node(int row, int col) const {
        return origin + cplx{col * spacing, row * spacing};
    }
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(col);
    }
};

/// Grid evaluation window; nodes with |z| outside [annulus_rmin,
/// annulus_rmax] are masked when the bounds are set.
struct GridSpec {
    cplx origin;
    double spacing = 0.0;
    int rows = 0, cols = 0;
    double annulus_rmin = 0.0;
    double annulus_rmax = std::numeric_limits<double>::infinity();
};

/// Discrete logarithmic potential sum w_i log(1/|z - t_i|); +infinity when
/// z coincides with an atom (flagged, not thrown).
double log_potential(const EmpiricalMeasure& mu, cplx z);

/// Discrete logarithmic energy, diagonal excluded; +infinity when two
/// distinct atoms coincide.
double energy(const EmpiricalMeasure& mu);

/// Depth-n truncation of the dynamical Green's function:
///   D^-n * sum over the N^n words g of length n of log|g(z) - a|,
/// evaluated pointwise (composed coefficients are never materialized).
/// Word values switch to a log-magnitude representation once they leave
/// the double range; a zero factor contributes -infinity.
double green_partial(const GeneratorSet& G, cplx a, cplx z, int n,
                     long cap = kDefaultEnumerationCap);

/// Closed-form modified Robin constant
///   F_G = (D - N)^-1 * log|lead(g_1) ... lead(g_N)|.
double robin_constant(const GeneratorSet& G);

/// Depth-n Robin partial D^-n log prod_{l(g)=n} |lead(g)| by direct word
/// enumeration, and its closed form (1-(N/D)^n)/(D-N) * log|prod lead(g_i)|.
double robin_partial_direct(const GeneratorSet& G, int n,
                            long cap = kDefaultEnumerationCap);
double robin_partial_closed(const GeneratorSet& G, int n);

/// Residual field of the potential identity U^mu + G_n - F_G, with mu an
/// independent stochastic depth-n sample (its own derived seed) and G_n
/// based at a point drawn from a different stream. Grid nodes within one
/// spacing of a sampled atom (or outside the annulus window) are masked.
struct IdentityReport {
    int depth = 0;
    GridField residuals;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    long unmasked_nodes = 0;
    long finite_nodes = 0;
    cplx green_base;
    cplx measure_base;
};

IdentityReport verify_identity(const GeneratorSet& G, const SampleConfig& cfg,
                               const GridSpec& grid);

/// Greedy Leja ordering of m points from the cloud (max product of
/// distances to the already-chosen points; the start maximizes distance
/// from the centroid).
std::vector<std::size_t> leja_select(std::span<const cplx> points, int m);

/// Capacity estimate from the m-point Leja product with the finite-m
/// roots-of-unity normalization removed:
///   (prod_{i<j} |x_i-x_j|)^{2/(m(m-1))} / m^{1/(m-1)},
/// so the m-th roots of unity give exactly 1 (the capacity of the unit
/// circle) instead of the biased raw product.
double capacity_leja(std::span<const cplx> points, int m);

/// Mhaskar-Saff F-functional surrogate: log(capacity_leja) minus the mean
/// of the external field values at the m selected Leja points.
double f_functional(std::span<const cplx> points, std::span<const double> q_at_leja,
                    int m);

/// Breadth-first search for a word h with |h(z0)| > R_esc, certifying an
/// unbounded orbit; escaped branches are pruned.
std::optional<Word> orbit_witness(const GeneratorSet& G, const EscapeData& esc,
                                  cplx z0, int max_len,
                                  std::size_t node_cap = 1u << 20);

/// A disc disjoint from all sampled orbit points (heuristic certificate
/// that the orbit is not dense): returns (center, radius) with
/// D(center, 2*radius) empty of samples, or nullopt.
std::optional<std::pair<cplx, double>> nondense_witness(const GeneratorSet& G,
                                                        const EscapeData& esc,
                                                        cplx z0, long budget);

/// Helper behind nondense_witness: best empty disc over a candidate grid
/// covering the search box; nullopt when no candidate clears min_radius.
std::optional<std::pair<cplx, double>> find_empty_disc(std::span<const cplx> points,
                                                       cplx box_lo, cplx box_hi,
                                                       int grid_res,
                                                       double min_radius);

/// Capacity / diameter report: closed-form Robin constant, its capacity
/// and diameter lower bounds, Leja estimates, and the hypothesis flags.
/// The strict inequalities are reported, never asserted.
struct CapacityReport {
    double robin_F = 0.0;
    double lower_bound = 0.0;  // exp(-F_G)
    double cap_estimate = 0.0;
    double diam_estimate = 0.0;
    double diam_lower = 0.0;   // 2 exp(-F_G)
    bool orbit_unbounded = false;
    bool orbit_nondense = false;
    bool all_deg_ge_2 = false;
    bool main_condition = false;
    std::string main_condition_note;
    bool cap_exceeds_bound = false;
    bool diam_exceeds_bound = false;
};

struct CapacityReportOptions {
    int leja_count = 256;
    int witness_max_len = 12;
    long witness_budget = 20000;
    std::size_t diam_subsample_cap = 1u << 14;
    double eps_J = 1e-3;
};

CapacityReport capacity_report(const GeneratorSet& G,
                               std::span<const cplx> julia_points, cplx z0,
                               const CapacityReportOptions& opts = {});

/// Least-squares slope of log mu(D(z,r)) against log r over the radii with
/// at least min_count atoms inside, minimized over the centers. Requires a
/// normalized measure with enough atoms.
double holder_mass_estimate(const EmpiricalMeasure& mu, std::span<const cplx> centers,
                            std::span<const double> radii, int min_count = 10,
                            std::size_t min_atoms = 1000);

/// Annulus test for uniform perfectness: true iff for every sample z and
/// every r in a logarithmic sweep of (r_floor, diam), the annulus
/// {c r <= |w - z| <= r} contains a sample point. The sweep floor adapts
/// to the sample resolution (a multiple of the median nearest-neighbour
/// spacing) so finite sampling does not produce false negatives.
bool uniform_perfectness_check(std::span<const cplx> points, double c);

} // namespace polysemi

#endif
