#ifndef POLYSEMI_SEMIGROUP_HPP
#define POLYSEMI_SEMIGROUP_HPP

#include "polysemi/poly.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polysemi {

/// Validated ordered set of generators: every generator nonconstant, every
/// degree-one generator a*z+b has |a| > 1, and at least one generator has
/// degree >= 2 (so D > N). Immutable after validation.
struct GeneratorSet {
    std::vector<ComplexPoly> gens;
    std::vector<int> degrees;
    int N = 0;      // generator count
    int D = 0;      // sum of degrees
    double R = 0.0; // D / N
};

GeneratorSet validate(std::vector<ComplexPoly> gens);

/// Generator indices applied right to left: indices = {i1, ..., in} means
/// g_{in} o ... o g_{i1}. Length zero is the identity.
struct Word {
    std::vector<int> indices;
    int length() const { return static_cast<int>(indices.size()); }
};

constexpr long kDefaultEnumerationCap = 10'000'000;

/// Lexicographic stream over the N^n words of length n.
class WordStream {
public:
    WordStream(const GeneratorSet& G, int n, long cap = kDefaultEnumerationCap);
    bool next(Word& w);
    long count() const { return count_; }

private:
    int N_;
    long count_;
    bool first_ = true;
    bool done_ = false;
    std::vector<int> odometer_;
};

/// All N^n words of length n in lexicographic order.
std::vector<Word> enumerate_words(const GeneratorSet& G, int n,
                                  long cap = kDefaultEnumerationCap);

/// Iterated evaluation of the word at z without materializing composed
/// coefficients. Overflow propagates as non-finite values usable by
/// escape logic.
cplx word_eval(const GeneratorSet& G, const Word& w, cplx z);

/// Composed degree of a word (product of factor degrees).
long long word_degree(const GeneratorSet& G, const Word& w);

/// log|leading coefficient| of the composed word, by the composition law
/// lead(g o f) = lead(g) * lead(f)^deg(g).
double word_log_abs_leading(const GeneratorSet& G, const Word& w);

/// Smallest n0 such that every word of length >= n0 whose composed degree
/// equals deg(target) has |leading| > |leading(target)|; from the minimum
/// degree-one and degree->=2 leading magnitudes and the maximum degree.
/// Clamped to >= 2 (representations of interest have length >= 2).
int representation_bound(const GeneratorSet& G, const ComplexPoly& target);

/// The unique minimal generating set: generators removed (in a canonical
/// order) when they coincide coefficientwise, at relative tolerance tol,
/// with some word of length >= 2 in the remaining generators. Throws
/// UndecidedRedundancyError if the bounded search exceeds word_cap nodes.
GeneratorSet minimal_generating_set(const GeneratorSet& G, double tol = 1e-9,
                                    long word_cap = 1'000'000);

/// Escape data: |g_i(z)| > M|z| for every generator whenever |z| > R_esc.
/// M_J (sup of |g_i'| over the Julia set) and lambda = log(D/N)/log(M_J)
/// are filled in by with_julia_bound once a Julia sample is available.
struct EscapeData {
    double M = 0.0;
    double R_esc = 0.0;
    double M_J = 0.0;
    double lambda = 0.0;
};

/// Explicit (M, R_esc) from coefficient bounds: for a degree-d >= 2
/// generator, |g(z)| >= |lead||z|^d - sum_{k<d}|a_k||z|^k; for a*z+b,
/// |g(z)| >= |a||z| - |b|. Per-generator thresholds are solved tightly and
/// rounded up to the next integer; R_esc is the max over generators.
EscapeData escape_radius(const GeneratorSet& G);

/// Fill M_J = max_i sup_sample |g_i'| and lambda = log(D/N)/log(M_J).
EscapeData with_julia_bound(EscapeData esc, const GeneratorSet& G,
                            std::span<const cplx> julia_sample);

/// C* = all finite critical points of the generators; C = the members of
/// C* within eps_J of the Julia sample; kappa when computable.
struct CriticalData {
    std::vector<cplx> c_star;
    std::vector<cplx> c_julia;
    std::optional<int> kappa;
};

CriticalData critical_sets(const GeneratorSet& G,
                           std::span<const cplx> julia_sample, double eps_J);

/// Smallest kappa >= 1 with
///   sum_{i: g_i'(x) != 0} (D/N)^{1/kappa} + sum_{i: g_i'(x) = 0} ord_x(g_i)
///     <= D - 1/2
/// at every x in C*. Requires #C* > 1 (HypothesisViolationError otherwise).
int select_kappa(const GeneratorSet& G);

struct MainConditionResult {
    bool holds = false;
    std::string explanation;
};

/// Critical-point hypothesis check on the minimal generating set: holds
/// when #C* != 1, or C (Julia-near critical points) is empty, or the single
/// shared critical point is certified non-exceptional. Exceptionality is
/// decided by the common-center certificate (all generators of the form
/// B(z-a)^m + a) plus a bounded preimage-orbit probe.
MainConditionResult check_main_condition(const GeneratorSet& G,
                                         std::span<const cplx> julia_sample,
                                         double eps_J = 1e-3);

} // namespace polysemi

#endif
