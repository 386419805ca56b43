#ifndef POLYSEMI_RNG_HPP
#define POLYSEMI_RNG_HPP

#include <complex>
#include <cstdint>

namespace polysemi {

// Counter-derived random streams: every consumer owns an Rng built from the
// single master seed plus a stream id, so parallel walks are reproducible
// regardless of scheduling. Stream ids combine a fixed purpose tag with a
// walk index (tag XOR index).
namespace streams {
constexpr std::uint64_t kMeasureWalk = 0x4d57'0000'0000'0000ull;
constexpr std::uint64_t kJuliaWalk   = 0x4a57'0000'0000'0000ull;
constexpr std::uint64_t kGreenBase   = 0x4742'0000'0000'0000ull;
constexpr std::uint64_t kMeasureBase = 0x4d42'0000'0000'0000ull;
constexpr std::uint64_t kBasePoint   = 0x4250'0000'0000'0000ull;
} // namespace streams

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic per-stream generator (SplitMix64 sequence keyed by
/// master seed and stream id).
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_id)
        : state_(splitmix64(master_seed ^ splitmix64(stream_id))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Uniform point on the circle |z| = radius.
    std::complex<double> on_circle(double radius) {
        const double theta = 2.0 * 3.14159265358979323846 * uniform();
        return {radius * std::cos(theta), radius * std::sin(theta)};
    }

private:
    std::uint64_t state_;
};

} // namespace polysemi

#endif
