#pragma once

#include <cmath>
#include <cstdint>

namespace ltsim {

// SplitMix64. Every stream in the simulator is one of these, seeded through
// mix_key below, so any (seed, purpose, index...) tuple names a reproducible
// stream without carrying generator state around. That is what makes paired
// comparisons (same channel draws, different strategy) and parallel block
// execution deterministic.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

using Rng = SplitMix64;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Fold up to three words into a stream key. Word order matters.
inline std::uint64_t mix_key(std::uint64_t root, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(root ^ 0xA0761D6478BD642FULL);
    s = mix64(s ^ (a + 0x9E3779B97F4A7C15ULL));
    s = mix64(s ^ (b + 0xE7037ED1A0B428DBULL));
    s = mix64(s ^ (c + 0x8EBC6AF09C88C6E3ULL));
    return s;
}

// Uniform on the open interval (0,1); safe under log()/quantile transforms.
inline double draw_uniform(Rng& rng) {
    return (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal, Box-Muller. Consumes exactly two uniforms; hand-rolled so
// trajectories are identical across standard libraries and platforms.
inline double draw_normal(Rng& rng) {
    const double u1 = draw_uniform(rng);
    const double u2 = draw_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.28318530717958647692528676655900577 * u2);
}

} // namespace ltsim
