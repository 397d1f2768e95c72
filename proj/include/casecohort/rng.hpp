#ifndef CASECOHORT_RNG_HPP
#define CASECOHORT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace casecohort {

// SplitMix64 step (Steele/Lea/Flood constants).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Substream key: the (index+1)-th SplitMix64 output of `seed`. This is the
// documented hash used everywhere a stream is split (replicate seeds, per-subject
// draws), so adding subjects or replicates never perturbs earlier draws.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed + index * 0x9E3779B97F4A7C15ULL;
    return splitmix64(state);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(substream_seed(seed, index));
}

// Uniform draw on the open interval (0,1). Maps the top 53 bits of the engine
// output to (k + 0.5) * 2^-53 so 0 and 1 are unreachable; identical on every
// platform, unlike std::uniform_real_distribution.
inline double uniform_open(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller on open-interval uniforms (consumes two draws).
inline double normal_draw(std::mt19937_64& eng) {
    double u1 = uniform_open(eng);
    double u2 = uniform_open(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace casecohort

#endif
