#pragma once

// Deterministic randomness utilities. The engine (std::mt19937_64) has a
// fully specified output sequence, and the samplers below avoid the
// implementation-defined standard <random> distributions, so any quantity
// derived from a seed is reproducible across platforms and across any
// scheduling of tasks onto workers.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace peci {

using RandomEngine = std::mt19937_64;

/// One step of the splitmix64 sequence; also usable as a mixing finalizer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (master seed, stream index).
/// Results do not depend on which worker consumes which stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
    std::uint64_t b = splitmix64(state);
    return a ^ (b + 0x9E3779B97F4A7C15ULL);
}

inline RandomEngine make_stream_engine(std::uint64_t seed, std::uint64_t stream) {
    return RandomEngine(mix_seed(seed, stream));
}

/// Unbiased integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(RandomEngine& eng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = eng();
        if (r >= threshold) return r % bound;
    }
}

/// Uniform double in [0, 1), 53 random bits.
inline double uniform_unit(RandomEngine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as a log argument.
inline double uniform_unit_positive(RandomEngine& eng) {
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via Box-Muller. Consumes two engine outputs per call.
inline double standard_normal(RandomEngine& eng) {
    const double u1 = uniform_unit_positive(eng);
    const double u2 = uniform_unit(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline std::vector<double> standard_normal_vector(RandomEngine& eng, std::size_t n) {
    std::vector<double> out(n);
    for (double& v : out) v = standard_normal(eng);
    return out;
}

/// k distinct indices drawn uniformly from {0, ..., m-1} by a partial
/// Fisher-Yates shuffle. `scratch` is reused between calls.
inline void sample_indices_without_replacement(RandomEngine& eng, std::size_t m,
                                               std::size_t k,
                                               std::vector<std::size_t>& scratch,
                                               std::vector<std::size_t>& out) {
    scratch.resize(m);
    for (std::size_t i = 0; i < m; ++i) scratch[i] = i;
    out.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(eng, m - i));
        std::swap(scratch[i], scratch[j]);
        out[i] = scratch[i];
    }
}

inline std::vector<std::size_t> sample_indices_without_replacement(RandomEngine& eng,
                                                                   std::size_t m,
                                                                   std::size_t k) {
    std::vector<std::size_t> scratch, out;
    sample_indices_without_replacement(eng, m, k, scratch, out);
    return out;
}

}  // namespace peci
