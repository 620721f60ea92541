#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace s3c {

/// splitmix64 finalizer; used both as a mixer and to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive the seed of a named substream from a base seed and a path of tags,
/// e.g. derive_seed(seed, {kSubspaceStream, j}). Distinct paths give
/// independent streams; derivation is associative-free (order matters).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t tag : path) s = splitmix64(s ^ tag);
    return s;
}

/// Seedable generator with portable output: the engine (mt19937_64) and all
/// sampling code here are fully specified, so sequences are identical across
/// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling, no modulo bias
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream tags. Keeping them in one place documents the split layout.
namespace stream {
inline constexpr std::uint64_t kSubspace = 0x01;
inline constexpr std::uint64_t kCorruption = 0x02;
inline constexpr std::uint64_t kSideInfo = 0x03;
inline constexpr std::uint64_t kKmeans = 0x04;
inline constexpr std::uint64_t kRestart = 0x05;
inline constexpr std::uint64_t kTrial = 0x06;
inline constexpr std::uint64_t kDataset = 0x07;
}  // namespace stream

}  // namespace s3c
