#pragma once

#include <cmath>
#include <cstdint>

namespace teamspectra {

// SplitMix64: a fixed, platform-independent 64-bit generator. Every
// stochastic component seeds one of these (or a stream derived from one),
// so a given seed reproduces identical output on any build.
struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Independent stream for item `index` under a corpus seed: mixes the index
// through one SplitMix64 step so neighboring indices decorrelate.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return mix.next();
}

// Convenience sampler over SplitMix64. All math is explicit (no standard
// library distributions) so results are bit-identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_.next(); }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t bounded(std::uint64_t n) { return gen_.next() % n; }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = unit();
        while (u1 <= 0.0) u1 = unit();
        const double u2 = unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = radius * std::sin(two_pi * u2);
        has_spare_ = true;
        return radius * std::cos(two_pi * u2);
    }

    // Knuth's product-of-uniforms Poisson sampler; fine for moderate means.
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int k = 0;
        double product = 1.0;
        do {
            ++k;
            product *= unit();
        } while (product > limit);
        return k - 1;
    }

private:
    SplitMix64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Standard normal CDF.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440084436210485);
}

}  // namespace teamspectra
