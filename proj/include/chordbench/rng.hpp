#pragma once

// Deterministic random streams for the stochastic generators and the sweep
// driver.  Everything is pinned down so that a (seed, trial) pair reproduces
// the same instance on any platform: mt19937_64 with explicit bit plumbing,
// no std::distribution objects (their outputs are implementation-defined).

#include <cmath>
#include <cstdint>
#include <random>

namespace chordbench {

// splitmix64 finalizer; good enough to decorrelate nearby seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seed for the index-th stream derived from a base seed.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base ^ mix64(index + 1));
}

class rng_stream {
  public:
    explicit rng_stream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n); n >= 1
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

    // Poisson draw.  Knuth's product method for small means, Hormann's PTRS
    // transformed rejection for large ones (exact distribution either way).
    long poisson(double mean) {
        if (mean <= 0) return 0;
        if (mean < 30.0) return poisson_knuth(mean);
        return poisson_ptrs(mean);
    }

  private:
    long poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    long poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        while (true) {
            const double u = uniform01() - 0.5;
            const double v = uniform01();
            const double us = 0.5 - std::fabs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
            if (kf < 0 || (us < 0.013 && v > us)) continue;
            const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
            const double rhs = kf * loglam - mean - std::lgamma(kf + 1.0);
            if (lhs <= rhs) return static_cast<long>(kf);
        }
    }

    std::mt19937_64 gen_;
};

}  // namespace chordbench
