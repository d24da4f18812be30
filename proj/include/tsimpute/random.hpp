#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tsimpute {

/**
 * Deterministic 64-bit pseudo-random generator (splitmix64).
 *
 * The state advances by the golden-gamma increment 0x9e3779b97f4a7c15 and
 * the output is a bijective bit mix of the new state (Steele, Lea & Burke,
 * "Fast splittable pseudorandom number generators", OOPSLA 2014).
 *
 * The generator is fully specified here rather than delegated to
 * <random> so that a given seed produces the identical draw sequence on
 * every platform and standard library. All stochastic behaviour in this
 * project (gap simulation, synthetic data, test case generation) flows
 * through this class.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1]: top 53 bits of the next word, shifted off zero.
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Inverse-CDF exponential variate, -ln(U)/rate with U in (0, 1].
    /// Requires rate > 0.
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// Box-Muller normal variate; the paired draw is cached.
    double normal(double mean = 0.0, double stddev = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return mean + stddev * radius * std::cos(angle);
    }

    /// Uniform integer in [0, bound) by rejection-free scaling (bound > 0).
    std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tsimpute
