#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace covertlink {

/// Deterministic PRNG (xoshiro256++ seeded through splitmix64).
///
/// Hand-rolled rather than <random> so that identical seeds give bit-identical
/// streams on every compiler and platform. All stochastic operations in the
/// toolkit take an Rng explicitly; none keep hidden state.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
        have_gauss_ = false;
    }

    /// Trial seeds are derived by hashing (stream seed, index) so trials are
    /// reproducible independently and in any execution order.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t x = seed ^ (0x632be59bd9b4e019ull * (index + 1));
        splitmix64(x);
        return splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// One bit.
    int bit() { return static_cast<int>(next_u64() >> 63); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Modulo bias is irrelevant at our trial counts vs 2^64.
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller (cached pair).
    double gauss() {
        if (have_gauss_) {
            have_gauss_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool have_gauss_ = false;
};

}  // namespace covertlink
