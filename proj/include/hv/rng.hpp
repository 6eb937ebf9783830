#pragma once

#include <cstdint>
#include <cmath>

namespace hv {

/// splitmix64 step: advances the state by the golden-ratio increment and
/// returns a mixed output. Used for seeding and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with a splitmix64-seeded state.
///
/// Substream rule (used everywhere randomness is split across tasks):
/// substream i of root seed s is seeded with the splitmix64 output at
/// counter s+i, i.e. Rng(s).substream(i) == Rng(seed = splitmix64 state s+i).
/// Replica i of a batch, boundary point i of a profile etc. all use their
/// own substream, so results do not depend on execution order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        cached_normal_ = 0.0;
        has_cached_normal_ = false;
    }

    static Rng substream(std::uint64_t root_seed, std::uint64_t index) {
        std::uint64_t sm = root_seed + index;
        return Rng(splitmix64(sm));
    }

    /// 64-bit derived seed of substream `index`; recorded in batch outputs so
    /// a single replica can be reproduced in isolation.
    static std::uint64_t substream_seed(std::uint64_t root_seed, std::uint64_t index) {
        std::uint64_t sm = root_seed + index;
        return splitmix64(sm);
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

    /// Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        const double u1 = 1.0 - uniform();   // (0,1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_normal_ = true;
        return r * std::cos(a);
    }

    /// Gamma(shape >= 1, scale 1), Marsaglia-Tsang squeeze method.
    double gamma(double shape);

    /// Exact Binomial(n, p) draw. Bernoulli sums for small n, Devroye's
    /// beta-splitting recursion above, so large n stays O(log n).
    std::int64_t binomial(std::int64_t n, double p);

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double cached_normal_;
    bool has_cached_normal_;
};

}  // namespace hv
