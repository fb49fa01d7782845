#pragma once

#include <cmath>
#include <cstdint>

namespace geocluster {

// Deterministic, splittable random stream (xoshiro256++ seeded via splitmix64).
//
// Every random draw in the library goes through this class. The standard
// <random> distributions are implementation-defined sequences, so using them
// would break the bit-reproducibility contract; uniforms and normals are
// generated with explicit, fixed algorithms instead.
//
// Streams are keyed by up to four 64-bit values, e.g. (seed, cell, rep, tag),
// so parallel replications can draw independently in any order and still
// reproduce byte-identical results.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t k1 = 0,
                       std::uint64_t k2 = 0, std::uint64_t k3 = 0) noexcept {
        std::uint64_t x = seed;
        s_[0] = splitmix(x);
        x ^= k1 * 0xbf58476d1ce4e5b9ULL + 1;
        s_[1] = splitmix(x);
        x ^= k2 * 0x94d049bb133111ebULL + 1;
        s_[2] = splitmix(x);
        x ^= k3 * 0xd6e8feb86659fd93ULL + 1;
        s_[3] = splitmix(x);
        // avoid the all-zero state, which xoshiro cannot leave
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x1ULL;
    }

    std::uint64_t next_u64() noexcept {
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

    // uniform double in [0, 1) with 53 random bits
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    // standard normal via Box-Muller; the spare value is cached
    double normal() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v;
        do {
            u = uniform();
        } while (u <= 0.0);
        v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

    // uniform integer in [0, bound), bound >= 1; rejection keeps it unbiased
    std::uint64_t uniform_int(std::uint64_t bound) noexcept {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

private:
    static std::uint64_t splitmix(std::uint64_t& x) noexcept {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace geocluster
