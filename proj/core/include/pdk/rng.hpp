#pragma once

#include <cmath>
#include <cstdint>

namespace pdk {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64 from (seed, stream). Each simulated
// path owns a stream keyed by its index, so results are independent of thread
// count and schedule.
class Xoshiro256pp {
public:
    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL + stream * 0xD1342543DE82EF95ULL);
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next() {
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

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Draws for one path. With flip set, uniforms are reflected u -> 1-u, which
// negates normals through the polar transform with the identical rejection
// pattern and mirrors exponentials, giving exact antithetic pairing.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t stream, bool flip = false)
        : eng_(seed, stream), flip_(flip) {}

    double uniform() {
        double u = static_cast<double>((eng_.next() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        if (flip_) {
            u = 1.0 - u;
            if (u == 0.0) u = 0x1.0p-53;
        }
        return u;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double v1, v2, s;
        do {
            v1 = 2.0 * uniform() - 1.0;
            v2 = 2.0 * uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        have_spare_ = true;
        return v1 * f;
    }

private:
    Xoshiro256pp eng_;
    bool flip_ = false;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace pdk
