#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vvg {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seeded generator with hand-rolled distributions. std::mt19937_64 output
// is specified bit-for-bit by the standard, and avoiding the library
// distributions keeps the stream identical across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (no cached spare: one draw per call).
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace vvg
