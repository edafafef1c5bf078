#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace approxcs {

// All randomness flows through std::mt19937_64, whose output sequence the
// standard fully specifies, plus the pinned draw routines below. The
// std::*_distribution adaptors are implementation-defined and are not used
// anywhere results must replay.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream seed number `index` derived from a base seed. Used to hand each
// frame / trial / purpose its own generator without correlation.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = gen();
    while (v >= limit) v = gen();
    return v % n;
}

// [0, 1) with the top 53 bits.
inline double unit_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method. Chosen over Box-Muller to avoid trig calls whose
// last-ulp behaviour differs across libm builds.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * unit_double(gen_) - 1.0;
            v = 2.0 * unit_double(gen_) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace approxcs
