#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "approxcs/rng.hpp"

namespace approxcs {

enum class InjectionPoint { InputSignal, Measurements };

struct NoiseSpec {
    double variance = 4e-4;  // zero mean
    std::uint64_t seed = 0;
    InjectionPoint injection_point = InjectionPoint::Measurements;

    void validate() const {
        if (!(variance >= 0.0))
            throw std::invalid_argument("NoiseSpec: variance must be >= 0");
    }
};

// out[i] = v[i] + n[i], n iid Gaussian(0, variance) from the polar sampler,
// so equal seeds replay exactly. variance 0 copies the input untouched.
inline std::vector<double> add_awgn(const std::vector<double>& v, const NoiseSpec& spec) {
    spec.validate();
    if (spec.variance == 0.0) return v;
    const double sigma = std::sqrt(spec.variance);
    GaussianSampler gauss(spec.seed);
    std::vector<double> out;
    out.reserve(v.size());
    for (double s : v) out.push_back(s + sigma * gauss.next());
    return out;
}

} // namespace approxcs
