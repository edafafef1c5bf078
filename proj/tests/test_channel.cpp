#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "approxcs/channel.hpp"

using namespace approxcs;

TEST_CASE("zero variance is the identity") {
    const std::vector<double> v{0.1, -2.5, 3.0, 0.0};
    const auto out = add_awgn(v, NoiseSpec{0.0, 123, InjectionPoint::Measurements});
    CHECK(out == v);
}

TEST_CASE("same seed, same noise") {
    const std::vector<double> v(1000, 1.0);
    const NoiseSpec spec{4e-4, 77, InjectionPoint::Measurements};
    CHECK(add_awgn(v, spec) == add_awgn(v, spec));
    NoiseSpec other = spec;
    other.seed = 78;
    CHECK(add_awgn(v, spec) != add_awgn(v, other));
}

TEST_CASE("negative variance is rejected") {
    CHECK_THROWS_AS(add_awgn({1.0}, NoiseSpec{-1e-9, 0, InjectionPoint::Measurements}),
                    std::invalid_argument);
}

TEST_CASE("sample statistics match the requested distribution") {
    const std::size_t n = 1'000'000;
    const double variance = 4e-4;
    const std::vector<double> zeros(n, 0.0);
    const auto noise = add_awgn(zeros, NoiseSpec{variance, 2026, InjectionPoint::Measurements});

    double sum = 0.0, sumsq = 0.0;
    for (double x : noise) {
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;

    const double sigma = std::sqrt(variance);
    CHECK(std::abs(mean) <= 3.0 * sigma / 1e3);          // 3 sigma / sqrt(10^6)
    CHECK(std::abs(var - variance) <= 0.01 * variance);  // 1%

    // noise energy: E ||n||^2 = n * variance, within 1%
    CHECK(std::abs(sumsq - static_cast<double>(n) * variance) <=
          0.01 * static_cast<double>(n) * variance);
}

TEST_CASE("derived seeds give distinct reproducible streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}
