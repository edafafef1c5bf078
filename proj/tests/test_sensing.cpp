#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "approxcs/adder_library.hpp"
#include "approxcs/sensing.hpp"

using namespace approxcs;

namespace {

const std::vector<FullAdderModel>& shipped_library() {
    static const auto lib = load_adder_library(std::string(APPROXCS_DATA_DIR) + "/adders.alib");
    return lib;
}

AdderConfig exact_cfg(int width) {
    static const FullAdderModel ex = exact_adder();
    return AdderConfig{&ex, &ex, 0, width};
}

// Dense 0/1 matrix materialized from the plan; the matvec runs in plain
// integer arithmetic with explicit wraparound.
std::vector<std::vector<int>> dense_matrix(const SensingPlan& plan) {
    std::vector<std::vector<int>> phi(plan.measurements, std::vector<int>(plan.frame_length, 0));
    for (int k = 0; k < plan.measurements; ++k)
        for (std::int32_t col : plan.row(k)) phi[k][col] = 1;
    return phi;
}

std::vector<std::int64_t> dense_matvec_wrapped(const std::vector<std::vector<int>>& phi,
                                               const FxVector& x, int width) {
    std::vector<std::int64_t> y;
    for (const auto& row : phi) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j]) acc += static_cast<std::uint64_t>(x.raw[j]);
        y.push_back(detail::sign_extend(acc, width));
    }
    return y;
}

} // namespace

TEST_CASE("a two-column frame admits exactly one plan row") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        const SensingPlan plan = gen_bernoulli_plan(1, 2, 2, seed);
        REQUIRE(plan.z == std::vector<std::int32_t>{0, 1});
    }
}

TEST_CASE("plans replay for equal seeds and differ across seeds") {
    const SensingPlan a = gen_bernoulli_plan(128, 256, 2, 77);
    const SensingPlan b = gen_bernoulli_plan(128, 256, 2, 77);
    const SensingPlan c = gen_bernoulli_plan(128, 256, 2, 78);
    CHECK(a.z == b.z);
    CHECK(a.z != c.z);
    a.validate();
}

TEST_CASE("plan generation rejects bad shapes") {
    CHECK_THROWS_AS(gen_bernoulli_plan(4, 3, 4, 0), std::invalid_argument);    // r > N
    CHECK_THROWS_AS(gen_bernoulli_plan(0, 8, 2, 0), std::invalid_argument);    // no rows
    CHECK_THROWS_AS(gen_bernoulli_plan(256, 256, 2, 0), std::invalid_argument); // M >= N
}

TEST_CASE("column coverage matches binomial statistics over 1000 seeds") {
    const int M = 128, N = 256, r = 2, seeds = 1000;
    std::vector<long> hits(N, 0);
    for (int s = 0; s < seeds; ++s) {
        const SensingPlan plan = gen_bernoulli_plan(M, N, r, 1000 + static_cast<std::uint64_t>(s));
        for (std::int32_t col : plan.z) ++hits[col];
    }
    const double trials = static_cast<double>(seeds) * M;
    const double p = static_cast<double>(r) / N;
    const double mu = trials * p;
    const double sigma = std::sqrt(trials * p * (1.0 - p));
    for (int c = 0; c < N; ++c) {
        INFO("column " << c << " hits " << hits[c]);
        REQUIRE(std::abs(static_cast<double>(hits[c]) - mu) <= 3.0 * sigma);
    }
}

TEST_CASE("acquiring the zero frame yields zero measurements") {
    const SensingPlan plan = gen_bernoulli_plan(128, 256, 2, 5);
    const FxVector x = quantize_vector(std::vector<double>(256, 0.0), {4, 33});
    const FxVector y = acquire(x, plan, exact_cfg(37));
    for (std::int64_t v : y.raw) REQUIRE(v == 0);
}

TEST_CASE("acquiring a unit vector selects the rows containing its column") {
    const SensingPlan plan = gen_bernoulli_plan(32, 64, 2, 9);
    for (int j : {0, 17, 63}) {
        std::vector<double> e(64, 0.0);
        e[j] = 1.0;
        const FxVector x = quantize_vector(e, {4, 33});
        const FxVector y = acquire(x, plan, exact_cfg(37));
        for (int k = 0; k < plan.measurements; ++k) {
            const auto row = plan.row(k);
            const bool hit = std::find(row.begin(), row.end(), j) != row.end();
            REQUIRE(y.raw[k] == (hit ? (std::int64_t{1} << 33) : 0));
        }
    }
}

TEST_CASE("exact acquisition is bit-exact with the dense matrix-vector oracle") {
    const SensingPlan plan = gen_bernoulli_plan(128, 256, 2, 31);
    const auto phi = dense_matrix(plan);
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> frame(256);
        for (double& v : frame) v = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
        const FxVector x = quantize_vector(frame, {4, 33});
        const FxVector y = acquire(x, plan, exact_cfg(37));
        REQUIRE(y.raw == dense_matvec_wrapped(phi, x, 37));
    }
}

TEST_CASE("exact acquisition is linear in the fixed-point domain") {
    const SensingPlan plan = gen_bernoulli_plan(64, 128, 2, 3);
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(128), b(128);
        for (int i = 0; i < 128; ++i) {
            a[i] = 0.4 * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
            b[i] = 0.4 * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
        }
        FxVector xa = quantize_vector(a, {4, 33});
        FxVector xb = quantize_vector(b, {4, 33});
        FxVector xsum = xa;
        for (int i = 0; i < 128; ++i) xsum.raw[i] += xb.raw[i];  // no overflow by construction
        const FxVector ya = acquire(xa, plan, exact_cfg(37));
        const FxVector yb = acquire(xb, plan, exact_cfg(37));
        const FxVector ys = acquire(xsum, plan, exact_cfg(37));
        for (int k = 0; k < plan.measurements; ++k) REQUIRE(ys.raw[k] == ya.raw[k] + yb.raw[k]);
    }
}

TEST_CASE("acquisition appends exactly M*r*W cell evaluations per frame") {
    const SensingPlan plan = gen_bernoulli_plan(128, 256, 2, 5);
    const auto& lib = shipped_library();
    AdderConfig cfg{&find_model(lib, "lpaa3"), &find_model(lib, "exact"), 10, 37};
    const FxVector x = quantize_vector(std::vector<double>(256, 0.25), {4, 33});
    EnergyTrace trace;
    acquire(x, plan, cfg, &trace);
    CHECK(trace.total_evaluations() == 128ULL * 2 * 37);
    CHECK(trace.counts.at("lpaa3") == 128ULL * 2 * 10);
    CHECK(trace.counts.at("exact") == 128ULL * 2 * 27);
}

TEST_CASE("per-measurement approximation error respects the LSB-region bound") {
    const SensingPlan plan = gen_bernoulli_plan(128, 256, 2, 13);
    const auto& lib = shipped_library();
    const auto& ex = find_model(lib, "exact");
    std::mt19937_64 gen(5150);
    std::vector<double> frame(256);
    for (double& v : frame) v = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
    const FxVector x = quantize_vector(frame, {4, 33});
    const FxVector y_exact = acquire(x, plan, exact_cfg(37));
    for (const auto& m : lib) {
        for (int k : {1, 7, 14, 22, 29, 37}) {
            AdderConfig cfg{&m, &ex, k, 37};
            const FxVector y = acquire(x, plan, cfg);
            const std::int64_t bound = (std::int64_t{1} << k) - 1;
            for (int i = 0; i < plan.measurements; ++i)
                REQUIRE(std::abs(y.raw[i] - y_exact.raw[i]) <= bound);
        }
    }
}

TEST_CASE("acquire validates dimensions and formats") {
    const SensingPlan plan = gen_bernoulli_plan(8, 16, 2, 1);
    const FxVector wrong_len = quantize_vector(std::vector<double>(8, 0.0), {4, 33});
    CHECK_THROWS_AS(acquire(wrong_len, plan, exact_cfg(37)), std::invalid_argument);
    const FxVector wrong_fmt = quantize_vector(std::vector<double>(16, 0.0), {4, 20});
    CHECK_THROWS_AS(acquire(wrong_fmt, plan, exact_cfg(37)), std::invalid_argument);
}

TEST_CASE("plan files round-trip") {
    const SensingPlan plan = gen_bernoulli_plan(16, 64, 3, 999);
    std::stringstream buf;
    write_plan(buf, plan);
    const SensingPlan back = parse_plan(buf);
    CHECK(back.measurements == plan.measurements);
    CHECK(back.frame_length == plan.frame_length);
    CHECK(back.ones_per_row == plan.ones_per_row);
    CHECK(back.seed == plan.seed);
    CHECK(back.z == plan.z);
    std::istringstream bad("measurements 4\nframe_length 8\nones_per_row 2\nrows 0 1\n");
    CHECK_THROWS(parse_plan(bad));
}
