#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "approxcs/adder_library.hpp"
#include "approxcs/adders.hpp"

using namespace approxcs;

namespace {

const std::vector<FullAdderModel>& shipped_library() {
    static const auto lib = load_adder_library(std::string(APPROXCS_DATA_DIR) + "/adders.alib");
    return lib;
}

// Independent bit-serial oracle: evaluates cells through their netlists
// (never the tables) with its own carry bookkeeping.
std::int64_t oracle_rca(const FullAdderModel& approx, const FullAdderModel& exact, int width,
                        int approx_bits, std::uint64_t x, std::uint64_t y) {
    std::uint64_t acc = 0;
    int carry = 0;
    for (int i = 0; i < width; ++i) {
        const FullAdderModel& m = i < approx_bits ? approx : exact;
        REQUIRE(m.netlist.has_value());
        const auto [s, c] = m.netlist->eval((x >> i) & 1, (y >> i) & 1, carry);
        acc += static_cast<std::uint64_t>(s) << i;
        carry = c;
    }
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    acc &= mask;
    if (acc >> (width - 1)) acc |= ~mask;
    return static_cast<std::int64_t>(acc);
}

FxWord word(std::int64_t raw, int ibits, int fbits) { return FxWord{raw, {ibits, fbits}}; }

} // namespace

TEST_CASE("exact model implements full addition on every row") {
    const FullAdderModel ex = exact_adder();
    CHECK(fa_eval(ex, 0, 0, 0) == std::pair{0, 0});
    CHECK(fa_eval(ex, 1, 1, 0) == std::pair{0, 1});
    CHECK(fa_eval(ex, 1, 1, 1) == std::pair{1, 1});
    for (int idx = 0; idx < 8; ++idx) {
        const int a = idx >> 2 & 1, b = idx >> 1 & 1, cin = idx & 1;
        CHECK(fa_eval(ex, a, b, cin).first == (a ^ b ^ cin));
        CHECK(fa_eval(ex, a, b, cin).second == ((a & b) | (b & cin) | (a & cin)));
    }
}

TEST_CASE("shipped library loads with exact plus seven approximate cells") {
    const auto& lib = shipped_library();
    REQUIRE(lib.size() == 8);
    CHECK(lib.front().name == "exact");
    for (const auto& m : lib) {
        CHECK(m.netlist.has_value());
        CHECK(m.cost > 0.0);
        if (m.name != "exact") CHECK(m.cost < find_model(lib, "exact").cost);
    }
}

TEST_CASE("every model's table equals its netlist on all eight rows") {
    for (const auto& m : shipped_library()) {
        REQUIRE(m.netlist.has_value());
        for (int idx = 0; idx < 8; ++idx) {
            const int a = idx >> 2 & 1, b = idx >> 1 & 1, cin = idx & 1;
            CHECK(m.netlist->eval(a, b, cin).first == fa_eval(m, a, b, cin).first);
            CHECK(m.netlist->eval(a, b, cin).second == fa_eval(m, a, b, cin).second);
        }
    }
}

TEST_CASE("library parser rejects malformed input") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_adder_library(in);
    };
    CHECK_THROWS(parse("model m\nrow 001 0 0\n"));           // out-of-order rows
    CHECK_THROWS(parse("model m\nend\n"));                   // missing rows
    CHECK_THROWS(parse("row 000 0 0\n"));                    // outside a block
    CHECK_THROWS(parse("model m\nnet s = FOO a b\n"));       // unknown gate
    CHECK_THROWS(parse("model m\nnet s = XOR a nosig\n"));   // unknown signal
    // a declared-exact model with a wrong table is refused
    std::string bad = "model exact\n";
    for (const char* r : {"000 1 0", "001 1 0", "010 1 0", "011 0 1", "100 1 0", "101 0 1",
                          "110 0 1", "111 1 1"})
        bad += std::string("row ") + r + "\n";
    bad += "end\n";
    CHECK_THROWS(parse(bad));
}

TEST_CASE("ripple carry with exact cells is two's-complement addition, W=8 exhaustive") {
    const FullAdderModel ex = exact_adder();
    AdderConfig cfg{&ex, &ex, 0, 8};
    for (int x = 0; x < 256; ++x) {
        for (int y = 0; y < 256; ++y) {
            const auto xw = word(detail::sign_extend(x, 8), 4, 4);
            const auto yw = word(detail::sign_extend(y, 8), 4, 4);
            const std::int64_t want = detail::sign_extend(static_cast<std::uint64_t>(x + y), 8);
            REQUIRE(rca_add(cfg, xw, yw).raw == want);
        }
    }
}

TEST_CASE("all-approximate chain with the exact model degenerates to addition") {
    const FullAdderModel ex = exact_adder();
    AdderConfig all_approx{&ex, &ex, 8, 8};
    AdderConfig none{&ex, &ex, 0, 8};
    std::mt19937_64 gen(7);
    for (int i = 0; i < 2000; ++i) {
        const auto x = word(detail::sign_extend(gen() & 0xFF, 8), 4, 4);
        const auto y = word(detail::sign_extend(gen() & 0xFF, 8), 4, 4);
        REQUIRE(rca_add(all_approx, x, y).raw == rca_add(none, x, y).raw);
    }
}

TEST_CASE("fully approximate chains match the independent netlist oracle, W=8 exhaustive") {
    const FullAdderModel ex = exact_adder();
    for (const auto& m : shipped_library()) {
        AdderConfig cfg{&m, &ex, 8, 8};
        for (int x = 0; x < 256; ++x) {
            for (int y = 0; y < 256; ++y) {
                const auto xw = word(detail::sign_extend(x, 8), 4, 4);
                const auto yw = word(detail::sign_extend(y, 8), 4, 4);
                REQUIRE(rca_add(cfg, xw, yw).raw == oracle_rca(m, ex, 8, 8, x, y));
            }
        }
    }
}

TEST_CASE("approximation error stays below the exact region, W=8 exhaustive") {
    // |approx - exact| <= 2^k - 1 for every pair and every shipped cell,
    // distance taken on the W-bit ring to match wraparound semantics
    const FullAdderModel ex = exact_adder();
    for (const auto& m : shipped_library()) {
        for (int k = 1; k <= 8; ++k) {
            AdderConfig cfg{&m, &ex, k, 8};
            const std::int64_t bound = (std::int64_t{1} << k) - 1;
            for (int x = 0; x < 256; ++x) {
                for (int y = 0; y < 256; ++y) {
                    const std::uint64_t approx = detail::rca_raw(cfg, x, y);
                    const std::uint64_t exact = static_cast<std::uint64_t>(x + y);
                    const std::int64_t dist = detail::sign_extend(approx - exact, 8);
                    REQUIRE(std::abs(dist) <= bound);
                }
            }
        }
    }
}

TEST_CASE("adder error metrics: exact cell and empty approximate region are error free") {
    const FullAdderModel ex = exact_adder();
    const auto zero = adder_error_metrics(ex, 8, 8);
    CHECK(zero.error_rate == 0.0);
    CHECK(zero.mean_error_distance == 0.0);
    CHECK(zero.max_error_distance == 0);
    for (const auto& m : shipped_library()) {
        const auto none = adder_error_metrics(m, 8, 0);
        CHECK(none.error_rate == 0.0);
        CHECK(none.max_error_distance == 0);
    }
}

TEST_CASE("adder error metrics agree with an independent exhaustive enumeration") {
    const FullAdderModel ex = exact_adder();
    for (const auto& m : shipped_library()) {
        const auto got = adder_error_metrics(m, 8, 8);
        std::uint64_t errors = 0;
        double ed_sum = 0.0;
        std::int64_t ed_max = 0;
        for (int x = 0; x < 256; ++x) {
            for (int y = 0; y < 256; ++y) {
                const std::int64_t approx = oracle_rca(m, ex, 8, 8, x, y);
                const std::int64_t exact = detail::sign_extend(static_cast<std::uint64_t>(x + y), 8);
                const std::int64_t ed = std::abs(approx - exact);
                if (ed != 0) {
                    ++errors;
                    ed_sum += static_cast<double>(ed);
                    ed_max = std::max(ed_max, ed);
                }
            }
        }
        CHECK(got.pairs == 65536);
        CHECK(got.error_rate == static_cast<double>(errors) / 65536.0);
        CHECK_THAT(got.mean_error_distance,
                   Catch::Matchers::WithinRel(ed_sum / 65536.0, 1e-12) ||
                       Catch::Matchers::WithinAbs(ed_sum / 65536.0, 1e-15));
        CHECK(got.max_error_distance == ed_max);
    }
}

TEST_CASE("error rate is monotone in the approximate-bit count, W=8 exhaustive") {
    for (const auto& m : shipped_library()) {
        double prev = -1.0;
        for (int k = 0; k <= 8; ++k) {
            const double rate = adder_error_metrics(m, 8, k).error_rate;
            REQUIRE(rate >= prev);
            prev = rate;
        }
    }
}

TEST_CASE("sampled mode is deterministic for a fixed seed") {
    const auto& m = find_model(shipped_library(), "lpaa7");
    const auto a = adder_error_metrics(m, 16, 12, 99);
    const auto b = adder_error_metrics(m, 16, 12, 99);
    CHECK(a.pairs == 1000000);
    CHECK(a.error_rate == b.error_rate);
    CHECK(a.mean_error_distance == b.mean_error_distance);
    CHECK(a.max_error_distance == b.max_error_distance);
}

TEST_CASE("rca_add validates widths and formats") {
    const FullAdderModel ex = exact_adder();
    AdderConfig cfg{&ex, &ex, 0, 8};
    CHECK_THROWS_AS(rca_add(cfg, word(0, 4, 10), word(0, 4, 10)), std::invalid_argument);
    CHECK_THROWS_AS(rca_add(cfg, word(0, 4, 4), word(0, 2, 6)), std::invalid_argument);
    AdderConfig bad{&ex, &ex, 9, 8};
    CHECK_THROWS_AS(rca_add(bad, word(0, 4, 4), word(0, 4, 4)), std::invalid_argument);
}

TEST_CASE("energy trace counts one evaluation per bit cell") {
    const auto& lib = shipped_library();
    const auto& approx = find_model(lib, "lpaa4");
    const auto& ex = find_model(lib, "exact");
    AdderConfig cfg{&approx, &ex, 3, 8};
    EnergyTrace trace;
    rca_add(cfg, word(5, 4, 4), word(9, 4, 4), &trace);
    rca_add(cfg, word(1, 4, 4), word(2, 4, 4), &trace);
    CHECK(trace.counts.at("lpaa4") == 6);
    CHECK(trace.counts.at("exact") == 10);
    CHECK(trace.total_evaluations() == 16);

    EnergyTrace t2;
    rca_add(cfg, word(5, 4, 4), word(9, 4, 4), &t2);
    rca_add(cfg, word(1, 4, 4), word(2, 4, 4), &t2);
    CHECK(t2.counts == trace.counts);  // identical run, identical trace
}

TEST_CASE("approx_fraction_to_bits floors the product") {
    CHECK(approx_fraction_to_bits(40, 40) == 16);
    CHECK(approx_fraction_to_bits(0, 37) == 0);
    CHECK(approx_fraction_to_bits(80, 37) == 29);  // floor(29.6)
    CHECK(approx_fraction_to_bits(100, 37) == 37);
    CHECK_THROWS_AS(approx_fraction_to_bits(-1, 8), std::invalid_argument);
    CHECK_THROWS_AS(approx_fraction_to_bits(101, 8), std::invalid_argument);
}
