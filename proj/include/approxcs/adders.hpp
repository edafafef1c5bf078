#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "approxcs/energy.hpp"
#include "approxcs/fixedpoint.hpp"
#include "approxcs/rng.hpp"

namespace approxcs {

enum class GateKind { And, Or, Not, Xor, Xnor, Nand, Nor };

// One gate of a cell netlist. Signals are numbered 0=a, 1=b, 2=cin, then
// one per gate output in listing order; in1 is ignored for Not.
struct Gate {
    GateKind kind = GateKind::And;
    int in0 = 0;
    int in1 = -1;
};

struct Netlist {
    std::vector<Gate> gates;
    int sum_signal = -1;
    int cout_signal = -1;

    std::pair<int, int> eval(int a, int b, int cin) const {
        std::vector<int> sig;
        sig.reserve(3 + gates.size());
        sig.push_back(a);
        sig.push_back(b);
        sig.push_back(cin);
        for (const Gate& g : gates) {
            const int x = sig.at(g.in0);
            const int y = g.kind == GateKind::Not ? 0 : sig.at(g.in1);
            int o = 0;
            switch (g.kind) {
                case GateKind::And:  o = x & y; break;
                case GateKind::Or:   o = x | y; break;
                case GateKind::Not:  o = x ^ 1; break;
                case GateKind::Xor:  o = x ^ y; break;
                case GateKind::Xnor: o = (x ^ y) ^ 1; break;
                case GateKind::Nand: o = (x & y) ^ 1; break;
                case GateKind::Nor:  o = (x | y) ^ 1; break;
            }
            sig.push_back(o);
        }
        return {sig.at(sum_signal), sig.at(cout_signal)};
    }
};

// A 1-bit full-adder cell: eight-row truth table stored as two bitmasks
// (bit index = (a<<2)|(b<<1)|cin), an optional gate netlist that must
// reproduce the table, and a proxy energy cost per evaluation.
struct FullAdderModel {
    std::string name;
    std::uint8_t sum_bits = 0;
    std::uint8_t cout_bits = 0;
    std::optional<Netlist> netlist;
    double cost = 1.0;
    std::optional<int> transistor_count;

    std::pair<int, int> row(int idx) const {
        return {(sum_bits >> idx) & 1, (cout_bits >> idx) & 1};
    }

    void set_row(int idx, int sum, int cout) {
        sum_bits = static_cast<std::uint8_t>((sum_bits & ~(1u << idx)) | (sum & 1) << idx);
        cout_bits = static_cast<std::uint8_t>((cout_bits & ~(1u << idx)) | (cout & 1) << idx);
    }

    void validate() const {
        if (cost < 0.0)
            throw std::invalid_argument("adder model \"" + name + "\": negative cost");
        for (int idx = 0; idx < 8; ++idx) {
            const int a = (idx >> 2) & 1, b = (idx >> 1) & 1, cin = idx & 1;
            const auto [s, c] = row(idx);
            if (netlist) {
                const auto [ns, nc] = netlist->eval(a, b, cin);
                if (ns != s || nc != c)
                    throw std::invalid_argument("adder model \"" + name +
                                                "\": netlist disagrees with table at row " +
                                                std::to_string(idx));
            }
            if (name == "exact") {
                const int es = a ^ b ^ cin;
                const int ec = (a & b) | (b & cin) | (a & cin);
                if (s != es || c != ec)
                    throw std::invalid_argument(
                        "adder model \"exact\" does not implement full addition at row " +
                        std::to_string(idx));
            }
        }
    }
};

inline std::pair<int, int> fa_eval(const FullAdderModel& m, int a, int b, int cin) {
    return m.row(((a & 1) << 2) | ((b & 1) << 1) | (cin & 1));
}

// The reference cell: sum = a^b^cin, cout = majority(a,b,cin), with the
// canonical two-XOR / two-AND / OR netlist.
inline FullAdderModel exact_adder() {
    FullAdderModel m;
    m.name = "exact";
    for (int idx = 0; idx < 8; ++idx) {
        const int a = (idx >> 2) & 1, b = (idx >> 1) & 1, cin = idx & 1;
        m.set_row(idx, a ^ b ^ cin, (a & b) | (b & cin) | (a & cin));
    }
    Netlist nl;
    nl.gates = {
        {GateKind::Xor, 0, 1},  // 3: a^b
        {GateKind::Xor, 3, 2},  // 4: sum
        {GateKind::And, 0, 1},  // 5: a&b
        {GateKind::And, 3, 2},  // 6: (a^b)&cin
        {GateKind::Or, 5, 6},   // 7: cout
    };
    nl.sum_signal = 4;
    nl.cout_signal = 7;
    m.netlist = nl;
    m.cost = 38.0;
    m.transistor_count = 38;
    m.validate();
    return m;
}

// Ripple-carry chain layout: cells 0..approx_bits-1 use the approximate
// model, cells approx_bits..width-1 the exact one. The carry ripples
// continuously across the boundary.
struct AdderConfig {
    const FullAdderModel* approx_model = nullptr;
    const FullAdderModel* exact_model = nullptr;
    int approx_bits = 0;
    int width = 37;

    void validate() const {
        if (!approx_model || !exact_model)
            throw std::invalid_argument("AdderConfig: missing model");
        if (width < 1 || width > 64)
            throw std::invalid_argument("AdderConfig: width must be in [1,64]");
        if (approx_bits < 0 || approx_bits > width)
            throw std::invalid_argument("AdderConfig: approx_bits must be in [0,width]");
    }
};

namespace detail {

inline std::int64_t sign_extend(std::uint64_t bits, int width) {
    if (width == 64) return static_cast<std::int64_t>(bits);
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    bits &= mask;
    if (bits >> (width - 1)) bits |= ~mask;
    return static_cast<std::int64_t>(bits);
}

// Core bit loop without format bookkeeping; operates on raw W-bit patterns.
inline std::uint64_t rca_raw(const AdderConfig& cfg, std::uint64_t x, std::uint64_t y) {
    std::uint64_t out = 0;
    int carry = 0;
    for (int i = 0; i < cfg.width; ++i) {
        const FullAdderModel& m = i < cfg.approx_bits ? *cfg.approx_model : *cfg.exact_model;
        const auto [s, c] = fa_eval(m, (x >> i) & 1, (y >> i) & 1, carry);
        out |= static_cast<std::uint64_t>(s) << i;
        carry = c;
    }
    return out;  // carry out of the top cell is discarded (wraparound)
}

} // namespace detail

inline FxWord rca_add(const AdderConfig& cfg, const FxWord& x, const FxWord& y,
                      EnergyTrace* trace = nullptr) {
    cfg.validate();
    if (x.format != y.format)
        throw std::invalid_argument("rca_add: operand formats differ (" + x.format.str() + " vs " +
                                    y.format.str() + ")");
    if (x.format.width() != cfg.width)
        throw std::invalid_argument("rca_add: operand width " + std::to_string(x.format.width()) +
                                    " does not match adder width " + std::to_string(cfg.width));
    const std::uint64_t bits =
        detail::rca_raw(cfg, static_cast<std::uint64_t>(x.raw), static_cast<std::uint64_t>(y.raw));
    if (trace) {
        trace->add(cfg.approx_model->name, static_cast<std::uint64_t>(cfg.approx_bits));
        trace->add(cfg.exact_model->name, static_cast<std::uint64_t>(cfg.width - cfg.approx_bits));
    }
    return FxWord{detail::sign_extend(bits, cfg.width), x.format};
}

struct AdderErrorMetrics {
    double error_rate = 0.0;
    double mean_error_distance = 0.0;   // raw integer units, signed interpretation
    std::int64_t max_error_distance = 0;
    std::uint64_t pairs = 0;
};

// Error statistics of the mixed chain against two's-complement addition.
// Exhaustive over all 4^W pairs for W <= 12, otherwise 10^6 seeded samples.
inline AdderErrorMetrics adder_error_metrics(const FullAdderModel& model, int width,
                                             int approx_bits,
                                             std::uint64_t sample_seed = 0x5eedULL) {
    static const FullAdderModel kExact = exact_adder();
    AdderConfig cfg{&model, &kExact, approx_bits, width};
    cfg.validate();

    AdderErrorMetrics out;
    long double ed_sum = 0.0L;
    std::uint64_t errors = 0;

    const auto measure = [&](std::uint64_t xb, std::uint64_t yb) {
        const std::int64_t approx = detail::sign_extend(detail::rca_raw(cfg, xb, yb), width);
        const std::int64_t exact = detail::sign_extend(xb + yb, width);
        if (approx != exact) {
            ++errors;
            const std::int64_t ed = approx > exact ? approx - exact : exact - approx;
            ed_sum += static_cast<long double>(ed);
            out.max_error_distance = std::max(out.max_error_distance, ed);
        }
    };

    if (width <= 12) {
        const std::uint64_t n = std::uint64_t{1} << width;
        for (std::uint64_t xb = 0; xb < n; ++xb)
            for (std::uint64_t yb = 0; yb < n; ++yb) measure(xb, yb);
        out.pairs = (std::uint64_t{1} << width) * (std::uint64_t{1} << width);
    } else {
        std::mt19937_64 gen(sample_seed);
        constexpr std::uint64_t kSamples = 1'000'000;
        const auto draw = [&]() {
            return width == 64 ? gen() : bounded(gen, std::uint64_t{1} << width);
        };
        for (std::uint64_t i = 0; i < kSamples; ++i) measure(draw(), draw());
        out.pairs = kSamples;
    }

    out.error_rate = static_cast<double>(errors) / static_cast<double>(out.pairs);
    out.mean_error_distance = static_cast<double>(ed_sum / static_cast<long double>(out.pairs));
    return out;
}

// k = floor(pct/100 * W)
inline int approx_fraction_to_bits(double pct, int width) {
    if (pct < 0.0 || pct > 100.0)
        throw std::invalid_argument("approx_fraction_to_bits: percentage must be in [0,100]");
    return static_cast<int>(std::floor(pct * width / 100.0));
}

} // namespace approxcs
