#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace approxcs {

// Two's-complement fixed-point format. integer_bits includes the sign bit,
// so the representable range is
//   [-2^(integer_bits-1), 2^(integer_bits-1) - 2^-fractional_bits].
struct FxFormat {
    int integer_bits = 4;
    int fractional_bits = 33;

    int width() const { return integer_bits + fractional_bits; }

    bool operator==(const FxFormat&) const = default;

    void validate() const {
        if (integer_bits < 1 || integer_bits > 16)
            throw std::invalid_argument("FxFormat: integer_bits must be in [1,16], got " +
                                        std::to_string(integer_bits));
        if (fractional_bits < 0 || fractional_bits > 64)
            throw std::invalid_argument("FxFormat: fractional_bits must be in [0,64], got " +
                                        std::to_string(fractional_bits));
        if (width() > 64)
            throw std::invalid_argument("FxFormat: total width " + std::to_string(width()) +
                                        " exceeds 64 bits");
    }

    std::string str() const {
        return "{i=" + std::to_string(integer_bits) + ",f=" + std::to_string(fractional_bits) + "}";
    }
};

// One fixed-point value: raw is the W-bit two's-complement pattern held
// sign-extended in an int64_t. Real value = raw * 2^-fractional_bits.
struct FxWord {
    std::int64_t raw = 0;
    FxFormat format;

    bool operator==(const FxWord&) const = default;
};

// Truncating quantizer: raw = floor(v * 2^f). The product is formed in
// long double (64-bit mantissa on x86-64) so the floor is exact for every
// in-range double and width up to 64.
inline FxWord quantize(double v, FxFormat fmt) {
    fmt.validate();
    if (!std::isfinite(v))
        throw std::out_of_range("quantize: non-finite value for format " + fmt.str());
    const long double scaled = std::floor(static_cast<long double>(v) * std::exp2l(fmt.fractional_bits));
    const long double lo = -std::exp2l(fmt.width() - 1);
    const long double hi = std::exp2l(fmt.width() - 1) - 1.0L;
    if (scaled < lo || scaled > hi)
        throw std::out_of_range("quantize: value " + std::to_string(v) +
                                " outside representable range of format " + fmt.str());
    return FxWord{static_cast<std::int64_t>(scaled), fmt};
}

// raw * 2^-f. Exact whenever the word fits a double mantissa (W <= 53);
// wider words are scaled in long double and rounded once to nearest on the
// final conversion.
inline double dequantize(const FxWord& w) {
    return static_cast<double>(std::ldexp(static_cast<long double>(w.raw), -w.format.fractional_bits));
}

// A vector of words sharing one format; raws stored flat.
struct FxVector {
    FxFormat format;
    std::vector<std::int64_t> raw;

    std::size_t size() const { return raw.size(); }

    FxWord at(std::size_t i) const { return FxWord{raw[i], format}; }
};

inline FxVector quantize_vector(const std::vector<double>& v, FxFormat fmt) {
    FxVector out;
    out.format = fmt;
    out.raw.reserve(v.size());
    for (double s : v) out.raw.push_back(quantize(s, fmt).raw);
    return out;
}

inline std::vector<double> dequantize_vector(const FxVector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (std::int64_t r : v.raw) out.push_back(dequantize(FxWord{r, v.format}));
    return out;
}

} // namespace approxcs
