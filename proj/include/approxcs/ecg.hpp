#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "approxcs/fixedpoint.hpp"

namespace approxcs {

struct EcgRecord {
    std::vector<double> samples;            // millivolts (or arbitrary units for CSV input)
    double fs = 360.0;
    int resolution_bits = 11;
    std::vector<std::int64_t> annotations;  // truth R-peak sample indices, sorted

    void validate() const {
        if (!(fs > 0.0)) throw std::invalid_argument("EcgRecord: fs must be positive");
        for (std::int64_t a : annotations)
            if (a < 0 || a >= static_cast<std::int64_t>(samples.size()))
                throw std::invalid_argument("EcgRecord: annotation index out of range");
    }
};

namespace detail {

inline bool parse_double(const std::string& tok, double& out) {
    std::size_t used = 0;
    try {
        out = std::stod(tok, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == tok.size();
}

} // namespace detail

// One sample per line, optional second column = annotation flag (0/1),
// optional single header line. Comma or whitespace separated.
inline EcgRecord parse_csv_record(std::istream& in, double fs = 360.0) {
    EcgRecord rec;
    rec.fs = fs;
    std::string line;
    int line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        double v = 0.0;
        if (!detail::parse_double(tok, v)) {
            if (!saw_data && line_no == 1) continue;  // header
            throw std::runtime_error("csv record line " + std::to_string(line_no) +
                                     ": cannot parse sample \"" + tok + "\"");
        }
        std::string flag_tok;
        if (ls >> flag_tok) {
            double flag = 0.0;
            if (!detail::parse_double(flag_tok, flag) || (flag != 0.0 && flag != 1.0))
                throw std::runtime_error("csv record line " + std::to_string(line_no) +
                                         ": annotation flag must be 0 or 1");
            if (flag == 1.0)
                rec.annotations.push_back(static_cast<std::int64_t>(rec.samples.size()));
        }
        rec.samples.push_back(v);
        saw_data = true;
    }
    if (!saw_data) throw std::runtime_error("csv record: no samples");
    rec.validate();
    return rec;
}

inline EcgRecord load_csv(const std::string& path, double fs = 360.0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open record: " + path);
    return parse_csv_record(in, fs);
}

// Annotation sidecar: one sample index per line.
inline std::vector<std::int64_t> load_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open annotations: " + path);
    std::vector<std::int64_t> ann;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::int64_t idx;
        if (!(ls >> idx)) {
            std::string tok;
            std::istringstream probe(line);
            if (!(probe >> tok)) continue;  // blank
            throw std::runtime_error("annotation file line " + std::to_string(line_no) +
                                     ": expected a sample index");
        }
        ann.push_back(idx);
    }
    std::sort(ann.begin(), ann.end());
    return ann;
}

// Three packed bytes -> two 12-bit two's-complement samples:
//   sample0 = ((b1 & 0x0F) << 8) | b0,  sample1 = ((b1 & 0xF0) << 4) | b2,
// each sign-extended from 12 bits.
inline std::pair<int, int> unpack212(std::uint8_t b0, std::uint8_t b1, std::uint8_t b2) {
    int s0 = ((b1 & 0x0F) << 8) | b0;
    int s1 = ((b1 & 0xF0) << 4) | b2;
    if (s0 & 0x800) s0 -= 0x1000;
    if (s1 & 0x800) s1 -= 0x1000;
    return {s0, s1};
}

inline std::array<std::uint8_t, 3> pack212(int s0, int s1) {
    const unsigned u0 = static_cast<unsigned>(s0) & 0xFFF;
    const unsigned u1 = static_cast<unsigned>(s1) & 0xFFF;
    return {static_cast<std::uint8_t>(u0 & 0xFF),
            static_cast<std::uint8_t>(((u1 >> 8) << 4) | (u0 >> 8)),
            static_cast<std::uint8_t>(u1 & 0xFF)};
}

// Two interleaved signals, one sample of each per 3-byte group. Converts
// ADU to millivolts with the MLII convention (gain 200 adu/mV, baseline 1024).
inline EcgRecord load_mit212(const std::string& path, int channel, std::int64_t n_samples,
                             double fs = 360.0, double gain = 200.0, double baseline = 1024.0) {
    if (channel != 0 && channel != 1)
        throw std::invalid_argument("load_mit212: channel must be 0 or 1");
    if (n_samples < 1) throw std::invalid_argument("load_mit212: n_samples must be >= 1");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open signal file: " + path);

    std::vector<char> bytes(static_cast<std::size_t>(n_samples) * 3);
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw std::runtime_error("signal file truncated: " + path + " (need " +
                                 std::to_string(bytes.size()) + " bytes, got " +
                                 std::to_string(in.gcount()) + ")");

    EcgRecord rec;
    rec.fs = fs;
    rec.resolution_bits = 11;
    rec.samples.reserve(n_samples);
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const auto b0 = static_cast<std::uint8_t>(bytes[3 * i]);
        const auto b1 = static_cast<std::uint8_t>(bytes[3 * i + 1]);
        const auto b2 = static_cast<std::uint8_t>(bytes[3 * i + 2]);
        const auto [s0, s1] = unpack212(b0, b1, b2);
        rec.samples.push_back(((channel == 0 ? s0 : s1) - baseline) / gain);
    }
    rec.validate();
    return rec;
}

struct SegmentedRecord {
    std::vector<FxVector> frames;  // quantized, normalized
    double scale = 1.0;            // global max |sample|; reconstruction is multiplied back
    std::size_t used_samples = 0;  // frame_count * N; the dropped tail is excluded
};

// Non-overlapping frames of length n, tail dropped. Samples are divided by
// the global peak magnitude of the retained span, then quantized.
inline SegmentedRecord segment_and_normalize(const EcgRecord& rec, int n, FxFormat fmt) {
    if (n < 1) throw std::invalid_argument("segment_and_normalize: frame length must be >= 1");
    if (rec.samples.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("segment_and_normalize: record shorter than one frame (" +
                                    std::to_string(rec.samples.size()) + " < " +
                                    std::to_string(n) + ")");
    SegmentedRecord seg;
    const std::size_t frames = rec.samples.size() / static_cast<std::size_t>(n);
    seg.used_samples = frames * static_cast<std::size_t>(n);

    double peak = 0.0;
    for (std::size_t i = 0; i < seg.used_samples; ++i)
        peak = std::max(peak, std::abs(rec.samples[i]));
    seg.scale = peak > 0.0 ? peak : 1.0;

    seg.frames.reserve(frames);
    std::vector<double> buf(n);
    for (std::size_t f = 0; f < frames; ++f) {
        for (int i = 0; i < n; ++i) buf[i] = rec.samples[f * n + i] / seg.scale;
        seg.frames.push_back(quantize_vector(buf, fmt));
    }
    return seg;
}

} // namespace approxcs
