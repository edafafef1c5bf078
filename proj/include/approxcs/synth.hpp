#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "approxcs/ecg.hpp"
#include "approxcs/rng.hpp"

namespace approxcs {

// Piecewise-linear test signal: a flat baseline with a triangular spike per
// beat (plus a smaller late triangle), so the second difference is nonzero
// only at the handful of corner samples. Annotations mark the spike apexes.
struct PhantomSpec {
    std::int64_t n_samples = 1024;
    double fs = 360.0;
    double period_s = 0.8;
    double peak_amp = 1.0;
    double peak_half_width_s = 0.045;
    double bump_amp = 0.25;       // secondary triangle, below the detector threshold
    double bump_half_width_s = 0.09;
    double bump_offset_s = 0.30;  // apex offset after the main spike
};

inline EcgRecord make_phantom(const PhantomSpec& spec = {}) {
    EcgRecord rec;
    rec.fs = spec.fs;
    rec.samples.assign(spec.n_samples, 0.0);

    const auto add_triangle = [&](double center, double half_width, double amp) {
        const std::int64_t c = std::llround(center);
        const std::int64_t hw = std::max<std::int64_t>(2, std::llround(half_width * spec.fs));
        for (std::int64_t i = c - hw; i <= c + hw; ++i) {
            if (i < 0 || i >= spec.n_samples) continue;
            const double w = 1.0 - static_cast<double>(std::llabs(i - c)) / static_cast<double>(hw);
            rec.samples[i] += amp * w;
        }
        return c;
    };

    const double period = spec.period_s * spec.fs;
    for (double center = period * 0.5; center < static_cast<double>(spec.n_samples);
         center += period) {
        const std::int64_t apex = add_triangle(center, spec.peak_half_width_s, spec.peak_amp);
        add_triangle(center + spec.bump_offset_s * spec.fs, spec.bump_half_width_s, spec.bump_amp);
        if (apex >= 0 && apex < spec.n_samples) rec.annotations.push_back(apex);
    }
    rec.validate();
    return rec;
}

// Smooth ECG-like waveform: per beat a sum of Gaussian deflections
// (P, Q, R, S, T) on a slow baseline drift, with seeded RR jitter.
// Used as the stand-in arrhythmia record for desk-scale evaluation.
struct SynthEcgSpec {
    std::int64_t n_samples = 21600;  // 60 s at 360 Hz
    double fs = 360.0;
    double mean_rr_s = 0.80;         // ~75 bpm
    double rr_jitter_s = 0.03;
    std::uint64_t seed = 100;
    double drift_amp = 0.04;
};

inline EcgRecord make_synth_ecg(const SynthEcgSpec& spec = {}) {
    EcgRecord rec;
    rec.fs = spec.fs;
    rec.samples.assign(spec.n_samples, 0.0);

    struct Wave {
        double offset_s, sigma_s, amp;
    };
    // P, Q, R, S, T relative to the R apex
    const Wave waves[] = {
        {-0.190, 0.026, 0.16}, {-0.042, 0.011, -0.12}, {0.0, 0.016, 1.05},
        {0.040, 0.011, -0.18}, {0.290, 0.055, 0.34},
    };

    std::mt19937_64 gen(spec.seed);
    std::vector<double> r_centers;
    double t = spec.mean_rr_s * 0.6;
    while (t * spec.fs < static_cast<double>(spec.n_samples)) {
        r_centers.push_back(t * spec.fs);
        t += spec.mean_rr_s + spec.rr_jitter_s * (2.0 * unit_double(gen) - 1.0);
    }

    for (double c : r_centers) {
        for (const Wave& w : waves) {
            const double mu = c + w.offset_s * spec.fs;
            const double sigma = w.sigma_s * spec.fs;
            const std::int64_t lo = std::max<std::int64_t>(0, std::llround(mu - 5.0 * sigma));
            const std::int64_t hi =
                std::min<std::int64_t>(spec.n_samples - 1, std::llround(mu + 5.0 * sigma));
            for (std::int64_t i = lo; i <= hi; ++i) {
                const double u = (static_cast<double>(i) - mu) / sigma;
                rec.samples[i] += w.amp * std::exp(-0.5 * u * u);
            }
        }
        const auto apex = std::llround(c);
        if (apex >= 0 && apex < spec.n_samples) rec.annotations.push_back(apex);
    }

    for (std::int64_t i = 0; i < spec.n_samples; ++i)
        rec.samples[i] +=
            spec.drift_amp * std::sin(2.0 * 3.14159265358979323846 * 0.24 * i / spec.fs);
    rec.validate();
    return rec;
}

// Packs two channels into the interleaved 3-bytes-per-pair layout used by
// the arrhythmia database files. Values are ADU in [-2048, 2047].
inline void write_mit212(const std::string& path, const std::vector<int>& ch0,
                         const std::vector<int>& ch1) {
    if (ch0.size() != ch1.size())
        throw std::invalid_argument("write_mit212: channels must have equal length");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write signal file: " + path);
    for (std::size_t i = 0; i < ch0.size(); ++i) {
        const auto bytes = pack212(ch0[i], ch1[i]);
        out.write(reinterpret_cast<const char*>(bytes.data()), 3);
    }
}

inline int to_adu(double mv, double gain = 200.0, double baseline = 1024.0) {
    const double v = std::round(baseline + gain * mv);
    return static_cast<int>(std::min(2047.0, std::max(0.0, v)));
}

// Synthesizes a two-channel excerpt on disk (channel 1 is a scaled copy)
// and returns the channel-0 record with its R-peak annotations.
inline EcgRecord write_synth_mit212(const std::string& path, const SynthEcgSpec& spec = {}) {
    EcgRecord rec = make_synth_ecg(spec);
    std::vector<int> ch0, ch1;
    ch0.reserve(rec.samples.size());
    ch1.reserve(rec.samples.size());
    for (double mv : rec.samples) {
        ch0.push_back(to_adu(mv));
        ch1.push_back(to_adu(0.6 * mv));
    }
    write_mit212(path, ch0, ch1);
    return rec;
}

} // namespace approxcs
