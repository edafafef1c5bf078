#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "approxcs/vecmath.hpp"

namespace approxcs {

constexpr double kSnrCapDb = 300.0;  // reported when reconstruction equals reference

// -20 log10(||x - xs|| / ||x||), capped at kSnrCapDb.
inline double snr_db(const std::vector<double>& x, const std::vector<double>& xs) {
    if (x.size() != xs.size()) throw std::invalid_argument("snr_db: length mismatch");
    const double ref = norm2(x);
    if (ref == 0.0) throw std::invalid_argument("snr_db: reference has zero norm");
    double dd = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xs[i];
        dd += d * d;
    }
    if (dd == 0.0) return kSnrCapDb;
    return std::min(kSnrCapDb, -20.0 * std::log10(std::sqrt(dd) / ref));
}

// ||x - xs|| / ||x - mean(x)||, as a ratio. Multiply by 100 for percent.
inline double prd(const std::vector<double>& x, const std::vector<double>& xs) {
    if (x.size() != xs.size()) throw std::invalid_argument("prd: length mismatch");
    const double m = mean(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xs[i];
        num += d * d;
        const double c = x[i] - m;
        den += c * c;
    }
    if (den == 0.0) throw std::invalid_argument("prd: constant reference signal");
    return std::sqrt(num) / std::sqrt(den);
}

inline double prd_pct(const std::vector<double>& x, const std::vector<double>& xs) {
    return 100.0 * prd(x, xs);
}

// Amplitude R-peak detector: a sample is a peak when it is a local maximum
// at or above 0.6x the rolling maximum over a centered 2 s window, and the
// tallest inside any 200 ms refractory span. Returns sorted sample indices.
inline std::vector<std::int64_t> detect_rpeaks(const std::vector<double>& x, double fs) {
    if (!(fs > 0.0)) throw std::invalid_argument("detect_rpeaks: fs must be positive");
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    if (n < 3) return {};

    const std::int64_t half = std::max<std::int64_t>(1, std::llround(fs));  // +-1 s
    std::vector<double> rollmax(n);
    std::deque<std::int64_t> win;  // indices with decreasing values
    std::int64_t added = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        for (; added <= std::min(n - 1, i + half); ++added) {
            while (!win.empty() && x[win.back()] <= x[added]) win.pop_back();
            win.push_back(added);
        }
        while (win.front() < i - half) win.pop_front();
        rollmax[i] = x[win.front()];
    }

    std::vector<std::int64_t> candidates;
    for (std::int64_t i = 1; i + 1 < n; ++i) {
        if (!(x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;
        if (!(rollmax[i] > 0.0)) continue;
        if (x[i] >= 0.6 * rollmax[i]) candidates.push_back(i);
    }

    const std::int64_t refractory = std::llround(0.2 * fs);
    std::vector<std::int64_t> peaks;
    for (std::int64_t c : candidates) {
        if (!peaks.empty() && c - peaks.back() < refractory) {
            if (x[c] > x[peaks.back()]) peaks.back() = c;  // keep the taller
        } else {
            peaks.push_back(c);
        }
    }
    return peaks;
}

struct PeakMatchResult {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> matches;  // (detected, truth)
};

// Greedy matching: truth peaks in order, each takes the nearest unmatched
// detection within +-tol samples (ties to the earlier detection).
inline PeakMatchResult match_peaks(const std::vector<std::int64_t>& detected,
                                   const std::vector<std::int64_t>& truth, std::int64_t tol) {
    if (tol < 0) throw std::invalid_argument("match_peaks: tolerance must be >= 0");
    PeakMatchResult res;
    std::vector<char> used(detected.size(), 0);
    std::size_t lo = 0;
    for (std::int64_t t : truth) {
        while (lo < detected.size() && detected[lo] < t - tol) ++lo;
        std::size_t best = detected.size();
        std::int64_t best_dist = tol + 1;
        for (std::size_t j = lo; j < detected.size() && detected[j] <= t + tol; ++j) {
            if (used[j]) continue;
            const std::int64_t dist = std::llabs(detected[j] - t);
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best < detected.size()) {
            used[best] = 1;
            res.matches.emplace_back(detected[best], t);
        }
    }
    res.tp = static_cast<long>(res.matches.size());
    res.fp = static_cast<long>(detected.size()) - res.tp;
    res.fn = static_cast<long>(truth.size()) - res.tp;
    return res;
}

// (FP + FN) / TP * 100. NaN when TP == 0.
inline double der_pct(const PeakMatchResult& m) {
    if (m.tp == 0) return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * static_cast<double>(m.fp + m.fn) / static_cast<double>(m.tp);
}

// TP / (TP + FP) * 100. NaN when no detections at all.
inline double ppr_pct(const PeakMatchResult& m) {
    if (m.tp + m.fp == 0) return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
}

} // namespace approxcs
