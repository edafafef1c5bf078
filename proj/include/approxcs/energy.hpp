#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace approxcs {

// Count of 1-bit full-adder cell evaluations, keyed by model name.
// std::map keeps reporting order deterministic.
struct EnergyTrace {
    std::map<std::string, std::uint64_t> counts;

    void add(const std::string& model, std::uint64_t n) {
        if (n) counts[model] += n;
    }

    void merge(const EnergyTrace& other) {
        for (const auto& [name, n] : other.counts) counts[name] += n;
    }

    std::uint64_t total_evaluations() const {
        std::uint64_t t = 0;
        for (const auto& [name, n] : counts) t += n;
        return t;
    }
};

struct EnergyReport {
    double total_cost = 0.0;
    double baseline_cost = 0.0;  // same workload, every cell exact
    double savings_pct = 0.0;    // 100 * (1 - total/baseline)
};

// library maps model name -> proxy cost per cell evaluation and must
// contain "exact" (the baseline cell).
inline EnergyReport estimate_energy(const EnergyTrace& trace,
                                    const std::map<std::string, double>& library) {
    const auto exact_it = library.find("exact");
    if (exact_it == library.end())
        throw std::invalid_argument("estimate_energy: cost library has no \"exact\" model");
    EnergyReport rep;
    for (const auto& [name, n] : trace.counts) {
        const auto it = library.find(name);
        if (it == library.end())
            throw std::invalid_argument("estimate_energy: no cost for model \"" + name + "\"");
        rep.total_cost += static_cast<double>(n) * it->second;
    }
    rep.baseline_cost = static_cast<double>(trace.total_evaluations()) * exact_it->second;
    rep.savings_pct =
        rep.baseline_cost > 0.0 ? 100.0 * (1.0 - rep.total_cost / rep.baseline_cost) : 0.0;
    return rep;
}

struct SavingsRow {
    std::string model;
    double approx_pct = 0.0;
    EnergyReport report;
};

// Sorts per-configuration reports by (model, approx_pct) for tabulation.
inline std::vector<SavingsRow> savings_curve(std::vector<SavingsRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const SavingsRow& a, const SavingsRow& b) {
        if (a.model != b.model) return a.model < b.model;
        return a.approx_pct < b.approx_pct;
    });
    return rows;
}

} // namespace approxcs
