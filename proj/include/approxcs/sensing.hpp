#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "approxcs/adders.hpp"
#include "approxcs/fixedpoint.hpp"
#include "approxcs/rng.hpp"

namespace approxcs {

// Bernoulli sensing matrix in sparse index form: row k of the M x N matrix
// has ones exactly at columns z[k*r .. (k+1)*r), sorted ascending.
struct SensingPlan {
    int measurements = 128;  // M
    int frame_length = 256;  // N
    int ones_per_row = 2;    // r
    std::uint64_t seed = 0;
    std::vector<std::int32_t> z;

    std::span<const std::int32_t> row(int k) const {
        return {z.data() + static_cast<std::size_t>(k) * ones_per_row,
                static_cast<std::size_t>(ones_per_row)};
    }

    void validate() const {
        if (measurements < 1) throw std::invalid_argument("SensingPlan: need at least one row");
        if (ones_per_row < 1 || ones_per_row > frame_length)
            throw std::invalid_argument("SensingPlan: ones_per_row must be in [1, frame_length]");
        if (measurements >= frame_length)
            throw std::invalid_argument("SensingPlan: measurements must be < frame_length");
        if (z.size() != static_cast<std::size_t>(measurements) * ones_per_row)
            throw std::invalid_argument("SensingPlan: index vector has wrong length");
        for (int k = 0; k < measurements; ++k) {
            const auto idx = row(k);
            for (std::size_t q = 0; q < idx.size(); ++q) {
                if (idx[q] < 0 || idx[q] >= frame_length)
                    throw std::invalid_argument("SensingPlan: column index out of range");
                if (q > 0 && idx[q] <= idx[q - 1])
                    throw std::invalid_argument("SensingPlan: row indices must strictly increase");
            }
        }
    }
};

// Per row, r distinct columns by Floyd's sampling from a seeded mt19937_64;
// no rejection, so the draw count is fixed and plans replay exactly.
inline SensingPlan gen_bernoulli_plan(int measurements, int frame_length, int ones_per_row,
                                      std::uint64_t seed) {
    if (ones_per_row > frame_length)
        throw std::invalid_argument("gen_bernoulli_plan: more ones than columns");
    if (measurements < 1) throw std::invalid_argument("gen_bernoulli_plan: need at least one row");

    SensingPlan plan;
    plan.measurements = measurements;
    plan.frame_length = frame_length;
    plan.ones_per_row = ones_per_row;
    plan.seed = seed;
    plan.z.reserve(static_cast<std::size_t>(measurements) * ones_per_row);

    std::mt19937_64 gen(seed);
    std::vector<std::int32_t> row;
    for (int k = 0; k < measurements; ++k) {
        row.clear();
        for (int j = frame_length - ones_per_row; j < frame_length; ++j) {
            const auto t = static_cast<std::int32_t>(bounded(gen, static_cast<std::uint64_t>(j) + 1));
            if (std::find(row.begin(), row.end(), t) != row.end())
                row.push_back(static_cast<std::int32_t>(j));
            else
                row.push_back(t);
        }
        std::sort(row.begin(), row.end());
        plan.z.insert(plan.z.end(), row.begin(), row.end());
    }
    plan.validate();
    return plan;
}

// y[k] = chained ripple-carry accumulation of the row's samples, starting
// from zero, left to right. With exact cells this is the dense product.
inline FxVector acquire(const FxVector& x, const SensingPlan& plan, const AdderConfig& adders,
                        EnergyTrace* trace = nullptr) {
    plan.validate();
    if (x.size() != static_cast<std::size_t>(plan.frame_length))
        throw std::invalid_argument("acquire: frame length " + std::to_string(x.size()) +
                                    " does not match plan " + std::to_string(plan.frame_length));
    if (x.format.width() != adders.width)
        throw std::invalid_argument("acquire: frame format width does not match adder width");

    FxVector y;
    y.format = x.format;
    y.raw.reserve(plan.measurements);
    for (int k = 0; k < plan.measurements; ++k) {
        FxWord acc{0, x.format};
        for (std::int32_t col : plan.row(k)) acc = rca_add(adders, acc, x.at(col), trace);
        y.raw.push_back(acc.raw);
    }
    return y;
}

inline void write_plan(std::ostream& out, const SensingPlan& plan) {
    out << "# approxcs sensing plan\n";
    out << "measurements " << plan.measurements << "\n";
    out << "frame_length " << plan.frame_length << "\n";
    out << "ones_per_row " << plan.ones_per_row << "\n";
    out << "seed " << plan.seed << "\n";
    for (int k = 0; k < plan.measurements; ++k) {
        out << "row";
        for (std::int32_t col : plan.row(k)) out << ' ' << col;
        out << "\n";
    }
}

inline void save_plan(const std::string& path, const SensingPlan& plan) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plan file: " + path);
    write_plan(out, plan);
}

inline SensingPlan parse_plan(std::istream& in) {
    SensingPlan plan;
    plan.z.clear();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "measurements") ls >> plan.measurements;
        else if (key == "frame_length") ls >> plan.frame_length;
        else if (key == "ones_per_row") ls >> plan.ones_per_row;
        else if (key == "seed") ls >> plan.seed;
        else if (key == "row") {
            std::int32_t col;
            while (ls >> col) plan.z.push_back(col);
        } else {
            throw std::runtime_error("plan file line " + std::to_string(line_no) +
                                     ": unknown key \"" + key + "\"");
        }
        if (ls.fail() && !ls.eof())
            throw std::runtime_error("plan file line " + std::to_string(line_no) + ": parse error");
    }
    plan.validate();
    return plan;
}

inline SensingPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path);
    return parse_plan(in);
}

} // namespace approxcs
