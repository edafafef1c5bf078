#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "approxcs/channel.hpp"
#include "approxcs/fixedpoint.hpp"
#include "approxcs/recon.hpp"

namespace approxcs {

// Minimal INI: [section] headers, key = value lines, '#' or ';' comments.
struct IniFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static IniFile parse(std::istream& in) {
        IniFile ini;
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::runtime_error("config line " + std::to_string(line_no) +
                                             ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                ini.sections[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": expected key = value");
            ini.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return ini;
    }

    static IniFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        return parse(in);
    }

    // "section.key=value" override, as accepted on the command line.
    void set(const std::string& assignment) {
        const auto eq = assignment.find('=');
        const auto dotpos = assignment.find('.');
        if (eq == std::string::npos || dotpos == std::string::npos || dotpos > eq)
            throw std::runtime_error("override must look like section.key=value, got \"" +
                                     assignment + "\"");
        sections[trim(assignment.substr(0, dotpos))][trim(
            assignment.substr(dotpos + 1, eq - dotpos - 1))] = trim(assignment.substr(eq + 1));
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = sections.find(section);
        return s != sections.end() && s->second.count(key);
    }

    std::string get_str(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
        const auto s = sections.find(section);
        if (s == sections.end()) return fallback;
        const auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }

    double get_num(const std::string& section, const std::string& key, double fallback) const {
        const std::string v = get_str(section, key, "");
        if (v.empty()) return fallback;
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw std::runtime_error("config [" + section + "] " + key + ": not a number: \"" +
                                     v + "\"");
        }
    }

    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const {
        const std::string v = get_str(section, key, "");
        if (v.empty()) return fallback;
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            throw std::runtime_error("config [" + section + "] " + key +
                                     ": not an unsigned integer: \"" + v + "\"");
        }
    }
};

inline std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ',')) {
        item = IniFile::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

enum class RecordSource { Csv, Mit212, Phantom, Synth };

struct RecordSpec {
    RecordSource source = RecordSource::Synth;
    std::string path;              // csv / mit212
    std::string annotations_path;  // optional sidecar
    double fs = 360.0;
    int channel = 0;
    std::int64_t n_samples = 21600;
    std::uint64_t seed = 100;      // phantom / synth generation
    double period_s = 0.8;
};

struct ExperimentConfig {
    RecordSpec record;

    int measurements = 128;  // M
    int frame_length = 256;  // N
    int ones_per_row = 2;    // r
    std::uint64_t plan_seed = 1;

    std::string adder_library_path = "data/adders.alib";
    std::string model = "exact";
    double approx_pct = 0.0;
    FxFormat acq_format{4, 33};

    NoiseSpec noise;

    ReconParams recon;
    FxFormat recon_format{4, 43};

    std::vector<std::string> sweep_models;
    std::vector<double> sweep_pcts;
    std::vector<std::uint64_t> sweep_seeds;
};

inline ExperimentConfig experiment_config_from_ini(const IniFile& ini) {
    ExperimentConfig cfg;

    const std::string src = ini.get_str("record", "source", "synth");
    if (src == "csv") cfg.record.source = RecordSource::Csv;
    else if (src == "mit212") cfg.record.source = RecordSource::Mit212;
    else if (src == "phantom") cfg.record.source = RecordSource::Phantom;
    else if (src == "synth") cfg.record.source = RecordSource::Synth;
    else throw std::runtime_error("config [record] source: unknown \"" + src + "\"");
    cfg.record.path = ini.get_str("record", "path", "");
    cfg.record.annotations_path = ini.get_str("record", "annotations", "");
    cfg.record.fs = ini.get_num("record", "fs", 360.0);
    cfg.record.channel = static_cast<int>(ini.get_num("record", "channel", 0));
    cfg.record.n_samples = static_cast<std::int64_t>(ini.get_num("record", "n_samples", 21600));
    cfg.record.seed = ini.get_u64("record", "seed", 100);
    cfg.record.period_s = ini.get_num("record", "period_s", 0.8);

    cfg.measurements = static_cast<int>(ini.get_num("sensing", "measurements", 128));
    cfg.frame_length = static_cast<int>(ini.get_num("sensing", "frame_length", 256));
    cfg.ones_per_row = static_cast<int>(ini.get_num("sensing", "ones_per_row", 2));
    cfg.plan_seed = ini.get_u64("sensing", "seed", 1);

    cfg.adder_library_path = ini.get_str("adders", "library", cfg.adder_library_path);
    cfg.model = ini.get_str("adders", "model", "exact");
    cfg.approx_pct = ini.get_num("adders", "approx_pct", 0.0);
    cfg.acq_format.integer_bits = static_cast<int>(ini.get_num("adders", "integer_bits", 4));
    cfg.acq_format.fractional_bits = static_cast<int>(ini.get_num("adders", "fractional_bits", 33));
    cfg.acq_format.validate();

    cfg.noise.variance = ini.get_num("noise", "variance", 4e-4);
    cfg.noise.seed = ini.get_u64("noise", "seed", 7);
    const std::string inj = ini.get_str("noise", "injection_point", "measurements");
    if (inj == "measurements") cfg.noise.injection_point = InjectionPoint::Measurements;
    else if (inj == "input_signal") cfg.noise.injection_point = InjectionPoint::InputSignal;
    else throw std::runtime_error("config [noise] injection_point: unknown \"" + inj + "\"");
    cfg.noise.validate();

    cfg.recon.p = ini.get_num("recon", "p", 0.9);
    cfg.recon.eps1 = ini.get_num("recon", "eps1", 1.0);
    cfg.recon.lambda1 = ini.get_num("recon", "lambda1", 1.0);
    cfg.recon.outer_iters = static_cast<int>(ini.get_num("recon", "outer_iters", 50));
    cfg.recon.rel_decrease_tol = ini.get_num("recon", "delta", 1e-5);
    cfg.recon.grad_tol = ini.get_num("recon", "grad_tol", 1e-15);
    cfg.recon.cg_budget = static_cast<int>(ini.get_num("recon", "cg_budget", 15));
    cfg.recon.continuation_divisor = ini.get_num("recon", "divisor", 4.0);
    cfg.recon.eps_floor = ini.get_num("recon", "eps_floor", 1e-6);
    cfg.recon.lambda_floor_factor = ini.get_num("recon", "lambda_floor_factor", 1e-4);
    cfg.recon.validate();
    cfg.recon_format.integer_bits = static_cast<int>(ini.get_num("recon", "integer_bits", 4));
    cfg.recon_format.fractional_bits =
        static_cast<int>(ini.get_num("recon", "fractional_bits", 43));
    cfg.recon_format.validate();

    cfg.sweep_models = split_list(ini.get_str(
        "sweep", "models", "lpaa1,lpaa2,lpaa3,lpaa4,lpaa5,lpaa6,lpaa7"));
    for (const std::string& s : split_list(ini.get_str("sweep", "pcts", "0,20,40,60,80")))
        cfg.sweep_pcts.push_back(std::stod(s));
    for (const std::string& s : split_list(ini.get_str("sweep", "seeds", "1,2,3,4,5")))
        cfg.sweep_seeds.push_back(std::stoull(s));

    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path,
                                               const std::vector<std::string>& overrides = {}) {
    IniFile ini = IniFile::load(path);
    for (const std::string& o : overrides) ini.set(o);
    return experiment_config_from_ini(ini);
}

} // namespace approxcs
