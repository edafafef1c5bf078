#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "approxcs/adder_library.hpp"
#include "approxcs/channel.hpp"
#include "approxcs/config.hpp"
#include "approxcs/ecg.hpp"
#include "approxcs/energy.hpp"
#include "approxcs/metrics.hpp"
#include "approxcs/recon.hpp"
#include "approxcs/sensing.hpp"
#include "approxcs/synth.hpp"

namespace approxcs {

struct ReportRow {
    std::string model;
    double approx_pct = 0.0;
    std::uint64_t seed = 0;
    int frame_count = 0;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    double prd_pct = std::numeric_limits<double>::quiet_NaN();
    double der_pct = std::numeric_limits<double>::quiet_NaN();
    double ppr_pct = std::numeric_limits<double>::quiet_NaN();
    long tp = 0, fp = 0, fn = 0;
    double energy_total = 0.0;
    double energy_baseline = 0.0;
    double energy_savings_pct = 0.0;
    bool pareto = false;
    std::string error;   // empty on success
    double wall_s = 0.0; // diagnostic only, not part of the report format
};

struct TrialResult {
    ReportRow row;
    std::vector<double> reference;      // clean signal over the framed span, original units
    std::vector<double> reconstructed;  // stitched output, original units
    std::vector<std::int64_t> detected;
    std::vector<std::int64_t> truth;
    EnergyTrace trace;
};

inline EcgRecord load_record(const RecordSpec& spec) {
    EcgRecord rec;
    switch (spec.source) {
        case RecordSource::Csv:
            rec = load_csv(spec.path, spec.fs);
            break;
        case RecordSource::Mit212:
            rec = load_mit212(spec.path, spec.channel, spec.n_samples, spec.fs);
            break;
        case RecordSource::Phantom: {
            PhantomSpec ps;
            ps.n_samples = spec.n_samples;
            ps.fs = spec.fs;
            ps.period_s = spec.period_s;
            rec = make_phantom(ps);
            break;
        }
        case RecordSource::Synth: {
            SynthEcgSpec ss;
            ss.n_samples = spec.n_samples;
            ss.fs = spec.fs;
            ss.mean_rr_s = spec.period_s;
            ss.seed = spec.seed;
            rec = make_synth_ecg(ss);
            break;
        }
    }
    if (!spec.annotations_path.empty()) {
        rec.annotations = load_annotations(spec.annotations_path);
        rec.validate();
    }
    return rec;
}

// Full chain for one configuration: quantize, acquire through the adder
// chain, dequantize, channel noise, reconstruct per frame, stitch, word-
// length-limit the result, then score against the clean record.
//
// Seeding: with a trial seed s, the plan uses derive_seed(s, 0) and the
// noise stream derive_seed(s, 1); otherwise the seeds come straight from
// the config. Measurement noise additionally derives one stream per frame.
inline TrialResult run_trial(const ExperimentConfig& cfg,
                             const std::vector<FullAdderModel>& lib, const EcgRecord& rec,
                             const std::string& model_name, double pct,
                             std::optional<std::uint64_t> trial_seed = {}) {
    const auto t0 = std::chrono::steady_clock::now();

    TrialResult out;
    out.row.model = model_name;
    out.row.approx_pct = pct;

    const std::uint64_t plan_seed = trial_seed ? derive_seed(*trial_seed, 0) : cfg.plan_seed;
    const std::uint64_t noise_seed = trial_seed ? derive_seed(*trial_seed, 1) : cfg.noise.seed;
    out.row.seed = trial_seed ? *trial_seed : cfg.plan_seed;

    const FullAdderModel& approx = find_model(lib, model_name);
    const FullAdderModel& exact = find_model(lib, "exact");
    AdderConfig adders;
    adders.approx_model = &approx;
    adders.exact_model = &exact;
    adders.width = cfg.acq_format.width();
    adders.approx_bits = approx_fraction_to_bits(pct, adders.width);

    EcgRecord sensed = rec;  // what the acquisition front end sees
    if (cfg.noise.injection_point == InjectionPoint::InputSignal && cfg.noise.variance > 0.0) {
        NoiseSpec ns = cfg.noise;
        ns.seed = noise_seed;
        sensed.samples = add_awgn(rec.samples, ns);
    }

    const SegmentedRecord seg = segment_and_normalize(sensed, cfg.frame_length, cfg.acq_format);
    out.row.frame_count = static_cast<int>(seg.frames.size());

    const SensingPlan plan =
        gen_bernoulli_plan(cfg.measurements, cfg.frame_length, cfg.ones_per_row, plan_seed);

    std::vector<double> stitched;
    stitched.reserve(seg.used_samples);
    for (std::size_t f = 0; f < seg.frames.size(); ++f) {
        try {
            const FxVector y_fx = acquire(seg.frames[f], plan, adders, &out.trace);
            std::vector<double> y = dequantize_vector(y_fx);
            if (cfg.noise.injection_point == InjectionPoint::Measurements &&
                cfg.noise.variance > 0.0) {
                NoiseSpec ns = cfg.noise;
                ns.seed = derive_seed(noise_seed, f);
                y = add_awgn(y, ns);
            }
            const ReconResult res = reconstruct(y, plan, cfg.recon);
            stitched.insert(stitched.end(), res.x_star.begin(), res.x_star.end());
        } catch (const std::exception& e) {
            throw std::runtime_error("frame " + std::to_string(f) + ": " + e.what());
        }
    }

    // Word-length limit on the recovered signal, then back to original units.
    out.reconstructed.reserve(stitched.size());
    for (double v : stitched)
        out.reconstructed.push_back(seg.scale * dequantize(quantize(v, cfg.recon_format)));

    out.reference.assign(rec.samples.begin(),
                         rec.samples.begin() + static_cast<std::ptrdiff_t>(seg.used_samples));

    out.row.snr_db = snr_db(out.reference, out.reconstructed);
    out.row.prd_pct = prd_pct(out.reference, out.reconstructed);

    out.detected = detect_rpeaks(out.reconstructed, rec.fs);
    for (std::int64_t a : rec.annotations)
        if (a < static_cast<std::int64_t>(seg.used_samples)) out.truth.push_back(a);
    const auto match = match_peaks(out.detected, out.truth, std::llround(0.05 * rec.fs));
    out.row.tp = match.tp;
    out.row.fp = match.fp;
    out.row.fn = match.fn;
    out.row.der_pct = der_pct(match);
    out.row.ppr_pct = ppr_pct(match);

    const EnergyReport er = estimate_energy(out.trace, cost_table(lib));
    out.row.energy_total = er.total_cost;
    out.row.energy_baseline = er.baseline_cost;
    out.row.energy_savings_pct = er.savings_pct;

    out.row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline TrialResult run_pipeline(const ExperimentConfig& cfg) {
    const std::vector<FullAdderModel> lib = load_adder_library(cfg.adder_library_path);
    const EcgRecord rec = load_record(cfg.record);
    return run_trial(cfg, lib, rec, cfg.model, cfg.approx_pct);
}

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

// Flags rows whose (model, approx_pct) configuration is not dominated in
// (median energy_total, median snr_db) by any other configuration: lower
// energy and higher SNR, strictly better in at least one. Failed cells are
// excluded.
inline void mark_pareto(std::vector<ReportRow>& rows) {
    std::map<std::pair<std::string, double>, std::pair<std::vector<double>, std::vector<double>>>
        groups;  // (model,pct) -> (energies, snrs)
    for (const ReportRow& r : rows) {
        if (!r.error.empty()) continue;
        auto& g = groups[{r.model, r.approx_pct}];
        g.first.push_back(r.energy_total);
        g.second.push_back(r.snr_db);
    }
    std::map<std::pair<std::string, double>, std::pair<double, double>> agg;
    for (const auto& [key, g] : groups)
        agg[key] = {detail::median(g.first), detail::median(g.second)};

    std::map<std::pair<std::string, double>, bool> flag;
    for (const auto& [key, val] : agg) {
        bool dominated = false;
        for (const auto& [okey, oval] : agg) {
            if (okey == key) continue;
            if (oval.first <= val.first && oval.second >= val.second &&
                (oval.first < val.first || oval.second > val.second)) {
                dominated = true;
                break;
            }
        }
        flag[key] = !dominated;
    }
    for (ReportRow& r : rows)
        r.pareto = r.error.empty() && flag.count({r.model, r.approx_pct}) &&
                   flag[{r.model, r.approx_pct}];
}

// Full-factorial models x pcts x seeds over one shared workload. A failing
// cell records its error and the sweep continues.
inline std::vector<ReportRow> run_sweep(const ExperimentConfig& cfg) {
    const std::vector<FullAdderModel> lib = load_adder_library(cfg.adder_library_path);
    const EcgRecord rec = load_record(cfg.record);
    std::vector<ReportRow> rows;
    for (const std::string& model : cfg.sweep_models) {
        for (double pct : cfg.sweep_pcts) {
            for (std::uint64_t seed : cfg.sweep_seeds) {
                try {
                    rows.push_back(run_trial(cfg, lib, rec, model, pct, seed).row);
                } catch (const std::exception& e) {
                    ReportRow r;
                    r.model = model;
                    r.approx_pct = pct;
                    r.seed = seed;
                    r.error = e.what();
                    rows.push_back(r);
                }
            }
        }
    }
    mark_pareto(rows);
    return rows;
}

struct NoiseSweepRow {
    double variance = 0.0;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    double prd_pct = std::numeric_limits<double>::quiet_NaN();
    double der_pct = std::numeric_limits<double>::quiet_NaN();
    double ppr_pct = std::numeric_limits<double>::quiet_NaN();
    long tp = 0, fp = 0, fn = 0;
};

// Error-margin study: noise on the raw input signal, exact adders only.
inline std::vector<NoiseSweepRow> noise_sweep(ExperimentConfig cfg,
                                              const std::vector<double>& variances) {
    cfg.model = "exact";
    cfg.approx_pct = 0.0;
    cfg.noise.injection_point = InjectionPoint::InputSignal;
    const std::vector<FullAdderModel> lib = load_adder_library(cfg.adder_library_path);
    const EcgRecord rec = load_record(cfg.record);
    std::vector<NoiseSweepRow> rows;
    for (double v : variances) {
        ExperimentConfig c = cfg;
        c.noise.variance = v;
        const TrialResult t = run_trial(c, lib, rec, c.model, c.approx_pct);
        NoiseSweepRow r;
        r.variance = v;
        r.snr_db = t.row.snr_db;
        r.prd_pct = t.row.prd_pct;
        r.der_pct = t.row.der_pct;
        r.ppr_pct = t.row.ppr_pct;
        r.tp = t.row.tp;
        r.fp = t.row.fp;
        r.fn = t.row.fn;
        rows.push_back(r);
    }
    return rows;
}

namespace detail {

inline std::string format_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

} // namespace detail

inline const char* kReportHeader =
    "model,approx_pct,seed,frame_count,snr_db,prd_pct,der_pct,ppr_pct,tp,fp,fn,"
    "energy_total,energy_baseline,energy_savings_pct,pareto,error";

inline void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << kReportHeader << "\n";
    for (const ReportRow& r : rows) {
        out << detail::csv_safe(r.model) << ',' << detail::format_num(r.approx_pct) << ','
            << r.seed << ',' << r.frame_count << ',' << detail::format_num(r.snr_db) << ','
            << detail::format_num(r.prd_pct) << ',' << detail::format_num(r.der_pct) << ','
            << detail::format_num(r.ppr_pct) << ',' << r.tp << ',' << r.fp << ',' << r.fn << ','
            << detail::format_num(r.energy_total) << ',' << detail::format_num(r.energy_baseline)
            << ',' << detail::format_num(r.energy_savings_pct) << ',' << (r.pareto ? 1 : 0) << ','
            << detail::csv_safe(r.error) << "\n";
    }
}

inline void save_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path, std::ios::binary);  // byte-stable across platforms
    if (!out) throw std::runtime_error("cannot write report: " + path);
    write_report_csv(out, rows);
}

inline void write_noise_csv(std::ostream& out, const std::vector<NoiseSweepRow>& rows) {
    out << "variance,snr_db,prd_pct,der_pct,ppr_pct,tp,fp,fn\n";
    for (const NoiseSweepRow& r : rows) {
        out << detail::format_num(r.variance) << ',' << detail::format_num(r.snr_db) << ','
            << detail::format_num(r.prd_pct) << ',' << detail::format_num(r.der_pct) << ','
            << detail::format_num(r.ppr_pct) << ',' << r.tp << ',' << r.fp << ',' << r.fn << "\n";
    }
}

inline void save_noise_csv(const std::string& path, const std::vector<NoiseSweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    write_noise_csv(out, rows);
}

} // namespace approxcs
