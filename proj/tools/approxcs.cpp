// approxcs command line: compressed-sensing acquisition with approximate
// ripple-carry adders, channel simulation, sparse recovery, and the
// energy/quality design-space sweeps. All subcommands read one INI config
// (see data/configs/) plus repeatable --set section.key=value overrides.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "approxcs/adder_library.hpp"
#include "approxcs/pipeline.hpp"
#include "approxcs/svg.hpp"

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

approxcs::ExperimentConfig load_cfg(const std::string& path,
                                    const std::vector<std::string>& overrides) {
    return approxcs::load_experiment_config(path, overrides);
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (const std::string& s : approxcs::split_list(csv)) out.push_back(std::stod(s));
    return out;
}

void cmd_acquire(const approxcs::ExperimentConfig& cfg, const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);

    const auto lib = approxcs::load_adder_library(cfg.adder_library_path);
    const auto rec = approxcs::load_record(cfg.record);
    const auto seg = approxcs::segment_and_normalize(rec, cfg.frame_length, cfg.acq_format);
    const auto plan = approxcs::gen_bernoulli_plan(cfg.measurements, cfg.frame_length,
                                                   cfg.ones_per_row, cfg.plan_seed);

    approxcs::AdderConfig adders;
    adders.approx_model = &approxcs::find_model(lib, cfg.model);
    adders.exact_model = &approxcs::find_model(lib, "exact");
    adders.width = cfg.acq_format.width();
    adders.approx_bits = approxcs::approx_fraction_to_bits(cfg.approx_pct, adders.width);

    approxcs::save_plan(outdir + "/plan.txt", plan);

    approxcs::EnergyTrace trace;
    std::ofstream mout(outdir + "/measurements.csv", std::ios::binary);
    if (!mout) throw std::runtime_error("cannot write measurements");
    mout << "frame,index,value\n";
    for (std::size_t f = 0; f < seg.frames.size(); ++f) {
        const auto y = approxcs::dequantize_vector(
            approxcs::acquire(seg.frames[f], plan, adders, &trace));
        for (std::size_t k = 0; k < y.size(); ++k)
            mout << f << ',' << k << ',' << g17(y[k]) << "\n";
    }

    const auto er = approxcs::estimate_energy(trace, approxcs::cost_table(lib));
    std::ofstream eout(outdir + "/energy.csv", std::ios::binary);
    eout << "energy_total,energy_baseline,energy_savings_pct\n"
         << g17(er.total_cost) << ',' << g17(er.baseline_cost) << ',' << g17(er.savings_pct)
         << "\n";

    std::cout << "acquired " << seg.frames.size() << " frame(s), model " << cfg.model << " at "
              << cfg.approx_pct << "% approximate bits; savings " << er.savings_pct << "%\n"
              << "wrote " << outdir << "/{plan.txt,measurements.csv,energy.csv}\n";
}

void cmd_reconstruct(const approxcs::ExperimentConfig& cfg, const std::string& plan_path,
                     const std::string& meas_path, const std::string& out_path) {
    const auto plan = approxcs::load_plan(plan_path);

    std::ifstream min(meas_path);
    if (!min) throw std::runtime_error("cannot open measurements: " + meas_path);
    std::map<long, std::vector<double>> frames;
    std::string line;
    std::getline(min, line);  // header
    while (std::getline(min, line)) {
        if (line.empty()) continue;
        long f = 0, k = 0;
        double v = 0.0;
        if (std::sscanf(line.c_str(), "%ld,%ld,%lf", &f, &k, &v) != 3)
            throw std::runtime_error("bad measurements line: " + line);
        auto& vec = frames[f];
        if (static_cast<long>(vec.size()) != k)
            throw std::runtime_error("measurements out of order at frame " + std::to_string(f));
        vec.push_back(v);
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << "frame,index,value\n";
    for (const auto& [f, y] : frames) {
        const auto res = approxcs::reconstruct(y, plan, cfg.recon);
        for (std::size_t i = 0; i < res.x_star.size(); ++i)
            out << f << ',' << i << ',' << g17(res.x_star[i]) << "\n";
        std::cout << "frame " << f << ": stages " << res.iterations_used << ", objective "
                  << res.objective_history.back() << (res.converged ? "" : " (budget exhausted)")
                  << "\n";
    }
    std::cout << "wrote " << out_path << "\n";
}

void cmd_run(const approxcs::ExperimentConfig& cfg, const std::string& out_path) {
    const auto trial = approxcs::run_pipeline(cfg);
    approxcs::save_report_csv(out_path, {trial.row});
    std::cout << approxcs::kReportHeader << "\n";
    approxcs::write_report_csv(std::cout, {trial.row});
    std::cerr << "wall time " << trial.row.wall_s << " s\n";
}

void cmd_sweep(const approxcs::ExperimentConfig& cfg, const std::string& out_path,
               const std::string& svg_dir) {
    const auto rows = approxcs::run_sweep(cfg);
    approxcs::save_report_csv(out_path, rows);
    std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";

    if (!svg_dir.empty()) {
        std::filesystem::create_directories(svg_dir);
        std::map<std::string, std::map<double, std::vector<double>>> snr, energy;
        for (const auto& r : rows) {
            if (!r.error.empty()) continue;
            snr[r.model][r.approx_pct].push_back(r.snr_db);
            energy[r.model][r.approx_pct].push_back(r.energy_total);
        }
        const auto to_series = [](const std::map<std::string, std::map<double, std::vector<double>>>& by_model) {
            std::vector<approxcs::PlotSeries> out;
            for (const auto& [model, pts] : by_model) {
                approxcs::PlotSeries s;
                s.name = model;
                for (const auto& [pct, vals] : pts)
                    s.points.emplace_back(pct, approxcs::detail::median(vals));
                out.push_back(std::move(s));
            }
            return out;
        };
        approxcs::write_line_plot(svg_dir + "/snr_vs_pct.svg", "Reconstruction quality",
                                  "approximate bits (%)", "median SNR (dB)", to_series(snr));
        approxcs::write_line_plot(svg_dir + "/energy_vs_pct.svg", "Acquisition energy proxy",
                                  "approximate bits (%)", "median energy (proxy units)",
                                  to_series(energy));
        std::cout << "wrote " << svg_dir << "/{snr_vs_pct.svg,energy_vs_pct.svg}\n";
    }
}

void cmd_adder_metrics(const approxcs::ExperimentConfig& cfg, int width,
                       const std::string& pcts_csv, const std::string& out_path) {
    const auto lib = approxcs::load_adder_library(cfg.adder_library_path);
    const auto pcts = parse_double_list(pcts_csv);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    *out << "model,width,approx_bits,approx_pct,error_rate,mean_error_distance,"
            "max_error_distance\n";
    for (const auto& m : lib) {
        for (double pct : pcts) {
            const int k = approxcs::approx_fraction_to_bits(pct, width);
            const auto em = approxcs::adder_error_metrics(m, width, k);
            *out << m.name << ',' << width << ',' << k << ',' << g17(pct) << ','
                 << g17(em.error_rate) << ',' << g17(em.mean_error_distance) << ','
                 << em.max_error_distance << "\n";
        }
    }
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
}

void cmd_noise_sweep(const approxcs::ExperimentConfig& cfg, const std::string& variances_csv,
                     const std::string& out_path) {
    const auto rows = approxcs::noise_sweep(cfg, parse_double_list(variances_csv));
    approxcs::save_noise_csv(out_path, rows);
    approxcs::write_noise_csv(std::cout, rows);
    std::cout << "wrote " << out_path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate compressed-sensing laboratory"};
    app.require_subcommand(1);

    std::string config_path = "data/configs/default.ini";
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "experiment config (INI)")
        ->capture_default_str();
    app.add_option("--set", overrides, "override: section.key=value")->take_all();

    auto* acquire = app.add_subcommand("acquire", "compress frames through the adder chain");
    std::string acquire_out = "out";
    acquire->add_option("-o,--out", acquire_out, "output directory")->capture_default_str();

    auto* reconstruct = app.add_subcommand("reconstruct", "recover frames from measurements");
    std::string plan_path, meas_path, recon_out = "xstar.csv";
    reconstruct->add_option("--plan", plan_path, "plan file from acquire")->required();
    reconstruct->add_option("--measurements", meas_path, "measurements csv")->required();
    reconstruct->add_option("-o,--out", recon_out, "output csv")->capture_default_str();

    auto* run = app.add_subcommand("run", "full pipeline for one configuration");
    std::string run_out = "report.csv";
    run->add_option("-o,--out", run_out, "report csv")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "models x percentages x seeds grid");
    std::string sweep_out = "report.csv", svg_dir;
    sweep->add_option("-o,--out", sweep_out, "report csv")->capture_default_str();
    sweep->add_option("--svg-dir", svg_dir, "also emit SVG line plots here");

    auto* adder_metrics = app.add_subcommand("adder-metrics", "adder error statistics");
    int am_width = 8;
    std::string am_pcts = "0,20,40,60,80,100", am_out;
    adder_metrics->add_option("-W,--width", am_width, "chain width in bits")
        ->capture_default_str();
    adder_metrics->add_option("--pcts", am_pcts, "approximate-bit percentages")
        ->capture_default_str();
    adder_metrics->add_option("-o,--out", am_out, "output csv (default stdout)");

    auto* noise = app.add_subcommand("noise-sweep", "input-noise error-margin study");
    std::string noise_vars = "0,1e-4,4e-4,1e-3,4e-3,1e-2,4e-2", noise_out = "noise.csv";
    noise->add_option("--variances", noise_vars, "noise variance grid")->capture_default_str();
    noise->add_option("-o,--out", noise_out, "output csv")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load_cfg(config_path, overrides);
        if (acquire->parsed()) cmd_acquire(cfg, acquire_out);
        else if (reconstruct->parsed()) cmd_reconstruct(cfg, plan_path, meas_path, recon_out);
        else if (run->parsed()) cmd_run(cfg, run_out);
        else if (sweep->parsed()) cmd_sweep(cfg, sweep_out, svg_dir);
        else if (adder_metrics->parsed()) cmd_adder_metrics(cfg, am_width, am_pcts, am_out);
        else if (noise->parsed()) cmd_noise_sweep(cfg, noise_vars, noise_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
