#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "roughpath/experiment.hpp"
#include "roughpath/path.hpp"
#include "roughpath/variation.hpp"

namespace {

using namespace roughpath;

PiecewiseLinearPath read_csv_path(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);
    std::vector<double> times;
    std::vector<std::vector<double>> points;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;  // header row
        if (row.size() < 2) throw std::runtime_error("csv rows need time plus coordinates");
        times.push_back(row[0]);
        points.emplace_back(row.begin() + 1, row.end());
    }
    return PiecewiseLinearPath(std::move(times), std::move(points));
}

void apply_common(ExperimentConfig& cfg, const std::string& config_path, std::uint64_t seed,
                  bool seed_set, int samples, int threads, const std::string& out) {
    if (!config_path.empty()) cfg = ExperimentConfig::from_file(config_path);
    if (seed_set) cfg.seed = seed;
    if (samples > 0) cfg.samples = samples;
    if (threads >= 0) cfg.threads = threads;
    if (!out.empty()) cfg.out_dir = out;
}

void print_report(const RateReport& r) {
    std::printf("%s: %zu rows\n", r.experiment.c_str(), r.rows.size());
    std::printf("  %-12s %-14s %-12s %-8s\n", r.x_name.c_str(), "mean_distance", "std_err", "n");
    for (const auto& row : r.rows)
        std::printf("  %-12g %-14.8g %-12.4g %-8d\n", row.x, row.mean, row.std_err, row.n);
    if (r.regression_skipped) {
        std::printf("  regression skipped\n");
    } else {
        std::printf("  slope %.4f +- %.4f   predicted rate %.4f   case %s\n", r.slope,
                    r.slope_halfwidth, r.predicted, r.bound_case.c_str());
    }
    for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
    std::printf("  pass: %s\n", r.pass ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rough-path signature and Gaussian coupling experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 42;
    int samples = -1, threads = -1;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--samples", samples, "Monte Carlo sample count");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    auto* wz = app.add_subcommand("wong-zakai", "piecewise-linear coupling rate experiment");
    add_common(wz);
    std::string wz_model = "";
    wz->add_option("--model", wz_model, "model kind (brownian, fbm, ...)");

    auto* heat = app.add_subcommand("heat", "stochastic heat equation time-regularity experiment");
    add_common(heat);

    auto* inv = app.add_subcommand("invariants", "run the invariant suite");
    add_common(inv);
    int inv_scale = 1;
    inv->add_option("--scale", inv_scale, "trial count multiplier");

    auto* sig = app.add_subcommand("signature", "truncated signature of a CSV path");
    std::string sig_csv;
    int sig_degree = 3;
    double sig_from = 0.0, sig_to = 0.0;
    bool sig_window = false;
    sig->add_option("csv", sig_csv, "CSV of time,coordinate rows")->required();
    sig->add_option("--degree", sig_degree, "truncation degree");
    sig->add_option("--from", sig_from, "window start")->each([&](const std::string&) { sig_window = true; });
    sig->add_option("--to", sig_to, "window end")->each([&](const std::string&) { sig_window = true; });

    auto* var = app.add_subcommand("variation", "p-variation of a CSV path's signature levels");
    std::string var_csv;
    double var_p = 2.25;
    int var_levels = 3;
    var->add_option("csv", var_csv, "CSV of time,coordinate rows")->required();
    var->add_option("--p", var_p, "variation exponent");
    var->add_option("--levels", var_levels, "number of signature levels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (wz->parsed()) {
            ExperimentConfig cfg;
            cfg.experiment = "wong_zakai";
            apply_common(cfg, config_path, seed, seed_set, samples, threads, out_dir);
            if (!wz_model.empty()) cfg.model_kind = wz_model;
            auto report = run_wong_zakai(cfg);
            print_report(report);
            if (!cfg.out_dir.empty()) emit_report(report, cfg.out_dir, "wong_zakai");
            return report.pass ? 0 : 1;
        }
        if (heat->parsed()) {
            ExperimentConfig cfg;
            cfg.experiment = "heat";
            cfg.time_lags = {1.0 / 1024, 1.0 / 512, 1.0 / 256, 1.0 / 128,
                             1.0 / 64,   1.0 / 32,  1.0 / 16};
            cfg.samples = 100;
            apply_common(cfg, config_path, seed, seed_set, samples, threads, out_dir);
            auto report = run_heat_experiment(cfg);
            print_report(report);
            if (!cfg.out_dir.empty()) emit_report(report, cfg.out_dir, "heat");
            return report.pass ? 0 : 1;
        }
        if (inv->parsed()) {
            InvariantOptions opt;
            opt.seed = seed_set ? seed : 42;
            opt.scale = inv_scale;
            auto summary = run_invariant_suite(opt);
            for (const auto& r : summary.results)
                std::printf("%-40s trials=%-6d worst=%-12.3e tol=%-10.1e %s\n", r.name.c_str(),
                            r.trials, r.worst, r.tolerance, r.pass ? "pass" : "FAIL");
            std::printf("all invariants: %s\n", summary.all_pass ? "pass" : "FAIL");
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                std::ofstream js(std::filesystem::path(out_dir) / "invariants.json");
                js << summary.to_json().dump(2) << "\n";
            }
            return summary.all_pass ? 0 : 1;
        }
        if (sig->parsed()) {
            auto path = read_csv_path(sig_csv);
            double a = sig_window ? sig_from : path.t0();
            double b = sig_window ? sig_to : path.t1();
            auto s = signature_of_path(path, a, b, sig_degree);
            for (int n = 0; n <= sig_degree; ++n) {
                std::printf("level %d:", n);
                for (double v : s.level(n)) std::printf(" %.12g", v);
                std::printf("\n");
            }
            return 0;
        }
        if (var->parsed()) {
            auto path = read_csv_path(var_csv);
            std::vector<double> grid(path.times());
            auto mf = MultiplicativeFunctional::from_path(path, grid, var_levels);
            for (int n = 1; n <= var_levels; ++n)
                std::printf("level %d %.6g-variation: %.12g\n", n, var_p,
                            p_variation_level(mf, n, var_p));
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
