#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughpath/gaussian.hpp"

namespace roughpath {

struct ExperimentConfig {
    std::string experiment = "wong_zakai";  // wong_zakai | heat

    // model spec
    std::string model_kind = "brownian";  // brownian | fbm | ou_stationary |
                                          // ou_zero_start | bridge_brownian |
                                          // wiener_integral
    double hurst = 0.4;
    double theta = 1.0;
    double model_sigma = 1.0;
    std::vector<double> poly{1.0};
    double horizon = 1.0;
    int dim = 2;

    // wong-zakai
    std::vector<int> mesh_list{4, 8, 16, 32, 64, 128, 256};
    int reference_multiplier = 16;
    double sigma_metric = 2.25;
    double delta = 0.05;

    // heat
    std::vector<double> time_lags;
    int space_points = 64;
    int k_max = 512;
    double p_metric = 16.0;
    int covariance_samples = 10000;
    double heat_base_time = 0.0;

    // common
    int metric_levels = 3;
    int samples = 200;
    int moment_q = 1;  // distance moment: mean of dist^q, q in {1,2,4}
    std::uint64_t seed = 42;
    int threads = 0;  // 0 = hardware
    std::string out_dir;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    CovarianceModel model() const;
    void validate() const;
};

struct RateRow {
    double x = 0.0;        // k or tau
    double mean = 0.0;     // mean distance (q-th moment root when q > 1)
    double std_err = 0.0;
    int n = 0;
    double analytic = 0.0;  // closed-form sup-L2 column (wong-zakai)
};

struct RateReport {
    std::string experiment;
    std::string x_name;  // "k" or "tau"
    std::vector<RateRow> rows;
    double slope = 0.0;
    double slope_halfwidth = 0.0;
    double intercept = 0.0;
    double predicted = 0.0;
    std::string bound_case;
    bool regression_skipped = false;
    bool monotone_trend_pass = false;
    bool pass = false;
    double analytic_slope = 0.0;  // wong-zakai: slope of the closed-form column
    double cov_max_z = 0.0;       // heat: worst covariance z-score
    std::vector<std::string> notes;

    nlohmann::json summary_json() const;
};

RateReport run_wong_zakai(const ExperimentConfig& config);
RateReport run_heat_experiment(const ExperimentConfig& config);

// emits <stem>.csv, <stem>_loglog.dat and <stem>_summary.json
void emit_report(const RateReport& report, const std::filesystem::path& dir,
                 const std::string& stem);

struct InvariantOptions {
    std::uint64_t seed = 42;
    int scale = 1;                  // multiplies trial counts
    bool inject_chen_fault = false;  // corrupt an increment, the check must fail
};

struct InvariantResult {
    std::string name;
    int trials = 0;
    double worst = 0.0;  // worst violation magnitude (0 when clean)
    double tolerance = 0.0;
    bool pass = false;
};

struct InvariantSummary {
    std::vector<InvariantResult> results;
    bool all_pass = false;
    nlohmann::json to_json() const;
};

InvariantSummary run_invariant_suite(const InvariantOptions& options = {});

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_halfwidth = 0.0;  // standard error of the slope
};

OlsFit ols_loglog(std::span<const double> x, std::span<const double> y);

// one-sided Kendall trend test at 95%: true when y decreases in x
bool monotone_decreasing_trend(std::span<const double> y);

}  // namespace roughpath
