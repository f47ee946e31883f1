#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetero/lowerbound.hpp"
#include "hetero/sim_model.hpp"
#include "hetero/testing.hpp"

namespace hetero {

enum class ExperimentKind { mse_rate, power_curve, type1, lowerbound, baseline_compare };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::mse_rate;
    std::string name = "experiment";
    std::vector<int> n_grid{256, 512, 1024, 2048};
    int replicates = 400;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";
    bool log_replicates = false;

    Setting setting = Setting::l2;
    StatisticConfig statistic;
    bool statistic_given = false;
    // mse-rate: fix the default C_h at the smallest n instead of per n.
    bool fix_bandwidth_constant = true;
    RegressionModel scenario;  // mse-rate / baseline-compare model (n overwritten)

    // calibration (type1, power-curve)
    double eta = 0.1;
    double M = 10.0;
    int calibration_replicates = 2000;
    std::vector<double> C_list{0.0, 2.0, 5.0, 10.0};
    double alternative_level = 5.0;

    // lowerbound
    PriorSpec prior;
    std::vector<double> c_list{0.5, 0.1, 0.02};
    std::vector<int> q_list{3, 5, 7, 9};
    std::vector<double> eps_list{0.1, 0.3};
    double chi2_c = 0.05;
    int roc_replicates = 1000;
    int marginal_points = 2001;

    nlohmann::json expectations = nlohmann::json::object();
};

ExperimentConfig load_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct ExpectationResult {
    std::string metric;
    double value = 0.0;
    std::optional<double> min;
    std::optional<double> max;
    bool pass = true;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::vector<int> n;
    std::vector<double> mean;
    std::vector<double> stderr_mean;
};

struct ExperimentResult {
    std::string name;
    Table table;
    Table replicate_log;  // empty unless log_replicates
    nlohmann::json summary = nlohmann::json::object();
    std::vector<ExpectationResult> checks;
    bool ok() const;
};

RateFit fit_rate(const std::vector<int>& n, const std::vector<double>& mean,
                 const std::vector<double>& stderr_mean);

ExperimentResult run_mse_rate(const ExperimentConfig& config);
ExperimentResult run_power_curve(const ExperimentConfig& config);
ExperimentResult run_type1(const ExperimentConfig& config);
ExperimentResult run_baseline_compare(const ExperimentConfig& config);
ExperimentResult run_lowerbound(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

// Applies the config's expectations block to result.summary.
std::vector<ExpectationResult> evaluate_expectations(const nlohmann::json& expectations,
                                                     const nlohmann::json& summary);

struct RocPoint {
    StatisticId statistic = StatisticId::t_hat_kernel;
    double auc = 0.5;
    double auc_stderr = 0.0;  // null-hypothesis Mann-Whitney stderr
};
// AUC of each statistic between data drawn from the two hypotheses.
std::vector<RocPoint> roc_study(Construction construction, const PriorSpec& params,
                                const StatisticConfig& base, int replicates,
                                std::uint64_t seed, int threads = 1);
double mann_whitney_auc(std::vector<double> null_values, std::vector<double> alt_values);

std::string format_double(double x);
std::string csv_text(const Table& table);
// "# generated <UTC time>" then the table.
void write_csv(const std::string& path, const Table& table);
void write_json(const std::string& path, const nlohmann::json& j);
// Digest of a CSV file body, skipping leading comment lines.
std::string csv_file_digest(const std::string& path);

// Writes <out>/<name>.csv, <name>.json and optionally <name>_replicates.csv.
void write_result(const ExperimentResult& result, const std::string& out_dir);

}  // namespace hetero
