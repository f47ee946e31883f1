#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetero/kernel.hpp"
#include "hetero/sim_model.hpp"
#include "hetero/statistics.hpp"

namespace hetero {

enum class Setting { l2, profile, design_known_noise, design_unknown_noise };

std::string to_string(Setting s);
Setting setting_from_string(const std::string& name);

struct SeparationRate {
    Setting setting = Setting::l2;
    double alpha = 0.0;
    std::optional<double> beta;
    int n = 0;
    double zeta = 0.0;
};

// l2, design-unknown: n^-2a + n^-b + n^{-2b/(4b+1)}
// profile:            n^-2a + n^-1/4
// design-known:       n^-2a + n^{-max(1/4, 2b/(4b+1))}
SeparationRate zeta(Setting setting, double alpha, std::optional<double> beta, int n);

// Statistic used by the upper-bound test in each setting.
StatisticId dispatch_statistic(Setting setting, std::optional<double> beta);

struct StatisticConfig {
    StatisticId id = StatisticId::t_hat_kernel;
    BaseKernel base = BaseKernel::box();
    double alpha = 1.0;
    double beta = 0.4;
    std::optional<double> C_h;  // unset: smallest admissible power of two
    std::optional<double> h;    // explicit bandwidth overrides the rule
    double c = kDefaultNormalizerFloor;
};

// Binds a statistic to a grid size, building the kernel once.
class StatisticEvaluator {
public:
    StatisticEvaluator(StatisticConfig config, int n);

    double value(std::span<const double> y) const;
    StatisticReport report(std::span<const double> y) const;
    const StatisticConfig& config() const { return config_; }
    int n() const { return n_; }
    std::optional<double> bandwidth() const { return h_; }
    std::optional<double> bandwidth_constant() const { return C_h_; }
    const std::optional<ModifiedKernel>& kernel() const { return kernel_; }

private:
    StatisticConfig config_;
    int n_;
    std::optional<double> h_;
    std::optional<double> C_h_;
    std::optional<ModifiedKernel> kernel_;
};

enum class CalibrationMode { theory_constant, mc_quantile };
std::string to_string(CalibrationMode m);
CalibrationMode calibration_mode_from_string(const std::string& name);

struct CalibratedTest {
    StatisticConfig statistic;
    Setting setting = Setting::l2;
    int n = 0;
    double threshold = 0.0;
    CalibrationMode mode = CalibrationMode::mc_quantile;
    double eta = 0.1;
    double level = 0.95;  // quantile level 1 - eta/2
    int replicates = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> scenario_digests;
    std::vector<double> scenario_quantiles;
    double zeta = 0.0;
    double theory_constant = 0.0;
};

// Empirical p-quantile as the ceil(p N)-th order statistic.
double empirical_quantile(std::vector<double> values, double p);

// Null scenarios {f = 0, M-scaled sawtooth in H_alpha} x {V = M/2, V = M}.
std::vector<RegressionModel> default_null_scenarios(int n, double M, double alpha,
                                                    int teeth = 8);

constexpr int kMinCalibrationReplicates = 1000;

CalibratedTest calibrate(const StatisticConfig& statistic, Setting setting, double eta,
                         std::span<const RegressionModel> null_scenarios, int replicates,
                         std::uint64_t seed, int threads = 1);

// Threshold C' zeta^2 with a user constant.
CalibratedTest theory_test(const StatisticConfig& statistic, Setting setting, double eta,
                           double constant, int n);

struct Decision {
    bool reject = false;
    double statistic = 0.0;
};

Decision decide(const CalibratedTest& test, const StatisticEvaluator& evaluator,
                std::span<const double> y);
Decision decide(const CalibratedTest& test, std::span<const double> y);

// Fraction of rejections over replicates of a model, with its standard error.
struct RejectionRate {
    double rate = 0.0;
    double std_error = 0.0;
    int replicates = 0;
};
RejectionRate rejection_rate(const CalibratedTest& test, const RegressionModel& model,
                             int replicates, std::uint64_t seed, int threads = 1);

}  // namespace hetero
