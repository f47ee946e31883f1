#include "hetero/testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hetero/errors.hpp"
#include "hetero/rng.hpp"
#include "hetero/serialize.hpp"

namespace hetero {

std::string to_string(Setting s) {
    switch (s) {
        case Setting::l2: return "l2";
        case Setting::profile: return "profile";
        case Setting::design_known_noise: return "design-known-noise";
        case Setting::design_unknown_noise: return "design-unknown-noise";
    }
    return "unknown";
}

Setting setting_from_string(const std::string& name) {
    for (auto s : {Setting::l2, Setting::profile, Setting::design_known_noise,
                   Setting::design_unknown_noise}) {
        if (to_string(s) == name) return s;
    }
    throw std::invalid_argument("unknown setting: " + name);
}

std::string to_string(CalibrationMode m) {
    return m == CalibrationMode::mc_quantile ? "mc-quantile" : "theory-constant";
}

CalibrationMode calibration_mode_from_string(const std::string& name) {
    if (name == "mc-quantile") return CalibrationMode::mc_quantile;
    if (name == "theory-constant") return CalibrationMode::theory_constant;
    throw std::invalid_argument("unknown calibration mode: " + name);
}

namespace {

double require_beta(std::optional<double> beta) {
    if (!beta) throw std::domain_error("this setting needs a smoothness exponent beta");
    if (!(*beta > 0.0 && *beta < 0.5)) throw std::domain_error("beta must lie in (0, 1/2)");
    return *beta;
}

}  // namespace

SeparationRate zeta(Setting setting, double alpha, std::optional<double> beta, int n) {
    if (!(alpha > 0.0)) throw std::domain_error("zeta: alpha must be positive");
    if (n < 1) throw std::domain_error("zeta: n must be positive");
    const double nn = static_cast<double>(n);
    SeparationRate r;
    r.setting = setting;
    r.alpha = alpha;
    r.n = n;
    const double mean_term = std::pow(nn, -2.0 * alpha);
    switch (setting) {
        case Setting::l2:
        case Setting::design_unknown_noise: {
            const double b = require_beta(beta);
            r.beta = b;
            r.zeta = mean_term + std::pow(nn, -b) + std::pow(nn, -2.0 * b / (4.0 * b + 1.0));
            break;
        }
        case Setting::profile:
            r.zeta = mean_term + std::pow(nn, -0.25);
            break;
        case Setting::design_known_noise: {
            const double b = require_beta(beta);
            r.beta = b;
            r.zeta = mean_term + std::pow(nn, -std::max(0.25, 2.0 * b / (4.0 * b + 1.0)));
            break;
        }
    }
    return r;
}

StatisticId dispatch_statistic(Setting setting, std::optional<double> beta) {
    switch (setting) {
        case Setting::l2:
        case Setting::design_unknown_noise:
            require_beta(beta);
            return StatisticId::t_hat_kernel;
        case Setting::profile:
            return StatisticId::s_hat;
        case Setting::design_known_noise:
            return require_beta(beta) < 0.25 ? StatisticId::s_hat : StatisticId::t_hat_kernel;
    }
    return StatisticId::t_hat_kernel;
}

StatisticEvaluator::StatisticEvaluator(StatisticConfig config, int n)
    : config_(std::move(config)), n_(DesignGrid(n).n()) {
    if (config_.id == StatisticId::t_hat_kernel) {
        if (config_.h) {
            h_ = *config_.h;
        } else {
            C_h_ = config_.C_h ? *config_.C_h
                               : default_bandwidth_constant(config_.base, config_.beta, n_,
                                                            config_.c);
            h_ = optimal_bandwidth(config_.beta, n_, *C_h_).h;
        }
        kernel_ = build_modified_kernel(config_.base, n_, *h_, config_.c);
    } else if (config_.id == StatisticId::dette_2002) {
        h_ = config_.h ? *config_.h
                       : std::pow(static_cast<double>(n_), -1.0 / (2.0 * config_.beta + 1.0));
    }
}

double StatisticEvaluator::value(std::span<const double> y) const {
    switch (config_.id) {
        case StatisticId::t_hat_kernel: return t_hat_kernel(y, *kernel_).value;
        case StatisticId::t_hat_profile: return t_hat_profile(y).value;
        case StatisticId::t1_hat: return t1_hat(y).value;
        case StatisticId::t2_hat: return t2_hat(y).value;
        case StatisticId::s_hat: return s_hat(y).value;
        case StatisticId::dette_munk: return dette_munk_stat(y);
        case StatisticId::dette_2002: return dette_2002_stat(y, config_.base, *h_);
    }
    return 0.0;
}

StatisticReport StatisticEvaluator::report(std::span<const double> y) const {
    switch (config_.id) {
        case StatisticId::t_hat_kernel: return t_hat_kernel(y, *kernel_);
        case StatisticId::t_hat_profile: return t_hat_profile(y);
        case StatisticId::t1_hat: return t1_hat(y);
        case StatisticId::t2_hat: return t2_hat(y);
        case StatisticId::s_hat: return s_hat(y);
        case StatisticId::dette_munk:
        case StatisticId::dette_2002: {
            StatisticReport rep;
            rep.statistic_id = config_.id;
            rep.value = value(y);
            rep.terms = {{to_string(config_.id), rep.value}};
            rep.n = static_cast<int>(y.size()) - 1;
            rep.h = h_;
            return rep;
        }
    }
    return {};
}

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("empirical_quantile: no values");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("empirical_quantile: p must lie in (0, 1]");
    const std::size_t N = values.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(N) - 1e-9));
    k = std::clamp<std::size_t>(k, 1, N) - 1;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(k), values.end());
    return values[k];
}

std::vector<RegressionModel> default_null_scenarios(int n, double M, double alpha, int teeth) {
    const double gamma = std::min(alpha, 1.0);
    std::vector<RegressionModel> out;
    for (const FunctionSpec& f :
         {FunctionSpec::constant(0.0), FunctionSpec::sawtooth_m_scaled(M, teeth, gamma)}) {
        for (double sigma2 : {M / 2.0, M}) {
            RegressionModel m;
            m.f = f;
            m.V = FunctionSpec::constant(sigma2);
            m.noise = NoiseSpec::gaussian();
            m.n = n;
            out.push_back(m);
        }
    }
    return out;
}

namespace {

void check_null_scenario(const RegressionModel& m, Setting setting, int n) {
    if (m.n != n) throw ConfigError("calibrate: all null scenarios must share the same n");
    const DesignGrid grid(n);
    const std::vector<double> v = m.V.on_grid(grid);
    const double scale = std::max(1.0, *std::max_element(v.begin(), v.end()));
    if (design_heteroskedasticity(v) > 1e-12 * scale) {
        throw ConfigError("calibrate: null scenario variance is not constant on the design");
    }
    if (setting == Setting::l2 && m.V.kind != FunctionKind::constant &&
        l2_heteroskedasticity(m.V) > 1e-9 * scale) {
        throw ConfigError("calibrate: null scenario variance is not constant in L2");
    }
}

}  // namespace

CalibratedTest calibrate(const StatisticConfig& statistic, Setting setting, double eta,
                         std::span<const RegressionModel> null_scenarios, int replicates,
                         std::uint64_t seed, int threads) {
    if (null_scenarios.empty()) throw ConfigError("calibrate: empty null scenario set");
    if (replicates < kMinCalibrationReplicates) {
        std::ostringstream msg;
        msg << "calibrate: need at least " << kMinCalibrationReplicates << " replicates";
        throw ConfigError(msg.str());
    }
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("calibrate: eta must lie in (0, 1)");
    const int n = null_scenarios.front().n;
    for (const auto& m : null_scenarios) check_null_scenario(m, setting, n);

    const StatisticEvaluator eval(statistic, n);
    CalibratedTest test;
    test.statistic = statistic;
    if (eval.bandwidth()) test.statistic.h = eval.bandwidth();
    test.setting = setting;
    test.n = n;
    test.mode = CalibrationMode::mc_quantile;
    test.eta = eta;
    test.level = 1.0 - eta / 2.0;
    test.replicates = replicates;
    test.seed = seed;
    const std::optional<double> beta =
        setting == Setting::profile ? std::nullopt : std::optional<double>(statistic.beta);
    test.zeta = zeta(setting, statistic.alpha, beta, n).zeta;

    double threshold = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < null_scenarios.size(); ++s) {
        const Sampler sampler(null_scenarios[s]);
        const std::uint64_t scenario_seed = derive_seed(seed, s);
        std::vector<double> values(static_cast<std::size_t>(replicates));
        parallel_for(values.size(), threads, [&](std::size_t r) {
            std::vector<double> y(static_cast<std::size_t>(n + 1));
            sampler.fill(derive_seed(scenario_seed, r), y);
            values[r] = eval.value(y);
        });
        const double q = empirical_quantile(values, test.level);
        test.scenario_quantiles.push_back(q);
        test.scenario_digests.push_back(model_digest(null_scenarios[s]));
        threshold = std::max(threshold, q);
    }
    test.threshold = threshold;
    if (!std::isfinite(test.threshold)) throw std::runtime_error("calibrate: non-finite threshold");
    return test;
}

CalibratedTest theory_test(const StatisticConfig& statistic, Setting setting, double eta,
                           double constant, int n) {
    CalibratedTest test;
    test.statistic = statistic;
    test.setting = setting;
    test.n = n;
    test.mode = CalibrationMode::theory_constant;
    test.eta = eta;
    test.level = 1.0 - eta / 2.0;
    const std::optional<double> beta =
        setting == Setting::profile ? std::nullopt : std::optional<double>(statistic.beta);
    test.zeta = zeta(setting, statistic.alpha, beta, n).zeta;
    test.theory_constant = constant;
    test.threshold = constant * test.zeta * test.zeta;
    return test;
}

Decision decide(const CalibratedTest& test, const StatisticEvaluator& evaluator,
                std::span<const double> y) {
    if (evaluator.config().id != test.statistic.id) {
        throw std::invalid_argument("decide: evaluator statistic does not match the test");
    }
    Decision d;
    d.statistic = evaluator.value(y);
    d.reject = d.statistic > test.threshold;
    return d;
}

Decision decide(const CalibratedTest& test, std::span<const double> y) {
    const StatisticEvaluator eval(test.statistic, static_cast<int>(y.size()) - 1);
    return decide(test, eval, y);
}

RejectionRate rejection_rate(const CalibratedTest& test, const RegressionModel& model,
                             int replicates, std::uint64_t seed, int threads) {
    const StatisticEvaluator eval(test.statistic, model.n);
    const Sampler sampler(model);
    std::vector<double> hits(static_cast<std::size_t>(replicates));
    parallel_for(hits.size(), threads, [&](std::size_t r) {
        std::vector<double> y(static_cast<std::size_t>(model.n + 1));
        sampler.fill(derive_seed(seed, r), y);
        hits[r] = decide(test, eval, y).reject ? 1.0 : 0.0;
    });
    RejectionRate out;
    out.replicates = replicates;
    out.rate = pairwise_mean(hits);
    out.std_error = std::sqrt(out.rate * (1.0 - out.rate) / std::max(1, replicates));
    return out;
}

}  // namespace hetero
