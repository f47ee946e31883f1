#include "hetero/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hetero/errors.hpp"
#include "hetero/numerics.hpp"
#include "hetero/rng.hpp"
#include "hetero/serialize.hpp"

namespace hetero {

using nlohmann::json;

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::mse_rate: return "mse-rate";
        case ExperimentKind::power_curve: return "power-curve";
        case ExperimentKind::type1: return "type1";
        case ExperimentKind::lowerbound: return "lowerbound";
        case ExperimentKind::baseline_compare: return "baseline-compare";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (auto k : {ExperimentKind::mse_rate, ExperimentKind::power_curve, ExperimentKind::type1,
                   ExperimentKind::lowerbound, ExperimentKind::baseline_compare}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown experiment: " + name);
}

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(out);
}

void read_prior(const json& j, PriorSpec& p) {
    if (j.contains("kind")) p.kind = prior_kind_from_string(j.at("kind").get<std::string>());
    read_if(j, "n", p.n);
    read_if(j, "alpha", p.alpha);
    read_if(j, "beta", p.beta);
    read_if(j, "c", p.c);
    read_if(j, "q", p.q);
    read_if(j, "M", p.M);
    read_if(j, "rejection_budget", p.rejection_budget);
}

}  // namespace

ExperimentConfig load_config(const json& j) {
    ExperimentConfig c;
    try {
        c.experiment = experiment_kind_from_string(j.at("experiment").get<std::string>());
        c.name = j.value("name", to_string(c.experiment));
        read_if(j, "n_grid", c.n_grid);
        read_if(j, "replicates", c.replicates);
        read_if(j, "seed", c.seed);
        read_if(j, "threads", c.threads);
        read_if(j, "out", c.out_dir);
        read_if(j, "log_replicates", c.log_replicates);
        if (j.contains("setting")) c.setting = setting_from_string(j.at("setting").get<std::string>());
        if (j.contains("statistic")) {
            const json& s = j.at("statistic");
            c.statistic = s.is_string() ? json{{"statistic", s}}.get<StatisticConfig>()
                                        : s.get<StatisticConfig>();
            c.statistic_given = true;
        }
        read_if(j, "fix_bandwidth_constant", c.fix_bandwidth_constant);
        if (j.contains("scenario")) {
            json s = j.at("scenario");
            if (!s.contains("n")) s["n"] = c.n_grid.empty() ? 4 : c.n_grid.front();
            c.scenario = s.get<RegressionModel>();
        }
        read_if(j, "eta", c.eta);
        read_if(j, "M", c.M);
        read_if(j, "calibration_replicates", c.calibration_replicates);
        read_if(j, "C_list", c.C_list);
        read_if(j, "alternative_level", c.alternative_level);
        if (j.contains("prior")) read_prior(j.at("prior"), c.prior);
        read_if(j, "c_list", c.c_list);
        read_if(j, "q_list", c.q_list);
        read_if(j, "eps_list", c.eps_list);
        read_if(j, "chi2_c", c.chi2_c);
        read_if(j, "roc_replicates", c.roc_replicates);
        read_if(j, "marginal_points", c.marginal_points);
        if (j.contains("expectations")) c.expectations = j.at("expectations");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.n_grid.empty()) throw ConfigError("config: n_grid must not be empty");
    for (std::size_t i = 1; i < c.n_grid.size(); ++i) {
        if (c.n_grid[i] <= c.n_grid[i - 1]) throw ConfigError("config: n_grid must be strictly increasing");
    }
    const bool rate = c.experiment == ExperimentKind::mse_rate ||
                      c.experiment == ExperimentKind::baseline_compare;
    if (rate && c.replicates < 100) throw ConfigError("config: rate experiments need >= 100 replicates");
    if (c.experiment == ExperimentKind::mse_rate && c.n_grid.size() < 3) {
        throw ConfigError("config: mse-rate needs at least 3 grid sizes");
    }
    if (!c.statistic_given) {
        c.statistic.id = dispatch_statistic(c.setting, c.statistic.beta);
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return load_config(j);
}

bool ExperimentResult::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

RateFit fit_rate(const std::vector<int>& n, const std::vector<double>& mean,
                 const std::vector<double>& stderr_mean) {
    if (n.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 grid points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(mean[i] > 0.0)) throw std::domain_error("fit_rate: non-positive mean at n = " + std::to_string(n[i]));
        lx.push_back(std::log(static_cast<double>(n[i])));
        ly.push_back(std::log(mean[i]));
    }
    const LinearFit f = least_squares(lx, ly);
    return RateFit{f.slope, f.intercept, f.slope_stderr, n, mean, stderr_mean};
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    double var = 0.0;
};

MeanSe mean_se(std::span<const double> v) {
    MeanSe out;
    out.mean = pairwise_mean(v);
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = (v[i] - out.mean) * (v[i] - out.mean);
    out.var = v.size() > 1 ? pairwise_sum(d) / static_cast<double>(v.size() - 1) : 0.0;
    out.se = std::sqrt(out.var / static_cast<double>(v.size()));
    return out;
}

// Target of each statistic as a function of the design values.
double statistic_target(StatisticId id, std::span<const double> f, std::span<const double> V) {
    switch (id) {
        case StatisticId::t_hat_kernel:
        case StatisticId::t_hat_profile:
            return proxy_T(f, V);
        case StatisticId::t1_hat: return proxy_T1_tilde(f, V);
        case StatisticId::t2_hat: return proxy_T2_tilde(f, V);
        case StatisticId::s_hat:
            return proxy_T(f, V) + proxy_T1_tilde(f, V) + proxy_T2_tilde(f, V);
        default:
            throw ConfigError("mse-rate: no proxy target for " + to_string(id));
    }
}

StatisticConfig with_fixed_bandwidth(const ExperimentConfig& c) {
    StatisticConfig s = c.statistic;
    if (s.id == StatisticId::t_hat_kernel && !s.C_h && !s.h && c.fix_bandwidth_constant) {
        s.C_h = default_bandwidth_constant(s.base, s.beta, c.n_grid.front(), s.c);
    }
    return s;
}

void finish(ExperimentResult& r, const ExperimentConfig& c) {
    r.checks = evaluate_expectations(c.expectations, r.summary);
    json checks = json::array();
    for (const auto& e : r.checks) {
        json x{{"metric", e.metric}, {"value", e.value}, {"pass", e.pass}};
        if (e.min) x["min"] = *e.min;
        if (e.max) x["max"] = *e.max;
        checks.push_back(x);
    }
    r.summary["expectations"] = checks;
    r.summary["ok"] = r.ok();
}

std::vector<RegressionModel> null_set(const ExperimentConfig& c, int n) {
    return default_null_scenarios(n, c.M, c.statistic.alpha);
}

}  // namespace

std::vector<ExpectationResult> evaluate_expectations(const json& expectations, const json& summary) {
    std::vector<ExpectationResult> out;
    for (auto it = expectations.begin(); it != expectations.end(); ++it) {
        ExpectationResult e;
        e.metric = it.key();
        if (!summary.contains(e.metric) || !summary.at(e.metric).is_number()) {
            throw ConfigError("expectation on unknown metric: " + e.metric);
        }
        e.value = summary.at(e.metric).get<double>();
        const json& b = it.value();
        if (b.contains("min")) e.min = b.at("min").get<double>();
        if (b.contains("max")) e.max = b.at("max").get<double>();
        e.pass = std::isfinite(e.value) && (!e.min || e.value >= *e.min) && (!e.max || e.value <= *e.max);
        out.push_back(e);
    }
    return out;
}

ExperimentResult run_mse_rate(const ExperimentConfig& c) {
    ExperimentResult r;
    r.name = c.name;
    r.table.header = {"n", "mse", "stderr"};
    if (c.log_replicates) r.replicate_log.header = {"n", "replicate", "statistic", "target", "sq_error"};
    const StatisticConfig sc = with_fixed_bandwidth(c);
    std::vector<double> means, ses;
    json per_n = json::array();
    for (std::size_t k = 0; k < c.n_grid.size(); ++k) {
        const int n = c.n_grid[k];
        RegressionModel model = c.scenario;
        model.n = n;
        const Sampler sampler(model);
        const StatisticEvaluator ev(sc, n);
        const double target = statistic_target(sc.id, sampler.mean(), sampler.variance());
        std::vector<double> stat(static_cast<std::size_t>(c.replicates));
        const std::uint64_t n_seed = derive_seed(c.seed, k);
        parallel_for(stat.size(), c.threads, [&](std::size_t rep) {
            std::vector<double> y(static_cast<std::size_t>(n) + 1);
            sampler.fill(derive_seed(n_seed, rep), y);
            stat[rep] = ev.value(y);
        });
        std::vector<double> sq(stat.size());
        for (std::size_t i = 0; i < stat.size(); ++i) sq[i] = (stat[i] - target) * (stat[i] - target);
        const MeanSe m = mean_se(sq);
        means.push_back(m.mean);
        ses.push_back(m.se);
        r.table.rows.push_back({std::to_string(n), format_double(m.mean), format_double(m.se)});
        if (c.log_replicates) {
            for (std::size_t i = 0; i < stat.size(); ++i) {
                r.replicate_log.rows.push_back({std::to_string(n), std::to_string(i), format_double(stat[i]),
                                                format_double(target), format_double(sq[i])});
            }
        }
        json e{{"n", n}, {"mse", m.mean}, {"stderr", m.se}, {"target", target}};
        if (ev.bandwidth()) e["h"] = *ev.bandwidth();
        per_n.push_back(e);
    }
    r.summary["experiment"] = "mse-rate";
    r.summary["statistic"] = to_string(sc.id);
    if (sc.C_h) r.summary["C_h"] = *sc.C_h;
    r.summary["per_n"] = per_n;
    r.summary["replicates"] = c.replicates;
    r.summary["seed"] = c.seed;
    bool all_zero = std::all_of(means.begin(), means.end(), [](double v) { return v == 0.0; });
    if (all_zero) {
        r.summary["slope"] = nullptr;
        r.summary["max_mse"] = 0.0;
    } else {
        const RateFit fit = fit_rate(c.n_grid, means, ses);
        r.summary["slope"] = fit.slope;
        r.summary["intercept"] = fit.intercept;
        r.summary["slope_stderr"] = fit.slope_stderr;
        r.summary["max_mse"] = *std::max_element(means.begin(), means.end());
    }
    finish(r, c);
    return r;
}

namespace {

CalibratedTest calibrate_for(const ExperimentConfig& c, int n, std::uint64_t seed) {
    const auto nulls = null_set(c, n);
    return calibrate(c.statistic, c.setting, c.eta, nulls, c.calibration_replicates, seed, c.threads);
}

}  // namespace

ExperimentResult run_type1(const ExperimentConfig& c) {
    ExperimentResult r;
    r.name = c.name;
    const int n = c.n_grid.front();
    const CalibratedTest test = calibrate_for(c, n, derive_seed(c.seed, 0));
    r.table.header = {"scenario", "digest", "rate", "stderr"};
    const auto nulls = null_set(c, n);
    double worst = 0.0;
    for (std::size_t s = 0; s < nulls.size(); ++s) {
        const RejectionRate rr = rejection_rate(test, nulls[s], c.replicates, derive_seed(c.seed, 1000 + s), c.threads);
        worst = std::max(worst, rr.rate);
        r.table.rows.push_back({std::to_string(s), model_digest(nulls[s]), format_double(rr.rate),
                                format_double(rr.std_error)});
    }
    r.summary["experiment"] = "type1";
    r.summary["calibrated_test"] = test;
    r.summary["max_type1"] = worst;
    r.summary["n"] = n;
    r.summary["replicates"] = c.replicates;
    finish(r, c);
    return r;
}

ExperimentResult run_power_curve(const ExperimentConfig& c) {
    ExperimentResult r;
    r.name = c.name;
    const int n = c.n_grid.front();
    const CalibratedTest test = calibrate_for(c, n, derive_seed(c.seed, 0));
    r.table.header = {"C", "power", "stderr"};
    std::vector<double> power, se;
    for (std::size_t k = 0; k < c.C_list.size(); ++k) {
        const double C = c.C_list[k];
        // ||V - mean||_2 = a / sqrt(2) = C zeta for one full sine period.
        const double a = std::sqrt(2.0) * C * test.zeta;
        if (a > c.alternative_level) throw ConfigError("power-curve: alternative would make V negative");
        RegressionModel m;
        m.n = n;
        m.V = C == 0.0 ? FunctionSpec::constant(c.alternative_level)
                       : FunctionSpec::sinusoid(c.alternative_level, a, 1, c.statistic.beta);
        const RejectionRate rr = rejection_rate(test, m, c.replicates, derive_seed(c.seed, 1 + k), c.threads);
        power.push_back(rr.rate);
        se.push_back(rr.std_error);
        r.table.rows.push_back({format_double(C), format_double(rr.rate), format_double(rr.std_error)});
    }
    bool monotone = true;
    for (std::size_t i = 0; i < power.size(); ++i) {
        for (std::size_t j = i + 1; j < power.size(); ++j) {
            if (c.C_list[j] > c.C_list[i]) {
                const double tol = 2.0 * std::sqrt(se[i] * se[i] + se[j] * se[j]);
                monotone = monotone && power[j] >= power[i] - tol;
            }
        }
    }
    r.summary["experiment"] = "power-curve";
    r.summary["calibrated_test"] = test;
    r.summary["zeta"] = test.zeta;
    r.summary["monotone"] = monotone ? 1 : 0;
    const auto top = std::max_element(c.C_list.begin(), c.C_list.end()) - c.C_list.begin();
    r.summary["power_at_max_C"] = power[static_cast<std::size_t>(top)];
    for (std::size_t k = 0; k < c.C_list.size(); ++k) {
        if (c.C_list[k] == 0.0) r.summary["power_at_zero"] = power[k];
    }
    finish(r, c);
    return r;
}

ExperimentResult run_baseline_compare(const ExperimentConfig& c) {
    ExperimentResult r;
    r.name = c.name;
    r.table.header = {"n", "statistic", "mean", "variance", "mean_stderr", "normalized_mean",
                      "normalized_variance", "plugin_rate_ref", "sample_digest"};
    const std::vector<StatisticId> ids{StatisticId::t_hat_kernel, StatisticId::dette_munk,
                                       StatisticId::dette_2002};
    json per_n = json::array();
    double ratio_last = 0.0, ratio_same_h = 0.0, dm_z_last = 0.0;
    for (std::size_t k = 0; k < c.n_grid.size(); ++k) {
        const int n = c.n_grid[k];
        RegressionModel model = c.scenario;
        model.n = n;
        const Sampler sampler(model);
        std::vector<StatisticEvaluator> evs;
        std::vector<std::string> labels;
        for (StatisticId id : ids) {
            StatisticConfig s = c.statistic;
            s.id = id;
            if (id != StatisticId::t_hat_kernel) s.h.reset();
            evs.emplace_back(s, n);
            labels.push_back(to_string(id));
        }
        {
            // Same raw-kernel statistic at the modified kernel's bandwidth.
            StatisticConfig s = c.statistic;
            s.id = StatisticId::dette_2002;
            s.h = evs.front().bandwidth();
            evs.emplace_back(s, n);
            labels.push_back("dette_2002_at_that_h");
        }
        const std::size_t R = static_cast<std::size_t>(c.replicates);
        std::vector<std::vector<double>> vals(evs.size(), std::vector<double>(R));
        std::vector<std::uint64_t> digests(R);
        const std::uint64_t n_seed = derive_seed(c.seed, k);
        parallel_for(R, c.threads, [&](std::size_t rep) {
            std::vector<double> y(static_cast<std::size_t>(n) + 1);
            sampler.fill(derive_seed(n_seed, rep), y);
            for (std::size_t s = 0; s < evs.size(); ++s) vals[s][rep] = evs[s].value(y);
            std::string bytes(reinterpret_cast<const char*>(y.data()), y.size() * sizeof(double));
            digests[rep] = std::stoull(digest_hex(bytes), nullptr, 16);
        });
        std::uint64_t combined = 0;
        for (auto d : digests) combined = splitmix64(combined ^ d);
        char dig[17];
        std::snprintf(dig, sizeof dig, "%016llx", static_cast<unsigned long long>(combined));
        const double ref = std::pow(static_cast<double>(n), -4.0 * c.statistic.alpha) +
                           std::pow(static_cast<double>(n), -2.0 * c.statistic.beta / (2.0 * c.statistic.beta + 1.0));
        json e{{"n", n}, {"sample_digest", dig}};
        double var_t = 0.0, var_d2 = 0.0, var_same_h = 0.0;
        for (std::size_t s = 0; s < evs.size(); ++s) {
            const StatisticId id = evs[s].config().id;
            // T-hat estimates 4 ||V - mean||^2, the baselines ||V - mean||^2.
            const double scale = id == StatisticId::t_hat_kernel ? 0.25 : 1.0;
            const MeanSe m = mean_se(vals[s]);
            r.table.rows.push_back({std::to_string(n), labels[s], format_double(m.mean),
                                    format_double(m.var), format_double(m.se),
                                    format_double(scale * m.mean), format_double(scale * scale * m.var),
                                    format_double(ref), dig});
            e[labels[s]] = json{{"mean", m.mean}, {"variance", m.var}, {"stderr", m.se}};
            if (labels[s] == "t_hat_kernel") var_t = scale * scale * m.var;
            if (labels[s] == "dette_2002") var_d2 = m.var;
            if (labels[s] == "dette_2002_at_that_h") var_same_h = m.var;
            if (labels[s] == "dette_munk") dm_z_last = m.se > 0 ? m.mean / m.se : 0.0;
        }
        ratio_last = var_t > 0 ? var_d2 / var_t : 0.0;
        ratio_same_h = var_t > 0 ? var_same_h / var_t : 0.0;
        e["variance_ratio_dette2002_over_that"] = ratio_last;
        e["variance_ratio_same_h"] = ratio_same_h;
        per_n.push_back(e);
    }
    r.summary["experiment"] = "baseline-compare";
    r.summary["per_n"] = per_n;
    r.summary["variance_ratio_at_max_n"] = ratio_last;
    r.summary["variance_ratio_same_h_at_max_n"] = ratio_same_h;
    r.summary["dette_munk_mean_z_at_max_n"] = dm_z_last;
    finish(r, c);
    return r;
}

double mann_whitney_auc(std::vector<double> null_values, std::vector<double> alt_values) {
    const std::size_t n0 = null_values.size(), n1 = alt_values.size();
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("mann_whitney_auc: empty sample");
    std::vector<std::pair<double, int>> all;
    for (double v : null_values) all.push_back({v, 0});
    for (double v : alt_values) all.push_back({v, 1});
    std::sort(all.begin(), all.end());
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].second == 1) rank_sum += mid;
        }
        i = j;
    }
    const double u = rank_sum - static_cast<double>(n1) * (n1 + 1) / 2.0;
    return u / (static_cast<double>(n0) * static_cast<double>(n1));
}

std::vector<RocPoint> roc_study(Construction construction, const PriorSpec& params,
                                const StatisticConfig& base, int replicates, std::uint64_t seed,
                                int threads) {
    const PriorSpec spec = construction_prior(construction, params);
    const int n = spec.n;
    std::vector<StatisticEvaluator> evs;
    for (StatisticId id : all_statistics()) {
        StatisticConfig s = base;
        s.id = id;
        evs.emplace_back(s, n);
    }
    const std::size_t R = static_cast<std::size_t>(replicates);
    std::vector<std::vector<double>> v0(evs.size(), std::vector<double>(R));
    auto v1 = v0;
    parallel_for(2 * R, threads, [&](std::size_t job) {
        const bool alt = job % 2 == 1;
        const std::size_t rep = job / 2;
        const std::uint64_t s = derive_seed(seed, job);
        const PriorDraw d = draw_prior(spec, alt ? Hypothesis::alternative : Hypothesis::null, derive_seed(s, 0));
        const SampleVector y = sample(d.model, derive_seed(s, 1));
        for (std::size_t k = 0; k < evs.size(); ++k) (alt ? v1 : v0)[k][rep] = evs[k].value(y.y);
    });
    const double Rd = static_cast<double>(R);
    const double se = std::sqrt((2.0 * Rd + 1.0) / (12.0 * Rd * Rd));
    std::vector<RocPoint> out;
    for (std::size_t k = 0; k < evs.size(); ++k) {
        out.push_back({evs[k].config().id, mann_whitney_auc(v0[k], v1[k]), se});
    }
    return out;
}

ExperimentResult run_lowerbound(const ExperimentConfig& c) {
    ExperimentResult r;
    r.name = c.name;
    r.table.header = {"quantity", "construction", "parameter", "value", "reference"};
    auto row = [&](const std::string& q, const std::string& con, double p, double v, double ref) {
        r.table.rows.push_back({q, con, format_double(p), format_double(v), format_double(ref)});
    };
    const int n = c.prior.n;

    double max_gap = 0.0;
    for (auto con : {Construction::triviality_mixture, Construction::spiky_two_point,
                     Construction::design_unknown_noise}) {
        const MarginalGap g = marginal_equality_check(con, c.prior, c.marginal_points);
        max_gap = std::max(max_gap, g.gap);
        row("marginal_gap", to_string(con), n, g.gap, 0.0);
    }

    // Rademacher pair at n and 4n.
    auto rad = [&](int nn) {
        const double rho = rademacher_profile_rho(c.chi2_c, nn);
        const MixtureLaw parts[2] = {MixtureLaw::gaussian(0.0, rho), MixtureLaw::gaussian(0.0, 3.0 * rho)};
        const double probs[2] = {0.5, 0.5};
        return chi2_convolved(MixtureLaw::gaussian(0.0, 2.0 * rho), MixtureLaw::combine(parts, probs)).value;
    };
    const double x1 = rad(n), x4 = rad(4 * n);
    row("chi2_rademacher", "rademacher-profile", n, x1, 0.0);
    row("chi2_rademacher", "rademacher-profile", 4 * n, x4, 0.0);

    bool mm_ok = true;
    double mm_worst = 0.0;
    for (int q : c.q_list) {
        const MomentMatchedLaw G = build_moment_matched(q);
        for (double eps : c.eps_list) {
            const double v = chi2_convolved(MixtureLaw::gaussian(0.0, eps * eps),
                                            MixtureLaw::atoms(G.atoms, G.weights, eps)).value;
            const double bound = moment_matching_chi2_bound(q, eps);
            mm_ok = mm_ok && v <= bound;
            mm_worst = std::max(mm_worst, v / bound);
            row("chi2_moment_matched_q" + std::to_string(q), "moment-matched", eps, v, bound);
        }
    }

    PriorSpec rp = c.prior;
    rp.kind = PriorKind::rademacher_profile;
    rp.c = c.chi2_c;
    const RiskFloor rf = risk_floor_estimate(rp, c.replicates, derive_seed(c.seed, 1), c.threads);
    row("risk_mc", "rademacher-profile", rp.c, rf.mc_risk, rf.bound);

    PriorSpec np = c.prior;
    np.kind = PriorKind::nuisance_mean_prior;
    std::vector<double> risks;
    json nuis = json::array();
    for (std::size_t k = 0; k < c.c_list.size(); ++k) {
        np.c = c.c_list[k];
        const RiskFloor f = risk_floor_estimate(np, c.replicates, derive_seed(c.seed, 10 + k), c.threads);
        risks.push_back(f.bound);
        row("risk_bound", "nuisance-mean-prior", np.c, f.bound, f.chi2);
        row("risk_mc", "nuisance-mean-prior", np.c, f.mc_risk, f.bound);
        nuis.push_back(json{{"c", np.c}, {"chi2", f.chi2}, {"bound", f.bound}, {"mc_risk", f.mc_risk},
                            {"mc_stderr", f.mc_stderr}});
    }
    // c_list is expected in decreasing order; the floor must not decrease.
    bool monotone = true;
    for (std::size_t k = 1; k < risks.size(); ++k) {
        if (c.c_list[k] < c.c_list[k - 1]) monotone = monotone && risks[k] >= risks[k - 1];
    }

    double worst_auc_z = 0.0;
    json roc = json::array();
    if (c.roc_replicates > 0) {
        for (auto con : {Construction::triviality_mixture, Construction::spiky_two_point,
                         Construction::design_unknown_noise}) {
            const auto pts = roc_study(con, c.prior, c.statistic, c.roc_replicates,
                                       derive_seed(c.seed, 100 + static_cast<int>(con)), c.threads);
            for (const auto& p : pts) {
                const double z = std::fabs(p.auc - 0.5) / p.auc_stderr;
                worst_auc_z = std::max(worst_auc_z, z);
                row("roc_auc", to_string(con) + ":" + to_string(p.statistic), c.roc_replicates, p.auc, 0.5);
                roc.push_back(json{{"construction", to_string(con)}, {"statistic", to_string(p.statistic)},
                                   {"auc", p.auc}, {"stderr", p.auc_stderr}});
            }
        }
    }

    r.summary["experiment"] = "lowerbound";
    r.summary["max_gap"] = max_gap;
    r.summary["chi2_rademacher_n"] = x1;
    r.summary["chi2_rademacher_4n"] = x4;
    r.summary["chi2_ratio"] = x1 / x4;
    r.summary["moment_matched_bound_ok"] = mm_ok ? 1 : 0;
    r.summary["moment_matched_worst_fraction"] = mm_worst;
    r.summary["rademacher_risk"] = json{{"chi2", rf.chi2}, {"bound", rf.bound}, {"mc_risk", rf.mc_risk},
                                        {"mc_stderr", rf.mc_stderr}};
    r.summary["rademacher_mc_minus_bound_z"] =
        rf.mc_stderr > 0 ? (rf.mc_risk - rf.bound) / rf.mc_stderr : 0.0;
    r.summary["nuisance"] = nuis;
    r.summary["nuisance_monotone"] = monotone ? 1 : 0;
    r.summary["roc"] = roc;
    r.summary["worst_auc_z"] = worst_auc_z;
    finish(r, c);
    return r;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
    switch (c.experiment) {
        case ExperimentKind::mse_rate: return run_mse_rate(c);
        case ExperimentKind::power_curve: return run_power_curve(c);
        case ExperimentKind::type1: return run_type1(c);
        case ExperimentKind::lowerbound: return run_lowerbound(c);
        case ExperimentKind::baseline_compare: return run_baseline_compare(c);
    }
    throw ConfigError("unknown experiment");
}

std::string csv_text(const Table& t) {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(t.header);
    for (const auto& row : t.rows) line(row);
    return out.str();
}

void write_csv(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << stamp << '\n' << csv_text(table);
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string csv_file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line, body;
    bool header = true;
    while (std::getline(in, line)) {
        if (header && !line.empty() && line[0] == '#') continue;
        header = false;
        body += line;
        body += '\n';
    }
    return digest_hex(body);
}

void write_result(const ExperimentResult& result, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string base = (std::filesystem::path(out_dir) / result.name).string();
    write_csv(base + ".csv", result.table);
    json s = result.summary;
    s["csv_digest"] = csv_file_digest(base + ".csv");
    if (!result.replicate_log.header.empty()) {
        write_csv(base + "_replicates.csv", result.replicate_log);
        s["replicates_csv"] = base + "_replicates.csv";
    }
    write_json(base + ".json", s);
}

}  // namespace hetero
