// Command line front end for the hetero library.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hetero/errors.hpp"
#include "hetero/harness.hpp"
#include "hetero/serialize.hpp"
#include "hetero/statistics.hpp"
#include "hetero/testing.hpp"

using nlohmann::json;
using namespace hetero;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

std::vector<double> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<double> y;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find_last_of(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            y.push_back(std::stod(cell));
        } catch (const std::exception&) {
            if (!y.empty()) throw ConfigError("bad value in " + path + ": " + line);
            // header row
        }
    }
    return y;
}

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out;
    bool log_replicates = false;
};

// Data from --input, or a fresh sample of --model at the global seed.
std::vector<double> load_data(const std::string& input, const std::string& model_path,
                              const Globals& g) {
    if (!input.empty()) return read_series(input);
    if (model_path.empty()) throw ConfigError("need --input or --model");
    const RegressionModel m = read_json(model_path).get<RegressionModel>();
    return sample(m, g.seed.value_or(1)).y;
}

void emit(const json& j, const Globals& g, const std::string& file) {
    if (g.out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::filesystem::create_directories(g.out);
    write_json((std::filesystem::path(g.out) / file).string(), j);
}

int run_config(const Globals& g, std::optional<ExperimentKind> expected) {
    if (g.config.empty()) throw ConfigError("--config is required");
    ExperimentConfig c = load_config_file(g.config);
    if (expected && c.experiment != *expected) {
        throw ConfigError("config experiment is " + to_string(c.experiment) + ", expected " +
                          to_string(*expected));
    }
    if (g.seed) c.seed = *g.seed;
    if (g.threads > 0) c.threads = g.threads;
    if (!g.out.empty()) c.out_dir = g.out;
    if (g.log_replicates) c.log_replicates = true;
    const ExperimentResult r = run_experiment(c);
    write_result(r, c.out_dir);
    std::cout << csv_text(r.table);
    for (const auto& e : r.checks) {
        std::cout << (e.pass ? "ok   " : "FAIL ") << e.metric << " = " << e.value << '\n';
    }
    return r.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heteroskedasticity testing for fixed-design regression"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "Experiment config (JSON)");
    app.add_option("--seed", g.seed, "Override the seed");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--log-replicates", g.log_replicates, "Write per-replicate CSV");

    std::string model_path, input, stat_name = "t_hat_kernel", setting_name = "l2";
    std::string calibration_path, kernel_name = "box";
    double alpha = 1.0, beta = 0.4, eta = 0.1, M = 10.0;
    std::optional<double> C_h, h;
    int n = 1024, replicates = 2000;

    auto* simulate = app.add_subcommand("simulate", "Draw one sample from a model");
    simulate->add_option("--model", model_path, "RegressionModel JSON")->required();

    auto add_stat_opts = [&](CLI::App* sub) {
        sub->add_option("--statistic", stat_name, "Statistic id");
        sub->add_option("--kernel", kernel_name, "Base kernel (box, quartic-plateau)");
        sub->add_option("--alpha", alpha, "Mean smoothness");
        sub->add_option("--beta", beta, "Variance smoothness");
        sub->add_option("--C_h", C_h, "Bandwidth constant");
        sub->add_option("--bandwidth", h, "Explicit bandwidth h");
    };
    auto* stat = app.add_subcommand("stat", "Evaluate a statistic on data");
    add_stat_opts(stat);
    stat->add_option("--input", input, "Data file, one value per line");
    stat->add_option("--model", model_path, "Sample from this model instead");

    auto* cal = app.add_subcommand("calibrate", "Monte Carlo calibration over the default null set");
    add_stat_opts(cal);
    cal->add_option("--setting", setting_name, "l2, profile, design-known-noise, design-unknown-noise");
    cal->add_option("--n", n, "Grid size");
    cal->add_option("--eta", eta, "Total risk budget");
    cal->add_option("--M", M, "Null scenario scale");
    cal->add_option("--replicates", replicates, "Replicates per null scenario");

    auto* test = app.add_subcommand("test", "Apply a calibrated test to data");
    test->add_option("--calibration", calibration_path, "CalibratedTest JSON")->required();
    test->add_option("--input", input, "Data file, one value per line");
    test->add_option("--model", model_path, "Sample from this model instead");

    auto* mse = app.add_subcommand("mse-rate", "Null MSE rate experiment");
    auto* power = app.add_subcommand("power-curve", "Power versus separation multiple");
    auto* type1 = app.add_subcommand("type1", "Held-out Type I error");
    auto* base = app.add_subcommand("baseline-compare", "Compare against difference baselines");
    auto* lb = app.add_subcommand("lowerbound-check", "Lower-bound constructions");

    CLI11_PARSE(app, argc, argv);

    auto stat_config = [&] {
        StatisticConfig s;
        s.id = statistic_id_from_string(stat_name);
        s.base = json{{"kind", kernel_name}}.get<BaseKernel>();
        s.alpha = alpha;
        s.beta = beta;
        s.C_h = C_h;
        s.h = h;
        return s;
    };

    try {
        if (simulate->parsed()) {
            const RegressionModel m = read_json(model_path).get<RegressionModel>();
            const SampleVector y = sample(m, g.seed.value_or(1));
            std::ostringstream out;
            out << "y\n";
            for (double v : y.y) out << format_double(v) << '\n';
            if (g.out.empty()) {
                std::cout << out.str();
            } else {
                std::filesystem::create_directories(g.out);
                std::ofstream((std::filesystem::path(g.out) / "sample.csv").string()) << out.str();
            }
            return 0;
        }
        if (stat->parsed()) {
            const std::vector<double> y = load_data(input, model_path, g);
            const StatisticEvaluator ev(stat_config(), static_cast<int>(y.size()) - 1);
            StatisticReport r = ev.report(y);
            if (input.empty()) r.seed = g.seed.value_or(1);
            emit(json(r), g, "stat.json");
            return 0;
        }
        if (cal->parsed()) {
            const Setting setting = setting_from_string(setting_name);
            StatisticConfig s = stat_config();
            if (stat->count("--statistic") == 0 && cal->count("--statistic") == 0) {
                s.id = dispatch_statistic(setting, beta);
            }
            const auto nulls = default_null_scenarios(n, M, alpha);
            const CalibratedTest t = calibrate(s, setting, eta, nulls, replicates,
                                               g.seed.value_or(1), g.threads);
            emit(json(t), g, "calibration.json");
            return 0;
        }
        if (test->parsed()) {
            const CalibratedTest t = read_json(calibration_path).get<CalibratedTest>();
            const std::vector<double> y = load_data(input, model_path, g);
            const Decision d = decide(t, y);
            emit(json{{"reject", d.reject}, {"statistic", d.statistic}, {"threshold", t.threshold}}, g,
                 "decision.json");
            return 0;
        }
        if (mse->parsed()) return run_config(g, ExperimentKind::mse_rate);
        if (power->parsed()) return run_config(g, ExperimentKind::power_curve);
        if (type1->parsed()) return run_config(g, ExperimentKind::type1);
        if (base->parsed()) return run_config(g, ExperimentKind::baseline_compare);
        if (lb->parsed()) return run_config(g, ExperimentKind::lowerbound);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
