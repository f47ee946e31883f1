#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hetero/errors.hpp"
#include "hetero/harness.hpp"

using namespace hetero;
using nlohmann::json;

namespace {

ExperimentConfig small_mse(int threads = 1) {
    return load_config(json{{"experiment", "mse-rate"},
                            {"name", "t"},
                            {"n_grid", {64, 128, 256}},
                            {"replicates", 120},
                            {"seed", 5},
                            {"threads", threads},
                            {"statistic", {{"statistic", "t_hat_kernel"}}},
                            {"scenario", {{"f", {{"kind", "constant"}, {"value", 0}}},
                                          {"V", {{"kind", "constant"}, {"value", 1}}}}}});
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hetero_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, Validation) {
    json j{{"experiment", "mse-rate"}, {"n_grid", {256, 128, 512}}, {"replicates", 400}};
    EXPECT_THROW(load_config(j), ConfigError);
    j["n_grid"] = {128, 256, 512};
    j["replicates"] = 50;
    EXPECT_THROW(load_config(j), ConfigError);
    EXPECT_THROW(load_config(json{{"experiment", "nope"}}), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ShippedConfigsParse) {
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(HETERO_CONFIG_DIR)) {
        if (e.path().extension() != ".json") continue;
        EXPECT_NO_THROW(load_config_file(e.path().string())) << e.path();
        ++count;
    }
    EXPECT_GE(count, 5);
}

TEST(Expectations, MinMax) {
    const json summary{{"slope", -1.1}, {"rate", 0.2}};
    const auto r = evaluate_expectations(json{{"slope", {{"min", -1.5}, {"max", -0.5}}}, {"rate", {{"max", 0.1}}}}, summary);
    ASSERT_EQ(r.size(), 2u);
    for (const auto& e : r) EXPECT_EQ(e.pass, e.metric == "slope") << e.metric;
    EXPECT_THROW(evaluate_expectations(json{{"missing", {{"min", 0}}}}, summary), ConfigError);
}

TEST(MseRate, ReproducibleAcrossThreads) {
    const ExperimentResult a = run_mse_rate(small_mse(1));
    const ExperimentResult b = run_mse_rate(small_mse(3));
    EXPECT_EQ(csv_text(a.table), csv_text(b.table));
    EXPECT_EQ(a.table.rows.size(), 3u);
    EXPECT_TRUE(a.summary.at("slope").is_number());
}

TEST(MseRate, ReplicateLogMatchesAggregates) {
    ExperimentConfig c = small_mse();
    c.log_replicates = true;
    const ExperimentResult r = run_mse_rate(c);
    ASSERT_EQ(r.replicate_log.rows.size(), 3u * 120u);
    for (std::size_t k = 0; k < 3; ++k) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < 120; ++i) s += std::stold(r.replicate_log.rows[k * 120 + i][4]);
        const double mse = r.summary.at("per_n")[k].at("mse").get<double>();
        EXPECT_NEAR(static_cast<double>(s / 120), mse, 1e-12 * mse);
    }
}

TEST(MseRate, NoNoiseIsExactlyZero) {
    ExperimentConfig c = small_mse();
    c.scenario.V = FunctionSpec::constant(0.0);
    const ExperimentResult r = run_mse_rate(c);
    for (const auto& row : r.table.rows) EXPECT_EQ(std::stod(row[1]), 0.0);
}

TEST(Output, DigestIgnoresTimestamp) {
    const auto dir = temp_dir("digest");
    std::filesystem::create_directories(dir);
    Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
    write_csv((dir / "x.csv").string(), t);
    const std::string d1 = csv_file_digest((dir / "x.csv").string());
    {
        std::ofstream out(dir / "y.csv");
        out << "# generated 1999-01-01T00:00:00Z\n" << csv_text(t);
    }
    EXPECT_EQ(d1, csv_file_digest((dir / "y.csv").string()));
    std::ifstream in(dir / "x.csv");
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.rfind("# generated ", 0), 0u);
}

TEST(Output, WriteResultFiles) {
    const auto dir = temp_dir("result");
    ExperimentConfig c = small_mse();
    c.log_replicates = true;
    write_result(run_mse_rate(c), dir.string());
    EXPECT_TRUE(std::filesystem::exists(dir / "t.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "t.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "t_replicates.csv"));
}

TEST(BaselineCompare, SharedSamples) {
    ExperimentConfig c = small_mse();
    c.experiment = ExperimentKind::baseline_compare;
    const ExperimentResult r = run_baseline_compare(c);
    ASSERT_EQ(r.table.rows.size(), 3u * 4u);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t s = 1; s < 4; ++s) EXPECT_EQ(r.table.rows[k * 4 + s].back(), r.table.rows[k * 4].back());
    }
}

TEST(PowerCurve, RowsPerC) {
    const ExperimentConfig c = load_config(json{{"experiment", "power-curve"},
                                                {"n_grid", {256}},
                                                {"replicates", 100},
                                                {"calibration_replicates", 1000},
                                                {"C_list", {0, 5, 10}},
                                                {"statistic", {{"statistic", "t_hat_kernel"}, {"C_h", 8}}}});
    const ExperimentResult r = run_power_curve(c);
    EXPECT_EQ(r.table.rows.size(), 3u);
    EXPECT_EQ(r.summary.at("monotone").get<int>(), 1);
}

TEST(Roc, AucBasics) {
    EXPECT_EQ(mann_whitney_auc({1, 2, 3}, {4, 5, 6}), 1.0);
    EXPECT_EQ(mann_whitney_auc({4, 5, 6}, {1, 2, 3}), 0.0);
    EXPECT_EQ(mann_whitney_auc({1, 1}, {1, 1}), 0.5);
}
