#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hetero/sim_model.hpp"

using namespace hetero;

TEST(DesignGrid, RejectsTinyGrids) {
    EXPECT_THROW(DesignGrid(3), std::invalid_argument);
    DesignGrid g(8);
    EXPECT_EQ(g.size(), 9);
    EXPECT_DOUBLE_EQ(g.point(4), 0.5);
}

TEST(FunctionSpec, SpikyIsOneOnDesign) {
    const int n = 50;
    const FunctionSpec v = FunctionSpec::spiky_v1(n, 0.3, 0.4);
    DesignGrid g(n);
    for (double x : v.on_grid(g)) EXPECT_EQ(x, 1.0);
    EXPECT_EQ(design_heteroskedasticity(v, g), 0.0);
    EXPECT_NEAR(l2_heteroskedasticity(v), 0.3 * std::pow(n, -0.4), 1e-9);
}

TEST(FunctionSpec, SinusoidL2Norm) {
    const FunctionSpec v = FunctionSpec::sinusoid(5.0, 2.0, 1);
    EXPECT_NEAR(l2_heteroskedasticity(v), 2.0 / std::numbers::sqrt2, 1e-9);
    EXPECT_EQ(l2_heteroskedasticity(FunctionSpec::constant(3.0)), 0.0);
}

TEST(FunctionSpec, SawtoothDeclaredConstantIsTight) {
    const FunctionSpec s = FunctionSpec::sawtooth_m_scaled(10.0, 8, 0.5);
    EXPECT_NEAR(s.hoelder_M, 10.0, 1e-12);
    EXPECT_TRUE(check_hoelder(s, 0.5, 10.0, 4096).pass);
    EXPECT_FALSE(check_hoelder(s, 0.5, 5.0, 4096).pass);
}

TEST(FunctionSpec, BumpSumNorm) {
    std::vector<double> signs{1, -1, 1, 1, -1, -1, 1, -1};
    const double rho = 0.01;
    const FunctionSpec v = FunctionSpec::smooth_bump_sum(1.0, rho, signs, 0.4);
    const double s = l2_heteroskedasticity(v);
    EXPECT_NEAR(s * s, 8 * rho * rho, 1e-8 * 8 * rho * rho);
    EXPECT_TRUE(check_hoelder(v, 0.4, v.hoelder_M, 4096).pass);
}

TEST(FunctionSpec, CustomTableInterpolates) {
    const FunctionSpec t = FunctionSpec::custom_table({0.0, 0.5, 1.0}, {1.0, 3.0, 2.0});
    EXPECT_DOUBLE_EQ(t(0.25), 2.0);
    EXPECT_DOUBLE_EQ(t(0.75), 2.5);
    EXPECT_THROW(FunctionSpec::custom_table({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(FunctionSpec, KindNamesRoundTrip) {
    for (auto k : {FunctionKind::constant, FunctionKind::sinusoid, FunctionKind::sawtooth_hoelder,
                   FunctionKind::smooth_bump_sum, FunctionKind::spiky_v1, FunctionKind::transition_v1,
                   FunctionKind::kappa_prior, FunctionKind::custom_table}) {
        EXPECT_EQ(function_kind_from_string(to_string(k)), k);
    }
}

TEST(Smoothstep, Limits) {
    EXPECT_EQ(smoothstep(0.0), 0.0);
    EXPECT_EQ(smoothstep(1.0), 1.0);
    EXPECT_NEAR(smoothstep(0.5), 0.5, 1e-15);
}

TEST(BumpProfile, ZeroMeanUnitNorm) {
    double m = 0.0, q = 0.0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
        const double t = (i + 0.5) / N;
        m += bump_profile(t) / N;
        q += bump_profile(t) * bump_profile(t) / N;
    }
    EXPECT_NEAR(m, 0.0, 1e-10);
    EXPECT_NEAR(q, 1.0, 1e-8);
}

TEST(NoiseSpec, ValidationAndMoments) {
    EXPECT_NO_THROW(NoiseSpec::mixture({0.5, 0.5}, {0.5, 1.5}).validate());
    EXPECT_THROW(NoiseSpec::mixture({0.5, 0.5}, {1.0, 2.0}).validate(), std::domain_error);
    const NoiseSpec d = NoiseSpec::matched_moment(5);
    EXPECT_NEAR(d.moment(4), 3.0, 1e-10);
    EXPECT_NEAR(NoiseSpec::rademacher(0.5).moment(2), 1.0, 1e-12);
    for (auto k : {NoiseKind::gaussian_std, NoiseKind::scaled_gaussian_mixture,
                   NoiseKind::matched_moment_discrete, NoiseKind::rademacher_shift}) {
        EXPECT_EQ(noise_kind_from_string(to_string(k)), k);
    }
}

TEST(Sampler, DeterministicPerSeed) {
    RegressionModel m;
    m.n = 100;
    m.f = FunctionSpec::sinusoid(0.0, 1.0, 2);
    m.V = FunctionSpec::constant(2.0);
    EXPECT_EQ(sample(m, 9).y, sample(m, 9).y);
    EXPECT_NE(sample(m, 9).y, sample(m, 10).y);
    EXPECT_EQ(sample(m, 9).y.size(), 101u);
}

TEST(Sampler, MomentsOfLargeSample) {
    RegressionModel m;
    m.n = 200000;
    m.V = FunctionSpec::constant(4.0);
    m.noise = NoiseSpec::mixture({0.25, 0.75}, {2.5, 0.5});
    const auto y = sample(m, 3).y;
    double s = 0.0, q = 0.0;
    for (double v : y) {
        s += v;
        q += v * v;
    }
    s /= y.size();
    q /= y.size();
    EXPECT_NEAR(s, 0.0, 5.0 * 2.0 / std::sqrt(y.size()));
    EXPECT_NEAR(q, 4.0, 0.1);
}

TEST(Sampler, NegativeVarianceNamesIndex) {
    RegressionModel m;
    m.n = 10;
    m.V = FunctionSpec::custom_table({0.0, 1.0}, {1.0, -1.0});
    try {
        Sampler s(m);
        FAIL() << "expected domain_error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("6"), std::string::npos) << e.what();
    }
}

TEST(Sampler, ZeroVarianceGivesMean) {
    RegressionModel m;
    m.n = 20;
    m.f = FunctionSpec::constant(1.5);
    m.V = FunctionSpec::constant(0.0);
    for (double v : sample(m, 1).y) EXPECT_EQ(v, 1.5);
}
