#include <cmath>

#include <gtest/gtest.h>

#include "hetero/errors.hpp"
#include "hetero/kernel.hpp"
#include "oracles.hpp"

using namespace hetero;

TEST(ModifiedKernel, BoxReferenceValue) {
    const ModifiedKernel k = build_modified_kernel(BaseKernel::box(), 100, 0.1);
    EXPECT_NEAR(k(5), 0.0625, 1e-15);
    EXPECT_NEAR(k(-5), 0.0625, 1e-15);
    EXPECT_EQ(k(0), 0.0);
    EXPECT_EQ(k(1), 0.0);
    EXPECT_EQ(k(50), 0.0);
}

TEST(ModifiedKernel, MatchesOracle) {
    for (int n : {30, 100, 500}) {
        for (double h : {0.15, 0.3, 0.7}) {
            const ModifiedKernel kb = build_modified_kernel(BaseKernel::box(), n, h);
            const ModifiedKernel kq = build_modified_kernel(BaseKernel::quartic_plateau(), n, h);
            for (long t = -n; t <= n; ++t) {
                ASSERT_NEAR(kb(t), static_cast<double>(oracle::modified_kernel(oracle::box_integral, n, h, t)), 1e-14);
                ASSERT_NEAR(kq(t), static_cast<double>(oracle::modified_kernel(oracle::quartic_plateau_integral, n, h, t)), 1e-14);
            }
        }
    }
}

TEST(ModifiedKernel, InteriorRowsSumToOne) {
    const ModifiedKernel k = build_modified_kernel(BaseKernel::quartic_plateau(), 400, 0.05);
    const auto rows = kernel_sum_profile(k);
    const int S = k.support();
    for (int i = S; i + S < 400; ++i) EXPECT_NEAR(rows[static_cast<std::size_t>(i)], 1.0, 1e-12);
}

TEST(ModifiedKernel, Errors) {
    EXPECT_THROW(build_modified_kernel(BaseKernel::box(), 10, 0.1), CalibrationError);
    EXPECT_THROW(build_modified_kernel(BaseKernel::box(), 100, 1.5), std::domain_error);
    EXPECT_THROW(build_modified_kernel(BaseKernel::box(), 100, 0.0), std::domain_error);
}

TEST(BaseKernel, CustomTableConstantIsBox) {
    BaseKernel t = BaseKernel::custom_table({0.0, 0.5, 1.0}, {3.0, 3.0, 3.0});
    EXPECT_NEAR(t(0.3), 0.5, 1e-12);
    EXPECT_NEAR(t.integral(-1.0, 1.0), 1.0, 1e-10);
    EXPECT_NEAR(t.integral(0.2, 0.6), BaseKernel::box().integral(0.2, 0.6), 1e-10);
}

TEST(BaseKernel, QuarticPlateauMass) {
    const BaseKernel q = BaseKernel::quartic_plateau();
    EXPECT_NEAR(q.integral(-1.0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(q.integral(-0.3, 0.8), static_cast<double>(oracle::quartic_plateau_integral(-0.3, 0.8)), 1e-15);
    EXPECT_GT(q.inf_on_support(), 0.0);
}

TEST(Bandwidth, RuleAndDefaultConstant) {
    const BandwidthChoice b = optimal_bandwidth(0.4, 1024, 1.0);
    EXPECT_NEAR(b.exponent, 2.0 / 2.6, 1e-15);
    EXPECT_NEAR(b.h, std::pow(1024.0, -2.0 / 2.6), 1e-15);
    EXPECT_TRUE(optimal_bandwidth(0.4, 16, 1e6).clamped);
    const double C = default_bandwidth_constant(BaseKernel::box(), 0.4, 1024);
    EXPECT_EQ(std::exp2(std::round(std::log2(C))), C);
    EXPECT_GE(kernel_normalizer(BaseKernel::box(), 1024, optimal_bandwidth(0.4, 1024, C).h), 0.1);
    EXPECT_LT(kernel_normalizer(BaseKernel::box(), 1024, optimal_bandwidth(0.4, 1024, C / 2).h), 0.1);
}
