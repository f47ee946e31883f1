#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hetero/numerics.hpp"
#include "oracles.hpp"

using namespace hetero;

TEST(CompensatedSum, RecoversSmallTerms) {
    CompensatedSum s;
    s += 1e16L;
    for (int i = 0; i < 1000; ++i) s += 1e-3L;
    s += -1e16L;
    EXPECT_NEAR(static_cast<double>(s.value()), 1.0, 1e-9);
}

TEST(PairwiseSum, MatchesLongDoubleSum) {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> z;
    std::vector<double> v(10001);
    long double ref = 0.0L;
    for (auto& x : v) ref += (x = z(gen));
    EXPECT_NEAR(pairwise_sum(v), static_cast<double>(ref), 1e-10);
    EXPECT_NEAR(pairwise_mean(v), static_cast<double>(ref / v.size()), 1e-13);
}

TEST(Quadrature, PolynomialAndEndpointSingularity) {
    const auto cubic = quadrature([](double x) { return x * x * x - x; }, 0.0, 2.0);
    EXPECT_NEAR(cubic.value, 2.0, 1e-10);
    const auto root = quadrature([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    EXPECT_NEAR(root.value, 2.0 / 3.0, 1e-8);
    EXPECT_THROW(quadrature([](double) { return NAN; }, 0.0, 1.0), std::domain_error);
}

TEST(Quadrature, PiecewiseHandlesKinks) {
    const double breaks[] = {0.3};
    auto kink = [](double x) { return std::fabs(x - 0.3); };
    const auto r = quadrature_piecewise(kink, 0.0, 1.0, breaks, 1024);
    EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-12);
}

TEST(DiscreteConvolution, MatchesOracleAndReference) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 20; ++trial) {
        const long flo = static_cast<long>(gen() % 7) - 3, glo = static_cast<long>(gen() % 7) - 3;
        std::vector<double> fv(5 + gen() % 300), gv(3 + gen() % 40);
        oracle::Seq fo, go;
        for (std::size_t i = 0; i < fv.size(); ++i) fo[flo + static_cast<long>(i)] = fv[i] = z(gen);
        for (std::size_t i = 0; i < gv.size(); ++i) go[glo + static_cast<long>(i)] = gv[i] = z(gen);
        const DiscreteSequence f(flo, fv), g(glo, gv);
        const DiscreteSequence c = discrete_convolution(f, g);
        const DiscreteSequence r = discrete_convolution_reference(f, g);
        for (long zz = c.lo() - 2; zz <= c.hi() + 2; ++zz) {
            const double o = static_cast<double>(oracle::conv_minus(fo, go, zz));
            ASSERT_NEAR(c(zz), o, 1e-11);
            ASSERT_NEAR(r(zz), o, 1e-11);
        }
    }
}

TEST(FiniteDifference, SecondOrder) {
    const DiscreteSequence g(-2, {1.0, 4.0, 9.0, 16.0, 25.0});
    const DiscreteSequence d2 = finite_difference(g, 1, 2);
    // Interior second differences of k^2 are 2.
    EXPECT_DOUBLE_EQ(d2(-2), 2.0);
    EXPECT_DOUBLE_EQ(d2(0), 2.0);
    const DiscreteSequence d1 = finite_difference(g, 2, 1);
    EXPECT_DOUBLE_EQ(d1(-2), 9.0 - 1.0);
    EXPECT_THROW(finite_difference(g, 1, 3), std::invalid_argument);
}

TEST(Zygmund, ConstantMatchesSeries) {
    for (double a : {0.1, 0.5, 0.8}) {
        long double s = 0.0L;
        for (int k = 0; k < 4000; ++k) s += std::pow(2.0L, -k * (1.0L - a));
        EXPECT_NEAR(zygmund_constant(a), static_cast<double>(s), 1e-12);
    }
}

TEST(Zygmund, BoundHoldsForHoelderSamples) {
    const long n = 40;
    std::vector<double> v(2 * n + 1);
    for (long z = -n; z <= n; ++z) v[static_cast<std::size_t>(z + n)] = std::pow(std::fabs(z / 40.0), 0.6);
    const ZygmundCheck c = zygmund_bound_check(DiscreteSequence(-n, v), n, 0.6);
    EXPECT_TRUE(c.holds);
    EXPECT_GT(c.seminorm, 0.0);
}

TEST(ConvolutionSmoothness, PremiseViolationDetected) {
    std::vector<double> v(65, 0.0);
    v[32] = 10.0;
    const auto s = convolution_smoothness_check(DiscreteSequence::on_grid(v), DiscreteSequence::on_grid(v), 64, 0.4, 1.0);
    EXPECT_FALSE(s.premise_holds);
}

TEST(ConvolutionSmoothness, FactorUsesNPlusOne) {
    std::vector<double> v(17, 0.5);
    const auto s = convolution_smoothness_check(DiscreteSequence::on_grid(v), DiscreteSequence::on_grid(v), 16, 0.4, 1.0);
    ASSERT_TRUE(s.premise_holds);
    EXPECT_NEAR(s.zygmund_factor, 2.0 * zygmund_constant(0.8) + 2.0 * 17.0 / 16.0, 1e-12);
}

TEST(LeastSquares, ExactLine) {
    const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    const LinearFit f = least_squares(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
}

TEST(GaussHermite, SymmetricAndNormalized) {
    for (int k : {1, 2, 3, 6}) {
        const GaussRule r = gauss_hermite_probabilists(k);
        ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(k));
        double w = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            w += r.weights[i];
            EXPECT_NEAR(r.nodes[i], -r.nodes[r.nodes.size() - 1 - i], 1e-12);
        }
        EXPECT_NEAR(w, 1.0, 1e-12);
    }
}

TEST(NormalMoment, DoubleFactorial) {
    for (int k = 0; k <= 10; ++k) EXPECT_DOUBLE_EQ(normal_moment(k), static_cast<double>(oracle::double_factorial_moment(k)));
}
