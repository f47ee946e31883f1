#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hetero {

// Neumaier-compensated accumulator on long double.
class CompensatedSum {
public:
    void add(long double x);
    CompensatedSum& operator+=(long double x) { add(x); return *this; }
    long double value() const { return sum_ + comp_; }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

double pairwise_sum(std::span<const double> v);
double pairwise_mean(std::span<const double> v);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

constexpr std::size_t kDefaultQuadraturePoints = std::size_t{1} << 14;

// Composite midpoint rule at points, points/2 and points/4 with a Richardson
// step whose order is estimated from the three levels.
QuadratureResult quadrature(const std::function<double(double)>& fn, double a,
                            double b, std::size_t points = kDefaultQuadraturePoints);

// Same rule applied between consecutive breakpoints (kinks of fn) inside
// [a, b]; points are spread in proportion to piece length, at least 8 each.
QuadratureResult quadrature_piecewise(const std::function<double(double)>& fn,
                                      double a, double b,
                                      std::span<const double> breakpoints,
                                      std::size_t points = kDefaultQuadraturePoints);

// Integer-indexed sequence, zero outside [lo, lo + values.size()).
class DiscreteSequence {
public:
    DiscreteSequence() = default;
    DiscreteSequence(long lo, std::vector<double> values);
    static DiscreteSequence on_grid(std::vector<double> values) {
        return DiscreteSequence(0, std::move(values));
    }

    double operator()(long z) const;
    long lo() const { return lo_; }
    long hi() const { return lo_ + static_cast<long>(values_.size()) - 1; }
    bool empty() const { return values_.empty(); }
    const std::vector<double>& values() const { return values_; }
    double sup_norm() const;

private:
    long lo_ = 0;
    std::vector<double> values_;
};

// D_h g(z) = g(z+h) - g(z); order 2 applies D_h twice.
DiscreteSequence finite_difference(const DiscreteSequence& g, long h, int order);

// (f *_D g^-)(z) = sum_k f(k) g(k - z).
DiscreteSequence discrete_convolution(const DiscreteSequence& f,
                                      const DiscreteSequence& g);
DiscreteSequence discrete_convolution_reference(const DiscreteSequence& f,
                                                const DiscreteSequence& g);

// 1/(1 - 2^(alpha-1)), the geometric series sum_k 2^{-k(1-alpha)}.
double zygmund_constant(double alpha);

// sup over z and h in [-n, n]\{0} of |D_h^2 g(z)| / |h/n|^alpha.
double zygmund_seminorm(const DiscreteSequence& g, long n, double alpha);

struct ZygmundCheck {
    double seminorm = 0.0;
    double sup_norm = 0.0;
    double worst_ratio = 0.0;  // max_z |g(z)-g(0)| / bound(z); <= 1 means holds
    long worst_z = 0;
    bool holds = true;
};
ZygmundCheck zygmund_bound_check(const DiscreteSequence& g, long n, double alpha);

struct ConvolutionSmoothness {
    bool premise_holds = true;
    double premise_worst = 0.0;   // max |f(z+h)-f(z)| / (M |h/n|^beta)
    double constant = 0.0;        // max_z |conv(z)-conv(0)| / (n |z/n|^{2 beta})
    double sup_conv = 0.0;
    double zygmund_factor = 0.0;  // 2 M^2 C(2 beta) + 2 M^2 (n+1)/n
};
// f and g are samples on [0, n].
ConvolutionSmoothness convolution_smoothness_check(const DiscreteSequence& f,
                                                   const DiscreteSequence& g,
                                                   long n, double beta, double M);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Nodes and weights of the k-point Gauss rule for the standard normal weight.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_hermite_probabilists(int points);

double normal_moment(int k);  // E Z^k for Z ~ N(0,1)

}  // namespace hetero
