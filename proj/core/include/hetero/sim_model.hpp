#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hetero/numerics.hpp"
#include "hetero/rng.hpp"

namespace hetero {

class DesignGrid {
public:
    explicit DesignGrid(int n);
    int n() const { return n_; }
    int size() const { return n_ + 1; }
    double point(int i) const { return static_cast<double>(i) / n_; }

private:
    int n_;
};

enum class FunctionKind {
    constant,
    sinusoid,
    sawtooth_hoelder,
    smooth_bump_sum,
    spiky_v1,
    transition_v1,
    kappa_prior,
    custom_table,
};

std::string to_string(FunctionKind kind);
FunctionKind function_kind_from_string(const std::string& name);

// Mean or variance function on [0, 1]. Field use per kind:
//   constant         level
//   sinusoid         level + amplitude sin(2 pi count x)
//   sawtooth_hoelder level + amplitude count^-gamma tri(count x), tri in [0,1] with slope 2
//   smooth_bump_sum  level + amplitude sum_j coefs[j] sqrt(count) psi(count x - j)
//   spiky_v1         level + zigzag of height sqrt(3) c grid_n^-gamma, zero at every j/(2 grid_n)
//   transition_v1    level + 2 c grid_n^-2a smoothstep(grid_n^2a (x - 1/2) + 1/2), a = alpha
//   kappa_prior      level + sum_i coefs[i] g(x - i/grid_n), g the unit spike of half-width 1/(2 grid_n)
//   custom_table     linear interpolation of (table_x, table_y)
struct FunctionSpec {
    FunctionKind kind = FunctionKind::constant;
    double level = 0.0;
    double amplitude = 0.0;
    double gamma = 1.0;    // declared Hoelder exponent
    double hoelder_M = 0.0;  // declared Hoelder constant
    double c = 0.0;
    double alpha = 0.0;
    int count = 1;
    int grid_n = 0;
    std::vector<double> coefs;
    std::vector<double> table_x;
    std::vector<double> table_y;

    double operator()(double x) const;
    std::vector<double> breakpoints() const;
    std::vector<double> on_grid(const DesignGrid& grid) const;

    static FunctionSpec constant(double value);
    static FunctionSpec sinusoid(double level, double amplitude, int periods, double gamma = 1.0);
    static FunctionSpec sawtooth(double level, double amplitude, int teeth, double gamma);
    // Sawtooth whose declared Hoelder constant equals M.
    static FunctionSpec sawtooth_m_scaled(double M, int teeth, double gamma);
    static FunctionSpec smooth_bump_sum(double level, double rho, std::vector<double> signs,
                                        double beta);
    static FunctionSpec spiky_v1(int n, double c, double beta);
    static FunctionSpec transition_v1(int n, double c, double alpha, double beta);
    static FunctionSpec kappa_prior(int n, double level, std::vector<double> coefs, double gamma);
    static FunctionSpec custom_table(std::vector<double> xs, std::vector<double> ys,
                                     double gamma = 1.0);
};

// psi(t) = A exp(-1/(t(1-t))) sin(2 pi t) on (0,1), zero mean, unit L2 norm.
double bump_profile(double t);
double bump_profile_derivative(double t);
double bump_profile_sup();
double bump_profile_derivative_sup();
// h(t)/(h(t)+h(1-t)) with h(t) = exp(-1/t) for t > 0.
double smoothstep(double t);

enum class NoiseKind {
    gaussian_std,
    scaled_gaussian_mixture,
    matched_moment_discrete,
    rademacher_shift,
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// gaussian_std            N(0,1)
// scaled_gaussian_mixture sum_k weights[k] N(0, variances[k])
// matched_moment_discrete Gauss rule atoms matching the first q normal moments
// rademacher_shift        sqrt(1 - shift^2) Z + shift R, R = +-1
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian_std;
    std::vector<double> weights;
    std::vector<double> variances;
    int q = 3;
    double shift = 0.0;
    double c_xi = 100.0;

    static NoiseSpec gaussian();
    static NoiseSpec mixture(std::vector<double> weights, std::vector<double> variances);
    static NoiseSpec matched_moment(int q);
    static NoiseSpec rademacher(double shift);

    double moment(int k) const;
    // Throws std::domain_error when mean/variance/fourth-moment conditions fail.
    void validate() const;
    // Support points and weights for the discrete kind.
    GaussRule atoms() const;
};

class NoiseSampler {
public:
    explicit NoiseSampler(const NoiseSpec& spec);
    double operator()(Engine& eng) const;

private:
    NoiseKind kind_;
    std::vector<double> cumulative_;
    std::vector<double> values_;  // mixture sd or atom location
    double gauss_scale_ = 1.0;
    double shift_ = 0.0;
};

struct RegressionModel {
    FunctionSpec f = FunctionSpec::constant(0.0);
    FunctionSpec V = FunctionSpec::constant(1.0);
    NoiseSpec noise = NoiseSpec::gaussian();
    int n = 0;
};

struct SampleVector {
    std::vector<double> y;
    std::uint64_t seed = 0;
};

// Precomputes f and sqrt(V) on the grid for repeated sampling.
class Sampler {
public:
    explicit Sampler(const RegressionModel& model);
    SampleVector operator()(std::uint64_t seed) const;
    void fill(std::uint64_t seed, std::span<double> out) const;
    int n() const { return n_; }
    const std::vector<double>& mean() const { return f_; }
    const std::vector<double>& variance() const { return v_; }

private:
    int n_;
    std::vector<double> f_;
    std::vector<double> v_;
    std::vector<double> sd_;
    NoiseSampler noise_;
};

SampleVector sample(const RegressionModel& model, std::uint64_t seed);

struct HoelderReport {
    bool pass = true;
    double worst_ratio = 0.0;
    double at_distance = 0.0;
};
// Empirical check of |g(x)-g(y)| <= M |x-y|^gamma on a grid of `refinement`
// cells; for gamma in (1, 2] the check runs on the first divided difference.
HoelderReport check_hoelder(const FunctionSpec& spec, double gamma, double M,
                            int refinement);

double l2_heteroskedasticity(const FunctionSpec& spec,
                             std::size_t quadrature_points = kDefaultQuadraturePoints);
double design_heteroskedasticity(const FunctionSpec& spec, const DesignGrid& grid);
double design_heteroskedasticity(std::span<const double> values);

}  // namespace hetero
