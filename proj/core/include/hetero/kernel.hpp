#pragma once

#include <string>
#include <vector>

namespace hetero {

enum class BaseKernelKind { box, quartic_plateau, custom_table };

std::string to_string(BaseKernelKind kind);
BaseKernelKind base_kernel_kind_from_string(const std::string& name);

// Symmetric kernel supported on [-1, 1] with unit mass.
class BaseKernel {
public:
    static BaseKernel box();
    // (15/31)(1/2 + (1-u^2)^2)
    static BaseKernel quartic_plateau();
    // Values on [0, 1] (u >= 0), extended symmetrically and linearly
    // interpolated; rescaled to unit mass.
    static BaseKernel custom_table(std::vector<double> u, std::vector<double> k);

    BaseKernelKind kind() const { return kind_; }
    double operator()(double u) const;
    // Integral of K over [a, b].
    double integral(double a, double b) const;
    double sup_norm() const;
    double inf_on_support() const;
    double l1_norm() const { return 1.0; }
    const std::vector<double>& table_u() const { return table_u_; }
    const std::vector<double>& table_k() const { return table_k_; }
    // Number of quadrature points per integral for table kernels.
    void set_quadrature_points(std::size_t points) { quad_points_ = points; }

private:
    BaseKernelKind kind_ = BaseKernelKind::box;
    std::vector<double> table_u_;
    std::vector<double> table_k_;
    std::size_t quad_points_ = 256;
    double primitive(double u) const;  // closed-form kinds, int_0^u K
};

class ModifiedKernel {
public:
    ModifiedKernel(int n, double h, double normalizer, std::vector<double> weights);

    int n() const { return n_; }
    double h() const { return h_; }
    double normalizer() const { return normalizer_; }
    // Largest |t| with a stored (possibly nonzero) weight.
    int support() const { return static_cast<int>(weights_.size()) - 1; }
    double operator()(long t) const;
    const std::vector<double>& half_weights() const { return weights_; }
    double abs_sum() const;
    double sup() const;

private:
    int n_;
    double h_;
    double normalizer_;
    std::vector<double> weights_;  // weights_[t] for t = 0..support
};

constexpr double kDefaultNormalizerFloor = 0.1;

// 1 - int_{-2/n}^{2/n} (1/h) K(u/h) du
double kernel_normalizer(const BaseKernel& base, int n, double h);

// Throws std::domain_error (bandwidth) or a calibration error when the
// normalizer falls below c.
ModifiedKernel build_modified_kernel(const BaseKernel& base, int n, double h,
                                     double c = kDefaultNormalizerFloor);

struct BandwidthChoice {
    double h = 0.0;
    double exponent = 0.0;
    bool clamped = false;
};

// C_h n^{-min(2/(4 beta + 1), 1)} clamped into (0, 1).
BandwidthChoice optimal_bandwidth(double beta, int n, double C_h);

// Smallest power of two C_h for which the normalizer at optimal_bandwidth
// clears c.
double default_bandwidth_constant(const BaseKernel& base, double beta, int n,
                                  double c = kDefaultNormalizerFloor);

// Row sums sum_{j=0}^{n-1} K(i-j) for i = 0..n-1.
std::vector<double> kernel_sum_profile(const ModifiedKernel& k);

}  // namespace hetero
