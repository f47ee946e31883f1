#include "hetero/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hetero/errors.hpp"
#include "hetero/numerics.hpp"

namespace hetero {

std::string to_string(BaseKernelKind kind) {
    switch (kind) {
        case BaseKernelKind::box: return "box";
        case BaseKernelKind::quartic_plateau: return "quartic-plateau";
        case BaseKernelKind::custom_table: return "custom-table";
    }
    return "unknown";
}

BaseKernelKind base_kernel_kind_from_string(const std::string& name) {
    for (auto k : {BaseKernelKind::box, BaseKernelKind::quartic_plateau,
                   BaseKernelKind::custom_table}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown base kernel: " + name);
}

BaseKernel BaseKernel::box() { return BaseKernel{}; }

BaseKernel BaseKernel::quartic_plateau() {
    BaseKernel k;
    k.kind_ = BaseKernelKind::quartic_plateau;
    return k;
}

BaseKernel BaseKernel::custom_table(std::vector<double> u, std::vector<double> vals) {
    if (u.size() != vals.size() || u.size() < 2) {
        throw std::invalid_argument("custom kernel: need at least two (u, K) pairs");
    }
    if (u.front() != 0.0 || u.back() != 1.0) {
        throw std::invalid_argument("custom kernel: table must span [0, 1]");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i > 0 && !(u[i] > u[i - 1])) {
            throw std::invalid_argument("custom kernel: u must be strictly increasing");
        }
        if (!(vals[i] > 0.0)) {
            throw std::invalid_argument("custom kernel: values must be positive on the support");
        }
    }
    // Trapezoid is exact for the interpolant; mass over [-1, 1] is twice it.
    long double half = 0.0L;
    for (std::size_t i = 1; i < u.size(); ++i) {
        half += 0.5L * (vals[i] + vals[i - 1]) * (u[i] - u[i - 1]);
    }
    const double scale = static_cast<double>(1.0L / (2.0L * half));
    for (double& v : vals) v *= scale;
    BaseKernel k;
    k.kind_ = BaseKernelKind::custom_table;
    k.table_u_ = std::move(u);
    k.table_k_ = std::move(vals);
    return k;
}

double BaseKernel::operator()(double u) const {
    const double a = std::fabs(u);
    if (a > 1.0) return 0.0;
    switch (kind_) {
        case BaseKernelKind::box:
            return 0.5;
        case BaseKernelKind::quartic_plateau: {
            const double w = 1.0 - a * a;
            return 15.0 / 31.0 * (0.5 + w * w);
        }
        case BaseKernelKind::custom_table: {
            const auto it = std::upper_bound(table_u_.begin(), table_u_.end(), a);
            if (it == table_u_.end()) return table_k_.back();
            const std::size_t j = static_cast<std::size_t>(it - table_u_.begin());
            const double t = (a - table_u_[j - 1]) / (table_u_[j] - table_u_[j - 1]);
            return table_k_[j - 1] + t * (table_k_[j] - table_k_[j - 1]);
        }
    }
    return 0.0;
}

double BaseKernel::primitive(double u) const {
    const double s = u < 0.0 ? -1.0 : 1.0;
    const double a = std::min(std::fabs(u), 1.0);
    switch (kind_) {
        case BaseKernelKind::box:
            return s * 0.5 * a;
        case BaseKernelKind::quartic_plateau: {
            const double a3 = a * a * a;
            return s * 15.0 / 31.0 * (1.5 * a - 2.0 * a3 / 3.0 + a3 * a * a / 5.0);
        }
        case BaseKernelKind::custom_table:
            break;
    }
    throw std::logic_error("BaseKernel::primitive: no closed form for table kernels");
}

double BaseKernel::integral(double a, double b) const {
    if (b < a) return -integral(b, a);
    if (kind_ != BaseKernelKind::custom_table) return primitive(b) - primitive(a);
    const double lo = std::max(a, -1.0);
    const double hi = std::min(b, 1.0);
    if (!(hi > lo)) return 0.0;
    std::vector<double> breaks;
    breaks.push_back(0.0);
    for (double u : table_u_) {
        breaks.push_back(u);
        breaks.push_back(-u);
    }
    return quadrature_piecewise(*this, lo, hi, breaks, quad_points_).value;
}

double BaseKernel::sup_norm() const {
    switch (kind_) {
        case BaseKernelKind::box: return 0.5;
        case BaseKernelKind::quartic_plateau: return 15.0 / 31.0 * 1.5;
        case BaseKernelKind::custom_table:
            return *std::max_element(table_k_.begin(), table_k_.end());
    }
    return 0.0;
}

double BaseKernel::inf_on_support() const {
    switch (kind_) {
        case BaseKernelKind::box: return 0.5;
        case BaseKernelKind::quartic_plateau: return 15.0 / 31.0 * 0.5;
        case BaseKernelKind::custom_table:
            return *std::min_element(table_k_.begin(), table_k_.end());
    }
    return 0.0;
}

ModifiedKernel::ModifiedKernel(int n, double h, double normalizer, std::vector<double> weights)
    : n_(n), h_(h), normalizer_(normalizer), weights_(std::move(weights)) {}

double ModifiedKernel::operator()(long t) const {
    const long a = t < 0 ? -t : t;
    if (a >= static_cast<long>(weights_.size())) return 0.0;
    return weights_[static_cast<std::size_t>(a)];
}

double ModifiedKernel::abs_sum() const {
    long double s = 0.0L;
    for (std::size_t t = 1; t < weights_.size(); ++t) s += 2.0L * std::fabs(weights_[t]);
    if (!weights_.empty()) s += std::fabs(weights_[0]);
    return static_cast<double>(s);
}

double ModifiedKernel::sup() const {
    double m = 0.0;
    for (double w : weights_) m = std::max(m, std::fabs(w));
    return m;
}

double kernel_normalizer(const BaseKernel& base, int n, double h) {
    const double r = 2.0 / (static_cast<double>(n) * h);
    return 1.0 - base.integral(-r, r);
}

ModifiedKernel build_modified_kernel(const BaseKernel& base, int n, double h, double c) {
    if (n < 4) throw std::invalid_argument("build_modified_kernel: n must be at least 4");
    if (!(h > 0.0 && h < 1.0)) {
        throw std::domain_error("build_modified_kernel: bandwidth must lie in (0, 1)");
    }
    const double normalizer = kernel_normalizer(base, n, h);
    if (!(std::fabs(normalizer) >= c)) {
        std::ostringstream msg;
        msg << "kernel normalizer " << normalizer << " is below c = " << c << " at n = " << n
            << ", h = " << h << "; increase C_h";
        throw CalibrationError(msg.str());
    }
    const double nh = static_cast<double>(n) * h;
    const int support = std::min(n - 1, static_cast<int>(std::floor(nh)) + 1);
    std::vector<double> w(static_cast<std::size_t>(std::max(support, 1) + 1), 0.0);
    for (int t = 2; t <= support; ++t) {
        const double num = base.integral(t / nh, (t + 1) / nh);
        w[static_cast<std::size_t>(t)] = num / normalizer;
    }
    // Trim trailing exact zeros so support() reflects the nonzero window.
    while (w.size() > 2 && w.back() == 0.0) w.pop_back();
    return ModifiedKernel(n, h, normalizer, std::move(w));
}

BandwidthChoice optimal_bandwidth(double beta, int n, double C_h) {
    if (!(beta > 0.0 && beta < 0.5)) {
        throw std::domain_error("optimal_bandwidth: beta must lie in (0, 1/2)");
    }
    if (!(C_h > 0.0)) throw std::domain_error("optimal_bandwidth: C_h must be positive");
    BandwidthChoice out;
    out.exponent = std::min(2.0 / (4.0 * beta + 1.0), 1.0);
    out.h = C_h * std::pow(static_cast<double>(n), -out.exponent);
    const double upper = std::nextafter(1.0, 0.0);
    if (out.h >= 1.0) {
        out.h = upper;
        out.clamped = true;
    }
    return out;
}

double default_bandwidth_constant(const BaseKernel& base, double beta, int n, double c) {
    for (int k = -30; k <= 30; ++k) {
        const double C = std::ldexp(1.0, k);
        const BandwidthChoice bw = optimal_bandwidth(beta, n, C);
        if (std::fabs(kernel_normalizer(base, n, bw.h)) >= c) return C;
    }
    throw std::domain_error("default_bandwidth_constant: no power of two satisfies the condition");
}

std::vector<double> kernel_sum_profile(const ModifiedKernel& k) {
    const int n = k.n();
    const int s = k.support();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        long double acc = 0.0L;
        const int jlo = std::max(0, i - s);
        const int jhi = std::min(n - 1, i + s);
        for (int j = jlo; j <= jhi; ++j) acc += k(i - j);
        out[static_cast<std::size_t>(i)] = static_cast<double>(acc);
    }
    return out;
}

}  // namespace hetero
