#include "hetero/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hetero/numerics.hpp"

namespace hetero {

namespace {

int grid_size_of(std::span<const double> y, int minimum) {
    const int n = static_cast<int>(y.size()) - 1;
    if (n < minimum) {
        std::ostringstream msg;
        msg << "statistic needs at least " << minimum + 1 << " observations, got " << y.size();
        throw std::invalid_argument(msg.str());
    }
    return n;
}

std::vector<double> squared_first_differences(std::span<const double> y) {
    std::vector<double> q(y.size() - 1);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double d = y[i + 1] - y[i];
        q[i] = d * d;
    }
    return q;
}

// sum over ordered pairs |i-j| >= 2 of q_i q_j
long double offdiagonal_pair_sum(const std::vector<double>& q) {
    CompensatedSum s1;
    CompensatedSum s2;
    CompensatedSum s3;
    for (std::size_t i = 0; i < q.size(); ++i) {
        s1 += q[i];
        s2 += static_cast<long double>(q[i]) * q[i];
        if (i + 1 < q.size()) s3 += static_cast<long double>(q[i]) * q[i + 1];
    }
    const long double a = s1.value();
    return a * a - s2.value() - 2.0L * s3.value();
}

// (1/n) sum_k [(a_k^4 + b_k^4)/3 - 2 a_k^2 b_k^2]
double quartic_contrast(std::span<const double> a, std::span<const double> b, int n) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const long double a2 = static_cast<long double>(a[k]) * a[k];
        const long double b2 = static_cast<long double>(b[k]) * b[k];
        acc += (a2 * a2 + b2 * b2) / 3.0L - 2.0L * a2 * b2;
    }
    return static_cast<double>(acc.value() / n);
}

}  // namespace

DifferenceSet differences(std::span<const double> y) {
    const int n = grid_size_of(y, 4);
    DifferenceSet d;
    d.r.resize(static_cast<std::size_t>(n));
    d.r_tilde.resize(static_cast<std::size_t>(n - 1));
    d.s.resize(static_cast<std::size_t>(n - 2));
    for (int i = 0; i < n; ++i) d.r[static_cast<std::size_t>(i)] = y[i + 1] - y[i];
    for (int i = 0; i < n - 1; ++i) d.r_tilde[static_cast<std::size_t>(i)] = y[i + 2] - y[i];
    for (int i = 0; i < n - 2; ++i) d.s[static_cast<std::size_t>(i)] = y[i + 3] - y[i];
    return d;
}

std::string to_string(StatisticId id) {
    switch (id) {
        case StatisticId::t_hat_kernel: return "t_hat_kernel";
        case StatisticId::t_hat_profile: return "t_hat_profile";
        case StatisticId::t1_hat: return "t1_hat";
        case StatisticId::t2_hat: return "t2_hat";
        case StatisticId::s_hat: return "s_hat";
        case StatisticId::dette_munk: return "dette_munk";
        case StatisticId::dette_2002: return "dette_2002";
    }
    return "unknown";
}

std::vector<StatisticId> all_statistics() {
    return {StatisticId::t_hat_kernel, StatisticId::t_hat_profile, StatisticId::t1_hat,
            StatisticId::t2_hat,       StatisticId::s_hat,         StatisticId::dette_munk,
            StatisticId::dette_2002};
}

StatisticId statistic_id_from_string(const std::string& name) {
    for (auto id : all_statistics()) {
        if (to_string(id) == name) return id;
    }
    throw std::invalid_argument("unknown statistic: " + name);
}

StatisticReport t_hat_kernel(std::span<const double> y, const ModifiedKernel& k) {
    const int n = grid_size_of(y, 4);
    if (k.n() != n) {
        std::ostringstream msg;
        msg << "t_hat_kernel: kernel built for n = " << k.n() << " but sample has n = " << n;
        throw std::invalid_argument(msg.str());
    }
    const std::vector<double> q = squared_first_differences(y);
    const int support = std::min(k.support(), n - 1);
    CompensatedSum kern;
    for (int t = 2; t <= support; ++t) {
        const double w = k(t);
        if (w == 0.0) continue;
        long double lag = 0.0L;
        for (int i = 0; i + t < n; ++i) {
            lag += static_cast<long double>(q[static_cast<std::size_t>(i)]) *
                   q[static_cast<std::size_t>(i + t)];
        }
        kern += 2.0L * w * lag;
    }
    const long double pairs = offdiagonal_pair_sum(q);
    const double kernel_term = static_cast<double>(kern.value() / n);
    const double centering_term =
        static_cast<double>(-pairs / (static_cast<long double>(n) * n));
    StatisticReport rep;
    rep.statistic_id = StatisticId::t_hat_kernel;
    rep.terms = {{"kernel_term", kernel_term}, {"centering_term", centering_term}};
    rep.value = kernel_term + centering_term;
    rep.n = n;
    rep.h = k.h();
    return rep;
}

StatisticReport t_hat_profile(std::span<const double> y) {
    const int n = grid_size_of(y, 4);
    const std::vector<double> q = squared_first_differences(y);
    CompensatedSum fourth;
    for (int i = 0; i < n; ++i) {
        const int count = n - 1 - (i > 0 ? 1 : 0) - (i < n - 1 ? 1 : 0);
        const long double qi = q[static_cast<std::size_t>(i)];
        fourth += count * qi * qi;
    }
    const long double pairs = offdiagonal_pair_sum(q);
    const long double scale = 2.0L * n * n;
    const double fourth_term = static_cast<double>(2.0L / 3.0L * fourth.value() / scale);
    const double cross_term = static_cast<double>(-2.0L * pairs / scale);
    StatisticReport rep;
    rep.statistic_id = StatisticId::t_hat_profile;
    rep.terms = {{"fourth_moment_term", fourth_term}, {"cross_term", cross_term}};
    rep.value = fourth_term + cross_term;
    rep.n = n;
    return rep;
}

StatisticReport t1_hat(std::span<const double> y) {
    const DifferenceSet d = differences(y);
    const int n = static_cast<int>(d.r.size());
    StatisticReport rep;
    rep.statistic_id = StatisticId::t1_hat;
    rep.value = quartic_contrast(std::span<const double>(d.r).subspan(1, d.s.size()), d.s, n);
    rep.terms = {{"t1_hat", rep.value}};
    rep.n = n;
    return rep;
}

StatisticReport t2_hat(std::span<const double> y) {
    const DifferenceSet d = differences(y);
    const int n = static_cast<int>(d.r.size());
    const std::span<const double> rt(d.r_tilde);
    StatisticReport rep;
    rep.statistic_id = StatisticId::t2_hat;
    rep.value = quartic_contrast(rt.subspan(1, n - 2), rt.first(n - 2), n);
    rep.terms = {{"t2_hat", rep.value}};
    rep.n = n;
    return rep;
}

StatisticReport s_hat(std::span<const double> y) {
    const StatisticReport a = t_hat_profile(y);
    const StatisticReport b = t1_hat(y);
    const StatisticReport c = t2_hat(y);
    StatisticReport rep;
    rep.statistic_id = StatisticId::s_hat;
    rep.terms = {{"t_hat_profile", a.value}, {"t1_hat", b.value}, {"t2_hat", c.value}};
    rep.value = a.value + b.value + c.value;
    rep.n = a.n;
    return rep;
}

double dette_munk_stat(std::span<const double> y) {
    const int n = grid_size_of(y, 3);
    const std::vector<double> q = squared_first_differences(y);
    CompensatedSum lag2;
    CompensatedSum total;
    for (int i = 0; i < n; ++i) {
        total += q[static_cast<std::size_t>(i)];
        if (i + 2 < n) {
            lag2 += static_cast<long double>(q[static_cast<std::size_t>(i)]) *
                    q[static_cast<std::size_t>(i + 2)];
        }
    }
    const long double first = lag2.value() / (4.0L * (n - 2));
    const long double mean = total.value() / (2.0L * n);
    return static_cast<double>(first - mean * mean);
}

double dette_2002_stat(std::span<const double> y, const BaseKernel& base, double h) {
    const int n = grid_size_of(y, 3);
    if (!(h > 0.0 && h < 1.0)) throw std::domain_error("dette_2002_stat: h must lie in (0, 1)");
    std::vector<double> q = squared_first_differences(y);
    CompensatedSum total;
    for (double v : q) total += v;
    const long double mean = total.value() / n;
    for (double& v : q) v = static_cast<double>(v - mean);
    const double nh = static_cast<double>(n) * h;
    const int tmax = std::min(n - 1, static_cast<int>(std::floor(nh)));
    CompensatedSum acc;
    for (int t = 2; t <= tmax; ++t) {
        const double w = base(t / nh);
        if (w == 0.0) continue;
        long double lag = 0.0L;
        for (int i = 0; i + t < n; ++i) {
            lag += static_cast<long double>(q[static_cast<std::size_t>(i)]) *
                   q[static_cast<std::size_t>(i + t)];
        }
        acc += 2.0L * w * lag;
    }
    return static_cast<double>(acc.value() / (4.0L * n * (n - 1) * h));
}

OracleQuantities oracle_quantities(std::span<const double> f, std::span<const double> V) {
    if (f.size() != V.size()) throw std::invalid_argument("oracle_quantities: size mismatch");
    const int n = grid_size_of(f, 4);
    OracleQuantities o;
    o.W.resize(static_cast<std::size_t>(n));
    o.delta.resize(static_cast<std::size_t>(n));
    o.U.resize(static_cast<std::size_t>(n));
    o.W_tilde.resize(static_cast<std::size_t>(n - 1));
    o.delta_tilde.resize(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        o.W[k] = V[k] + V[k + 1];
        o.delta[k] = f[k + 1] - f[k];
        o.U[k] = o.W[k] + o.delta[k] * o.delta[k];
    }
    for (int i = 0; i < n - 1; ++i) {
        const auto k = static_cast<std::size_t>(i);
        o.W_tilde[k] = V[k] + V[k + 2];
        o.delta_tilde[k] = f[k + 2] - f[k];
    }
    o.W_bar = pairwise_mean(o.W);
    std::vector<double> d2(o.delta.size());
    for (std::size_t k = 0; k < d2.size(); ++k) d2[k] = o.delta[k] * o.delta[k];
    o.delta2_bar = pairwise_mean(d2);
    return o;
}

double proxy_T(std::span<const double> f, std::span<const double> V) {
    const OracleQuantities o = oracle_quantities(f, V);
    const double ubar = o.W_bar + o.delta2_bar;
    CompensatedSum acc;
    for (double u : o.U) {
        const long double e = static_cast<long double>(u) - ubar;
        acc += e * e;
    }
    return static_cast<double>(acc.value() / static_cast<long double>(o.U.size()));
}

double proxy_T1_tilde(std::span<const double> f, std::span<const double> V) {
    const OracleQuantities o = oracle_quantities(f, V);
    const int n = static_cast<int>(o.U.size());
    CompensatedSum acc;
    for (int k = 0; k + 2 < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double d3 = f[i + 3] - f[i];
        const long double e = static_cast<long double>(o.U[i + 1]) - V[i] - V[i + 3] - d3 * d3;
        acc += e * e;
    }
    return static_cast<double>(acc.value() / n);
}

double proxy_T2_tilde(std::span<const double> f, std::span<const double> V) {
    const OracleQuantities o = oracle_quantities(f, V);
    const int n = static_cast<int>(o.U.size());
    CompensatedSum acc;
    for (int k = 0; k + 2 < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const long double a = static_cast<long double>(o.W_tilde[i + 1]) +
                              o.delta_tilde[i + 1] * o.delta_tilde[i + 1];
        const long double b =
            static_cast<long double>(o.W_tilde[i]) + o.delta_tilde[i] * o.delta_tilde[i];
        acc += (a - b) * (a - b);
    }
    return static_cast<double>(acc.value() / n);
}

double proxy_T(const FunctionSpec& f, const FunctionSpec& V, const DesignGrid& grid) {
    return proxy_T(f.on_grid(grid), V.on_grid(grid));
}

double proxy_T1_tilde(const FunctionSpec& f, const FunctionSpec& V, const DesignGrid& grid) {
    return proxy_T1_tilde(f.on_grid(grid), V.on_grid(grid));
}

double proxy_T2_tilde(const FunctionSpec& f, const FunctionSpec& V, const DesignGrid& grid) {
    return proxy_T2_tilde(f.on_grid(grid), V.on_grid(grid));
}

}  // namespace hetero
