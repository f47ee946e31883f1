#include "hetero/sim_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hetero {

namespace {

constexpr double kSnap = 1e-9;

// Snaps u to the nearest integer when it is within rounding distance.
double snap(double u) {
    const double r = std::round(u);
    return std::fabs(u - r) < kSnap ? r : u;
}

double tri(double t) {
    const double frac = t - std::floor(t);
    return 1.0 - std::fabs(2.0 * frac - 1.0);
}

struct BumpConstants {
    double norm = 1.0;
    double sup = 0.0;
    double dsup = 0.0;
};

double bump_raw(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t))) * std::sin(2.0 * std::numbers::pi * t);
}

double bump_raw_derivative(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double u = t * (1.0 - t);
    const double e = std::exp(-1.0 / u);
    const double s = std::sin(2.0 * std::numbers::pi * t);
    const double c = std::cos(2.0 * std::numbers::pi * t);
    return e * ((1.0 - 2.0 * t) / (u * u) * s + 2.0 * std::numbers::pi * c);
}

const BumpConstants& bump_constants() {
    static const BumpConstants constants = [] {
        BumpConstants bc;
        const double l2 =
            quadrature([](double t) { return bump_raw(t) * bump_raw(t); }, 0.0, 1.0,
                       std::size_t{1} << 16)
                .value;
        bc.norm = 1.0 / std::sqrt(l2);
        constexpr int kScan = 1 << 16;
        for (int k = 1; k < kScan; ++k) {
            const double t = static_cast<double>(k) / kScan;
            bc.sup = std::max(bc.sup, std::fabs(bump_raw(t)));
            bc.dsup = std::max(bc.dsup, std::fabs(bump_raw_derivative(t)));
        }
        bc.sup *= bc.norm;
        bc.dsup *= bc.norm;
        return bc;
    }();
    return constants;
}

double table_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) return 0.0;
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[j - 1];
    const double x1 = xs[j];
    if (x == x0) return ys[j - 1];
    const double w = (x - x0) / (x1 - x0);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

}  // namespace

double bump_profile(double t) { return bump_constants().norm * bump_raw(t); }
double bump_profile_derivative(double t) {
    return bump_constants().norm * bump_raw_derivative(t);
}
double bump_profile_sup() { return bump_constants().sup; }
double bump_profile_derivative_sup() { return bump_constants().dsup; }

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

DesignGrid::DesignGrid(int n) : n_(n) {
    if (n < 4) throw std::invalid_argument("DesignGrid: n must be at least 4");
}

std::string to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::constant: return "constant";
        case FunctionKind::sinusoid: return "sinusoid";
        case FunctionKind::sawtooth_hoelder: return "sawtooth-hoelder";
        case FunctionKind::smooth_bump_sum: return "smooth-bump-sum";
        case FunctionKind::spiky_v1: return "spiky-v1";
        case FunctionKind::transition_v1: return "transition-v1";
        case FunctionKind::kappa_prior: return "kappa-prior";
        case FunctionKind::custom_table: return "custom-table";
    }
    return "unknown";
}

FunctionKind function_kind_from_string(const std::string& name) {
    for (auto k : {FunctionKind::constant, FunctionKind::sinusoid,
                   FunctionKind::sawtooth_hoelder, FunctionKind::smooth_bump_sum,
                   FunctionKind::spiky_v1, FunctionKind::transition_v1,
                   FunctionKind::kappa_prior, FunctionKind::custom_table}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown function kind: " + name);
}

double FunctionSpec::operator()(double x) const {
    switch (kind) {
        case FunctionKind::constant:
            return level;
        case FunctionKind::sinusoid:
            return level + amplitude * std::sin(2.0 * std::numbers::pi * count * x);
        case FunctionKind::sawtooth_hoelder:
            return level + amplitude * std::pow(static_cast<double>(count), -gamma) *
                               tri(snap(count * x * 2.0) / 2.0);
        case FunctionKind::smooth_bump_sum: {
            const int m = static_cast<int>(coefs.size());
            if (m == 0) return level;
            const double u = snap(m * x);
            const int j = std::clamp(static_cast<int>(std::floor(u)), 0, m - 1);
            return level + amplitude * coefs[static_cast<std::size_t>(j)] *
                               std::sqrt(static_cast<double>(m)) * bump_profile(u - j);
        }
        case FunctionKind::spiky_v1: {
            const double height = std::sqrt(3.0) * c * std::pow(grid_n, -gamma);
            const double u = snap(2.0 * grid_n * x);
            const double k = std::floor(u);
            const double frac = u - k;
            const double sign = (static_cast<long long>(k) % 2 == 0) ? 1.0 : -1.0;
            return level + sign * height * (1.0 - std::fabs(2.0 * frac - 1.0));
        }
        case FunctionKind::transition_v1: {
            const double L = std::pow(static_cast<double>(grid_n), 2.0 * alpha);
            return level + 2.0 * c / L * smoothstep(L * (x - 0.5) + 0.5);
        }
        case FunctionKind::kappa_prior: {
            const double u = snap(grid_n * x);
            const long i = std::lround(u);
            if (i < 0 || i >= static_cast<long>(coefs.size())) return level;
            const double d = std::fabs(u - static_cast<double>(i));
            return level + coefs[static_cast<std::size_t>(i)] * std::max(0.0, 1.0 - 2.0 * d);
        }
        case FunctionKind::custom_table:
            return table_interp(table_x, table_y, x);
    }
    return 0.0;
}

std::vector<double> FunctionSpec::breakpoints() const {
    std::vector<double> out;
    switch (kind) {
        case FunctionKind::constant:
        case FunctionKind::sinusoid:
            break;
        case FunctionKind::sawtooth_hoelder:
            for (int k = 1; k < 2 * count; ++k) out.push_back(k / (2.0 * count));
            break;
        case FunctionKind::smooth_bump_sum: {
            const int m = static_cast<int>(coefs.size());
            for (int j = 1; j < m; ++j) out.push_back(static_cast<double>(j) / m);
            break;
        }
        case FunctionKind::spiky_v1:
            for (int k = 1; k < 4 * grid_n; ++k) out.push_back(k / (4.0 * grid_n));
            break;
        case FunctionKind::transition_v1: {
            const double L = std::pow(static_cast<double>(grid_n), 2.0 * alpha);
            out.push_back(0.5 - 0.5 / L);
            out.push_back(0.5 + 0.5 / L);
            break;
        }
        case FunctionKind::kappa_prior:
            for (int k = 1; k < 2 * grid_n; ++k) out.push_back(k / (2.0 * grid_n));
            break;
        case FunctionKind::custom_table:
            out = table_x;
            break;
    }
    return out;
}

std::vector<double> FunctionSpec::on_grid(const DesignGrid& grid) const {
    std::vector<double> out(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i <= grid.n(); ++i) out[static_cast<std::size_t>(i)] = (*this)(grid.point(i));
    return out;
}

FunctionSpec FunctionSpec::constant(double value) {
    FunctionSpec s;
    s.kind = FunctionKind::constant;
    s.level = value;
    s.hoelder_M = 0.0;
    return s;
}

FunctionSpec FunctionSpec::sinusoid(double level, double amplitude, int periods, double gamma) {
    if (gamma <= 0.0 || gamma > 1.0) throw std::domain_error("sinusoid: gamma must be in (0, 1]");
    FunctionSpec s;
    s.kind = FunctionKind::sinusoid;
    s.level = level;
    s.amplitude = amplitude;
    s.count = periods;
    s.gamma = gamma;
    s.hoelder_M = 2.0 * std::fabs(amplitude) * std::pow(std::numbers::pi * periods, gamma);
    return s;
}

FunctionSpec FunctionSpec::sawtooth(double level, double amplitude, int teeth, double gamma) {
    if (gamma <= 0.0 || gamma > 1.0) throw std::domain_error("sawtooth: gamma must be in (0, 1]");
    if (teeth < 1) throw std::invalid_argument("sawtooth: need at least one tooth");
    FunctionSpec s;
    s.kind = FunctionKind::sawtooth_hoelder;
    s.level = level;
    s.amplitude = amplitude;
    s.count = teeth;
    s.gamma = gamma;
    s.hoelder_M = std::fabs(amplitude) * std::exp2(gamma);
    return s;
}

FunctionSpec FunctionSpec::sawtooth_m_scaled(double M, int teeth, double gamma) {
    return sawtooth(0.0, M / std::exp2(gamma), teeth, gamma);
}

FunctionSpec FunctionSpec::smooth_bump_sum(double level, double rho, std::vector<double> signs,
                                           double beta) {
    if (signs.empty()) throw std::invalid_argument("smooth_bump_sum: need at least one bump");
    FunctionSpec s;
    s.kind = FunctionKind::smooth_bump_sum;
    s.level = level;
    s.amplitude = rho;
    s.gamma = beta;
    const double m = static_cast<double>(signs.size());
    double cmax = 0.0;
    for (double k : signs) cmax = std::max(cmax, std::fabs(k));
    s.coefs = std::move(signs);
    s.hoelder_M = std::fabs(rho) * cmax * std::pow(m, 0.5 + beta) *
                  std::max(4.0 * bump_profile_sup(), 2.0 * bump_profile_derivative_sup());
    return s;
}

FunctionSpec FunctionSpec::spiky_v1(int n, double c, double beta) {
    DesignGrid grid(n);
    FunctionSpec s;
    s.kind = FunctionKind::spiky_v1;
    s.level = 1.0;
    s.c = c;
    s.gamma = beta;
    s.grid_n = grid.n();
    s.hoelder_M = std::exp2(1.0 + beta) * std::sqrt(3.0) * std::fabs(c);
    return s;
}

FunctionSpec FunctionSpec::transition_v1(int n, double c, double alpha, double beta) {
    DesignGrid grid(n);
    if (beta <= 0.0 || beta > 1.0) throw std::domain_error("transition_v1: beta must be in (0, 1]");
    FunctionSpec s;
    s.kind = FunctionKind::transition_v1;
    s.level = 1.0;
    s.c = c;
    s.alpha = alpha;
    s.gamma = beta;
    s.grid_n = grid.n();
    // |V'| <= 2c sup|smoothstep'| = 4c and the rise is at most 2c.
    s.hoelder_M = 4.0 * std::fabs(c);
    return s;
}

FunctionSpec FunctionSpec::kappa_prior(int n, double level, std::vector<double> coefs,
                                       double gamma) {
    DesignGrid grid(n);
    if (static_cast<int>(coefs.size()) != grid.size()) {
        throw std::invalid_argument("kappa_prior: need n+1 coefficients");
    }
    FunctionSpec s;
    s.kind = FunctionKind::kappa_prior;
    s.level = level;
    s.gamma = gamma;
    s.grid_n = n;
    double cmax = 0.0;
    for (double k : coefs) cmax = std::max(cmax, std::fabs(k));
    s.coefs = std::move(coefs);
    s.hoelder_M = 2.0 * cmax * std::pow(static_cast<double>(n), gamma);
    return s;
}

FunctionSpec FunctionSpec::custom_table(std::vector<double> xs, std::vector<double> ys,
                                        double gamma) {
    if (xs.size() != ys.size() || xs.empty()) {
        throw std::invalid_argument("custom_table: x and y must be non-empty and equal length");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw std::invalid_argument("custom_table: x must be strictly increasing");
        }
    }
    if (gamma <= 0.0 || gamma > 1.0) {
        throw std::domain_error("custom_table: only gamma in (0, 1] is supported");
    }
    FunctionSpec s;
    s.kind = FunctionKind::custom_table;
    s.gamma = gamma;
    double slope = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        slope = std::max(slope, std::fabs(ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
    }
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    const double range = *hi - *lo;
    s.hoelder_M = std::pow(slope, gamma) * std::pow(range, 1.0 - gamma);
    s.table_x = std::move(xs);
    s.table_y = std::move(ys);
    return s;
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::gaussian_std: return "gaussian-std";
        case NoiseKind::scaled_gaussian_mixture: return "scaled-gaussian-mixture";
        case NoiseKind::matched_moment_discrete: return "matched-moment-discrete";
        case NoiseKind::rademacher_shift: return "rademacher-shift";
    }
    return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    for (auto k : {NoiseKind::gaussian_std, NoiseKind::scaled_gaussian_mixture,
                   NoiseKind::matched_moment_discrete, NoiseKind::rademacher_shift}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown noise kind: " + name);
}

NoiseSpec NoiseSpec::gaussian() { return NoiseSpec{}; }

NoiseSpec NoiseSpec::mixture(std::vector<double> weights, std::vector<double> variances) {
    NoiseSpec s;
    s.kind = NoiseKind::scaled_gaussian_mixture;
    s.weights = std::move(weights);
    s.variances = std::move(variances);
    return s;
}

NoiseSpec NoiseSpec::matched_moment(int q) {
    NoiseSpec s;
    s.kind = NoiseKind::matched_moment_discrete;
    s.q = q;
    return s;
}

NoiseSpec NoiseSpec::rademacher(double shift) {
    NoiseSpec s;
    s.kind = NoiseKind::rademacher_shift;
    s.shift = shift;
    return s;
}

GaussRule NoiseSpec::atoms() const {
    if (kind != NoiseKind::matched_moment_discrete) {
        throw std::logic_error("NoiseSpec::atoms: only defined for the discrete kind");
    }
    if (q < 1) throw std::domain_error("matched-moment noise: q must be positive");
    return gauss_hermite_probabilists((q + 2) / 2);
}

double NoiseSpec::moment(int k) const {
    switch (kind) {
        case NoiseKind::gaussian_std:
            return normal_moment(k);
        case NoiseKind::scaled_gaussian_mixture: {
            long double m = 0.0L;
            for (std::size_t j = 0; j < weights.size(); ++j) {
                m += weights[j] * std::pow(variances[j], 0.5 * k) * normal_moment(k);
            }
            return static_cast<double>(m);
        }
        case NoiseKind::matched_moment_discrete: {
            const GaussRule rule = atoms();
            long double m = 0.0L;
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                m += rule.weights[j] * std::pow(rule.nodes[j], k);
            }
            return static_cast<double>(m);
        }
        case NoiseKind::rademacher_shift: {
            const double a = std::sqrt(1.0 - shift * shift);
            long double m = 0.0L;
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                if ((k - j) % 2 == 0) {
                    m += binom * std::pow(a, j) * normal_moment(j) * std::pow(shift, k - j);
                }
                binom = binom * (k - j) / (j + 1);
            }
            return static_cast<double>(m);
        }
    }
    return 0.0;
}

void NoiseSpec::validate() const {
    if (kind == NoiseKind::scaled_gaussian_mixture) {
        if (weights.empty() || weights.size() != variances.size()) {
            throw std::domain_error("mixture noise: weights and variances must match");
        }
        double total = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            if (weights[j] < 0.0 || variances[j] < 0.0) {
                throw std::domain_error("mixture noise: negative weight or variance");
            }
            total += weights[j];
        }
        if (std::fabs(total - 1.0) > 1e-12) {
            throw std::domain_error("mixture noise: weights must sum to 1");
        }
    }
    if (kind == NoiseKind::rademacher_shift && (shift < 0.0 || shift > 1.0)) {
        throw std::domain_error("rademacher-shift noise: shift must lie in [0, 1]");
    }
    const double m1 = moment(1);
    const double m2 = moment(2);
    const double m4 = moment(4);
    if (std::fabs(m1) >= 1e-10 || std::fabs(m2 - 1.0) >= 1e-10) {
        std::ostringstream msg;
        msg << "noise " << to_string(kind) << " is not standardized: mean " << m1
            << ", variance " << m2;
        throw std::domain_error(msg.str());
    }
    if (m4 > c_xi) {
        std::ostringstream msg;
        msg << "noise fourth moment " << m4 << " exceeds C_xi = " << c_xi;
        throw std::domain_error(msg.str());
    }
}

NoiseSampler::NoiseSampler(const NoiseSpec& spec) : kind_(spec.kind) {
    spec.validate();
    switch (kind_) {
        case NoiseKind::gaussian_std:
            break;
        case NoiseKind::scaled_gaussian_mixture: {
            double acc = 0.0;
            for (std::size_t j = 0; j < spec.weights.size(); ++j) {
                acc += spec.weights[j];
                cumulative_.push_back(acc);
                values_.push_back(std::sqrt(spec.variances[j]));
            }
            cumulative_.back() = 1.0;
            break;
        }
        case NoiseKind::matched_moment_discrete: {
            const GaussRule rule = spec.atoms();
            double acc = 0.0;
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                acc += rule.weights[j];
                cumulative_.push_back(acc);
                values_.push_back(rule.nodes[j]);
            }
            cumulative_.back() = 1.0;
            break;
        }
        case NoiseKind::rademacher_shift:
            shift_ = spec.shift;
            gauss_scale_ = std::sqrt(1.0 - spec.shift * spec.shift);
            break;
    }
}

double NoiseSampler::operator()(Engine& eng) const {
    switch (kind_) {
        case NoiseKind::gaussian_std:
            return standard_normal(eng);
        case NoiseKind::scaled_gaussian_mixture: {
            const double u = uniform01(eng);
            const double z = standard_normal(eng);
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            const std::size_t j = std::min<std::size_t>(
                static_cast<std::size_t>(it - cumulative_.begin()), values_.size() - 1);
            return values_[j] * z;
        }
        case NoiseKind::matched_moment_discrete: {
            const double u = uniform01(eng);
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            const std::size_t j = std::min<std::size_t>(
                static_cast<std::size_t>(it - cumulative_.begin()), values_.size() - 1);
            return values_[j];
        }
        case NoiseKind::rademacher_shift: {
            const double z = standard_normal(eng);
            return gauss_scale_ * z + shift_ * rademacher(eng);
        }
    }
    return 0.0;
}

Sampler::Sampler(const RegressionModel& model)
    : n_(model.n), noise_(model.noise) {
    const DesignGrid grid(model.n);
    f_ = model.f.on_grid(grid);
    v_ = model.V.on_grid(grid);
    sd_.resize(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (!(v_[i] >= 0.0) || !std::isfinite(v_[i]) || !std::isfinite(f_[i])) {
            std::ostringstream msg;
            msg << "variance function is negative or non-finite at grid index " << i
                << " (V = " << v_[i] << ")";
            throw std::domain_error(msg.str());
        }
        sd_[i] = std::sqrt(v_[i]);
    }
}

void Sampler::fill(std::uint64_t seed, std::span<double> out) const {
    if (out.size() != f_.size()) throw std::invalid_argument("Sampler::fill: wrong output size");
    Engine eng = make_engine(seed);
    for (std::size_t i = 0; i < f_.size(); ++i) out[i] = f_[i] + sd_[i] * noise_(eng);
}

SampleVector Sampler::operator()(std::uint64_t seed) const {
    SampleVector s;
    s.seed = seed;
    s.y.resize(f_.size());
    fill(seed, s.y);
    return s;
}

SampleVector sample(const RegressionModel& model, std::uint64_t seed) {
    return Sampler(model)(seed);
}

HoelderReport check_hoelder(const FunctionSpec& spec, double gamma, double M, int refinement) {
    if (!(gamma > 0.0 && gamma <= 2.0)) throw std::domain_error("check_hoelder: gamma must be in (0, 2]");
    if (refinement < 2) throw std::invalid_argument("check_hoelder: refinement must be >= 2");
    const int N = refinement;
    std::vector<double> seq(static_cast<std::size_t>(N + 1));
    for (int k = 0; k <= N; ++k) seq[static_cast<std::size_t>(k)] = spec(static_cast<double>(k) / N);
    double exponent = gamma;
    if (gamma > 1.0) {
        for (int k = 0; k < N; ++k) {
            seq[static_cast<std::size_t>(k)] =
                (seq[static_cast<std::size_t>(k + 1)] - seq[static_cast<std::size_t>(k)]) * N;
        }
        seq.pop_back();
        exponent = gamma - 1.0;
    }
    const int L = static_cast<int>(seq.size()) - 1;
    std::vector<int> lags;
    for (int d = 1; d <= std::min(256, L); ++d) lags.push_back(d);
    for (double d = 320.0; d < L; d *= 1.25) lags.push_back(static_cast<int>(d));
    if (L > 256) lags.push_back(L);

    HoelderReport rep;
    for (int d : lags) {
        const double dist = static_cast<double>(d) / N;
        const double scale = std::pow(dist, exponent);
        double worst = 0.0;
        for (int k = 0; k + d <= L; ++k) {
            worst = std::max(worst, std::fabs(seq[static_cast<std::size_t>(k + d)] -
                                              seq[static_cast<std::size_t>(k)]));
        }
        const double ratio = worst / scale;
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.at_distance = dist;
        }
    }
    rep.pass = rep.worst_ratio <= M * (1.0 + 1e-9) + 1e-12;
    return rep;
}

double l2_heteroskedasticity(const FunctionSpec& spec, std::size_t quadrature_points) {
    if (spec.kind == FunctionKind::constant) return 0.0;
    const std::vector<double> breaks = spec.breakpoints();
    const double mean = quadrature_piecewise(spec, 0.0, 1.0, breaks, quadrature_points).value;
    auto dev2 = [&](double x) {
        const double d = spec(x) - mean;
        return d * d;
    };
    const double var = quadrature_piecewise(dev2, 0.0, 1.0, breaks, quadrature_points).value;
    return std::sqrt(std::max(0.0, var));
}

double design_heteroskedasticity(std::span<const double> values) {
    if (values.empty()) return 0.0;
    CompensatedSum s;
    for (double v : values) s += v;
    const long double mean = s.value() / static_cast<long double>(values.size());
    CompensatedSum d;
    for (double v : values) {
        const long double e = v - mean;
        d += e * e;
    }
    return std::sqrt(static_cast<double>(d.value() / static_cast<long double>(values.size())));
}

double design_heteroskedasticity(const FunctionSpec& spec, const DesignGrid& grid) {
    const std::vector<double> v = spec.on_grid(grid);
    return design_heteroskedasticity(v);
}

}  // namespace hetero
