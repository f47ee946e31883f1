#include "hetero/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hetero/errors.hpp"
#include "hetero/numerics.hpp"
#include "hetero/rng.hpp"

namespace hetero {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_sum_exp(std::span<const double> v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace

double MomentMatchedLaw::moment(int k) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        s += static_cast<long double>(weights[i]) * std::pow(static_cast<long double>(atoms[i]), k);
    }
    return static_cast<double>(s.value());
}

MomentMatchedLaw build_moment_matched(int q) {
    if (q < 1) throw std::domain_error("build_moment_matched: q must be >= 1");
    const GaussRule rule = gauss_hermite_probabilists((q + 2) / 2);
    MomentMatchedLaw law;
    law.q = q;
    law.atoms = rule.nodes;
    law.weights = rule.weights;
    for (double a : law.atoms) {
        if (!std::isfinite(a)) throw std::runtime_error("build_moment_matched: non-finite node");
        law.bound = std::max(law.bound, std::fabs(a));
    }
    return law;
}

MixtureLaw MixtureLaw::gaussian(double mean, double variance) {
    if (variance < 0.0) throw std::domain_error("MixtureLaw: negative variance");
    MixtureLaw m;
    m.parts.push_back({1.0, mean, variance});
    return m;
}

MixtureLaw MixtureLaw::atoms(std::span<const double> locations, std::span<const double> weights,
                             double scale) {
    if (locations.size() != weights.size() || locations.empty()) {
        throw std::invalid_argument("MixtureLaw::atoms: size mismatch");
    }
    MixtureLaw m;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        m.parts.push_back({weights[i], scale * locations[i], 0.0});
    }
    return m;
}

MixtureLaw MixtureLaw::of_noise(const NoiseSpec& noise) {
    switch (noise.kind) {
        case NoiseKind::gaussian_std:
            return gaussian(0.0, 1.0);
        case NoiseKind::scaled_gaussian_mixture: {
            MixtureLaw m;
            for (std::size_t k = 0; k < noise.weights.size(); ++k) {
                m.parts.push_back({noise.weights[k], 0.0, noise.variances[k]});
            }
            return m;
        }
        case NoiseKind::matched_moment_discrete: {
            const GaussRule r = noise.atoms();
            return atoms(r.nodes, r.weights);
        }
        case NoiseKind::rademacher_shift: {
            const double v = 1.0 - noise.shift * noise.shift;
            MixtureLaw m;
            m.parts.push_back({0.5, noise.shift, v});
            m.parts.push_back({0.5, -noise.shift, v});
            return m;
        }
    }
    throw std::logic_error("MixtureLaw::of_noise: unknown kind");
}

MixtureLaw MixtureLaw::convolved_with_standard_normal() const {
    MixtureLaw m = *this;
    for (auto& p : m.parts) p.variance += 1.0;
    return m;
}

MixtureLaw MixtureLaw::shifted(double delta) const {
    MixtureLaw m = *this;
    for (auto& p : m.parts) p.mean += delta;
    return m;
}

MixtureLaw MixtureLaw::scaled(double factor) const {
    MixtureLaw m = *this;
    for (auto& p : m.parts) {
        p.mean *= factor;
        p.variance *= factor * factor;
    }
    return m;
}

MixtureLaw MixtureLaw::combine(std::span<const MixtureLaw> laws, std::span<const double> probs) {
    if (laws.size() != probs.size()) throw std::invalid_argument("MixtureLaw::combine: size mismatch");
    MixtureLaw m;
    for (std::size_t i = 0; i < laws.size(); ++i) {
        for (auto p : laws[i].parts) {
            p.weight *= probs[i];
            m.parts.push_back(p);
        }
    }
    return m;
}

double MixtureLaw::log_density(double x) const {
    std::vector<double> terms;
    terms.reserve(parts.size());
    for (const auto& p : parts) {
        if (p.weight <= 0.0) continue;
        if (!(p.variance > 0.0)) throw std::domain_error("MixtureLaw: density of a point mass");
        const double z = x - p.mean;
        terms.push_back(std::log(p.weight) - kLogSqrt2Pi - 0.5 * std::log(p.variance) -
                        0.5 * z * z / p.variance);
    }
    return log_sum_exp(terms);
}

double MixtureLaw::density(double x) const { return std::exp(log_density(x)); }

double MixtureLaw::moment(int k) const {
    // E (m + s Z)^k by the binomial expansion.
    CompensatedSum total;
    for (const auto& p : parts) {
        const double s = std::sqrt(p.variance);
        long double acc = 0.0L;
        long double binom = 1.0L;
        for (int j = 0; j <= k; ++j) {
            if (j > 0) binom = binom * (k - j + 1) / j;
            acc += binom * std::pow(static_cast<long double>(p.mean), k - j) *
                   std::pow(static_cast<long double>(s), j) * normal_moment(j);
        }
        total += p.weight * acc;
    }
    return static_cast<double>(total.value());
}

Chi2Result chi2_convolved(const MixtureLaw& nu0, const MixtureLaw& nu1, double truncation_sd) {
    const MixtureLaw p0 = nu0.convolved_with_standard_normal();
    const MixtureLaw p1 = nu1.convolved_with_standard_normal();
    double sd = 0.0;
    double lo_mean = std::numeric_limits<double>::infinity();
    double hi_mean = -lo_mean;
    for (const MixtureLaw* law : {&p0, &p1}) {
        for (const auto& p : law->parts) {
            sd = std::max(sd, std::sqrt(p.variance));
            lo_mean = std::min(lo_mean, p.mean);
            hi_mean = std::max(hi_mean, p.mean);
        }
    }
    auto integrand = [&](double x) {
        const double l0 = p0.log_density(x);
        const double l1 = p1.log_density(x);
        const double t = std::expm1(l1 - l0);
        if (t == 0.0) return 0.0;
        return std::exp(l0 + 2.0 * std::log(std::fabs(t)));
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    Chi2Result out;
    auto integrate = [&](double a, double b, double& err_acc) {
        double err = 0.0;
        const double v = GK::integrate(integrand, a, b, 6, 1e-12, &err);
        err_acc += err;
        return v;
    };
    // Pieces one sd wide keep the adaptive rule near the mass.
    const double a = lo_mean - truncation_sd * sd;
    const double b = hi_mean + truncation_sd * sd;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / sd)));
    CompensatedSum total;
    double err = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double x0 = a + (b - a) * k / pieces;
        const double x1 = a + (b - a) * (k + 1) / pieces;
        total += integrate(x0, x1, err);
    }
    double tail_err = 0.0;
    const double shell = truncation_sd * sd;
    const double tail = integrate(a - shell, a, tail_err) + integrate(b, b + shell, tail_err);
    out.value = static_cast<double>(total.value());
    out.abs_error = err;
    out.tail_estimate = tail;
    out.lower = std::max(0.0, out.value - err);
    out.upper = out.value + err + tail + tail_err;
    if (!std::isfinite(out.value)) throw std::domain_error("chi2_convolved: non-finite result");
    return out;
}

double chi2_tensorize(std::span<const double> per_coordinate) {
    if (per_coordinate.size() == 1) return per_coordinate[0];
    CompensatedSum s;
    for (double v : per_coordinate) {
        if (v < 0.0) throw std::domain_error("chi2_tensorize: negative entry");
        s += std::log1p(v);
    }
    return std::expm1(static_cast<double>(s.value()));
}

double moment_matching_chi2_bound(int L, double eps) {
    if (L < 1 || eps <= 0.0 || eps >= 1.0) throw std::domain_error("moment_matching_chi2_bound: need L >= 1, eps in (0,1)");
    return 16.0 / std::sqrt(static_cast<double>(L)) * std::pow(eps, 2 * L + 2) / (1.0 - eps * eps);
}

std::string to_string(PriorKind kind) {
    switch (kind) {
        case PriorKind::nuisance_mean_prior: return "nuisance-mean-prior";
        case PriorKind::bump_variance_prior: return "bump-variance-prior";
        case PriorKind::spiky_v1: return "spiky-v1";
        case PriorKind::rademacher_profile: return "rademacher-profile";
        case PriorKind::mixture_noise_pair: return "mixture-noise-pair";
        case PriorKind::triviality_mixture: return "triviality-mixture";
    }
    return "unknown";
}

PriorKind prior_kind_from_string(const std::string& name) {
    for (auto k : {PriorKind::nuisance_mean_prior, PriorKind::bump_variance_prior,
                   PriorKind::spiky_v1, PriorKind::rademacher_profile,
                   PriorKind::mixture_noise_pair, PriorKind::triviality_mixture}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown prior kind: " + name);
}

int nuisance_moment_order(double alpha) {
    if (alpha <= 0.0) throw std::domain_error("nuisance prior: alpha must be positive");
    int q = 1;
    while (!(2.0 * alpha * (q + 1) > 1.0)) ++q;
    return q;
}

double rademacher_profile_rho(double c, int n) {
    return std::numbers::sqrt2 * c * std::pow(static_cast<double>(n), -0.25);
}

double mixture_noise_amplitude(double c, double beta, int n) {
    return std::numbers::sqrt2 * c * std::pow(static_cast<double>(n), -beta);
}

int bump_count(double beta, int n) {
    return std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(n), 2.0 / (4.0 * beta + 1.0)))));
}

double bump_rho(double c, double beta, int n) {
    const double cprime = 1.0 / std::max(4.0 * bump_profile_sup(), 2.0 * bump_profile_derivative_sup());
    return c * cprime * std::pow(static_cast<double>(n), -(2.0 * beta + 1.0) / (4.0 * beta + 1.0));
}

namespace {

FunctionSpec table_on_grid(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size()) - 1;
    std::vector<double> xs(values.size());
    for (int i = 0; i <= n; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    return FunctionSpec::custom_table(std::move(xs), values, 1.0);
}

double profile_event_value(const std::vector<double>& v) {
    const double d = design_heteroskedasticity(v);
    return d * d;
}

}  // namespace

PriorDraw draw_prior(const PriorSpec& spec, Hypothesis which, std::uint64_t seed) {
    const int n = spec.n;
    DesignGrid grid(n);
    PriorDraw out;
    out.model.n = n;
    Engine eng = make_engine(seed);
    const bool alt = which == Hypothesis::alternative;

    switch (spec.kind) {
        case PriorKind::nuisance_mean_prior: {
            if (!(spec.alpha > 0.0 && spec.alpha < 0.25)) {
                throw std::domain_error("nuisance prior: requires 0 < alpha < 1/4");
            }
            const FunctionSpec V1 = FunctionSpec::transition_v1(n, spec.c, spec.alpha, spec.beta);
            if (alt) {
                out.model.V = V1;
                break;
            }
            const int q = spec.q > 0 ? spec.q : nuisance_moment_order(spec.alpha);
            const MomentMatchedLaw G = build_moment_matched(q);
            std::vector<double> cum(G.weights.size());
            double acc = 0.0;
            for (std::size_t k = 0; k < cum.size(); ++k) cum[k] = (acc += G.weights[k]);
            std::vector<double> coefs(static_cast<std::size_t>(grid.size()));
            for (int i = 0; i <= n; ++i) {
                const double u = uniform01(eng) * acc;
                std::size_t k = 0;
                while (k + 1 < cum.size() && u >= cum[k]) ++k;
                const double s = std::sqrt(std::max(0.0, V1(grid.point(i)) - 1.0));
                coefs[static_cast<std::size_t>(i)] = G.atoms[k] * s;
            }
            out.model.f = FunctionSpec::kappa_prior(n, 0.0, std::move(coefs), std::min(spec.alpha, 1.0));
            break;
        }
        case PriorKind::bump_variance_prior: {
            if (!alt) break;
            const int m = bump_count(spec.beta, n);
            std::vector<double> signs(static_cast<std::size_t>(m));
            for (auto& s : signs) s = rademacher(eng);
            out.model.V = FunctionSpec::smooth_bump_sum(1.0, bump_rho(spec.c, spec.beta, n),
                                                        std::move(signs), spec.beta);
            break;
        }
        case PriorKind::spiky_v1:
            if (alt) out.model.V = FunctionSpec::spiky_v1(n, spec.c, spec.beta);
            break;
        case PriorKind::rademacher_profile: {
            const double rho = rademacher_profile_rho(spec.c, n);
            const double tau = 2.0 * rho;
            if (!alt) {
                out.model.V = FunctionSpec::constant(1.0 + tau);
                break;
            }
            std::vector<double> v(static_cast<std::size_t>(grid.size()));
            for (out.attempts = 1;; ++out.attempts) {
                for (auto& x : v) x = 1.0 + tau + rho * rademacher(eng);
                if (profile_event_value(v) > rho * rho / 2.0) break;
                if (out.attempts >= spec.rejection_budget) {
                    throw SamplingError("rademacher-profile: rejection budget exhausted, acceptance rate 0/" +
                                        std::to_string(out.attempts));
                }
            }
            out.model.V = table_on_grid(v);
            break;
        }
        case PriorKind::mixture_noise_pair: {
            const double a = mixture_noise_amplitude(spec.c, spec.beta, n);
            if (!(a < 1.0)) throw std::domain_error("mixture-noise-pair: amplitude must be below 1");
            if (!alt) {
                out.model.noise = NoiseSpec::mixture({0.5, 0.5}, {1.0 + a, 1.0 - a});
                break;
            }
            std::vector<double> coefs(static_cast<std::size_t>(grid.size()));
            std::vector<double> v(coefs.size());
            for (out.attempts = 1;; ++out.attempts) {
                for (std::size_t i = 0; i < coefs.size(); ++i) {
                    coefs[i] = a * rademacher(eng);
                    v[i] = 1.0 + coefs[i];
                }
                if (profile_event_value(v) > a * a / 2.0) break;
                if (out.attempts >= spec.rejection_budget) {
                    throw SamplingError("mixture-noise-pair: rejection budget exhausted, acceptance rate 0/" +
                                        std::to_string(out.attempts));
                }
            }
            out.model.V = FunctionSpec::kappa_prior(n, 1.0, std::move(coefs), spec.beta);
            break;
        }
        case PriorKind::triviality_mixture: {
            const double M = spec.M;
            if (!(M >= 1.0)) throw std::domain_error("triviality-mixture: M must be >= 1");
            if (!alt) {
                out.model.V = FunctionSpec::constant((M + 1.0) / 2.0);
                out.model.noise = NoiseSpec::mixture({0.5, 0.5}, {2.0 / (M + 1.0), 2.0 * M / (M + 1.0)});
                break;
            }
            std::vector<double> v(static_cast<std::size_t>(grid.size()));
            for (auto& x : v) x = (rademacher(eng) > 0) ? M : 1.0;
            out.model.V = table_on_grid(v);
            break;
        }
    }
    return out;
}

PriorClassCheck check_prior_draw(const PriorSpec& spec, Hypothesis which, const PriorDraw& draw,
                                 double M) {
    PriorClassCheck out;
    const RegressionModel& m = draw.model;
    const int n = spec.n;
    DesignGrid grid(n);
    const std::vector<double> v = m.V.on_grid(grid);
    for (double x : v) out.nonnegative_ok = out.nonnegative_ok && x >= 0.0;
    const bool alt = which == Hypothesis::alternative;
    const int refinement = 16 * n;

    auto hoelder = [&](const FunctionSpec& g, double gamma) {
        const HoelderReport r = check_hoelder(g, gamma, M, refinement);
        out.hoelder_ratio = std::max(out.hoelder_ratio, r.worst_ratio);
        out.hoelder_ok = out.hoelder_ok && r.pass;
    };

    switch (spec.kind) {
        case PriorKind::nuisance_mean_prior:
            if (alt) {
                hoelder(m.V, spec.beta);
                out.separation = l2_heteroskedasticity(m.V);
                out.separation_target = spec.c * std::pow(static_cast<double>(n), -2.0 * spec.alpha) / std::sqrt(2.0);
                out.separation_ok = out.separation >= out.separation_target;
            } else {
                hoelder(m.f, std::min(spec.alpha, 1.0));
                out.separation_ok = m.V.kind == FunctionKind::constant;
            }
            break;
        case PriorKind::bump_variance_prior:
            if (alt) {
                hoelder(m.V, spec.beta);
                const double s = l2_heteroskedasticity(m.V);
                out.separation = s * s;
                const double rho = bump_rho(spec.c, spec.beta, n);
                out.separation_target = bump_count(spec.beta, n) * rho * rho;
                out.separation_ok = std::fabs(out.separation - out.separation_target) <=
                                    1e-6 * out.separation_target;
            }
            break;
        case PriorKind::spiky_v1:
            if (alt) {
                hoelder(m.V, spec.beta);
                out.separation = l2_heteroskedasticity(m.V);
                out.separation_target = spec.c * std::pow(static_cast<double>(n), -spec.beta);
                out.separation_ok = std::fabs(out.separation - out.separation_target) <=
                                        1e-6 * out.separation_target &&
                                    design_heteroskedasticity(v) == 0.0;
            }
            break;
        case PriorKind::rademacher_profile:
            if (alt) {
                const double rho = rademacher_profile_rho(spec.c, n);
                out.separation = profile_event_value(v);
                out.separation_target = rho * rho / 2.0;
                out.separation_ok = out.separation > out.separation_target;
            }
            break;
        case PriorKind::mixture_noise_pair:
            if (alt) {
                hoelder(m.V, spec.beta);
                const double a = mixture_noise_amplitude(spec.c, spec.beta, n);
                out.separation = profile_event_value(v);
                out.separation_target = a * a / 2.0;
                out.separation_ok = out.separation > out.separation_target;
            } else {
                m.noise.validate();
            }
            break;
        case PriorKind::triviality_mixture:
            if (alt) {
                for (double x : v) out.separation_ok = out.separation_ok && (x == 1.0 || x == spec.M);
            } else {
                m.noise.validate();
            }
            break;
    }
    return out;
}

std::string to_string(Construction c) {
    switch (c) {
        case Construction::triviality_mixture: return "triviality-mixture";
        case Construction::spiky_two_point: return "spiky-two-point";
        case Construction::design_unknown_noise: return "design-unknown-noise";
    }
    return "unknown";
}

Construction construction_from_string(const std::string& name) {
    for (auto c : {Construction::triviality_mixture, Construction::spiky_two_point,
                   Construction::design_unknown_noise}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown construction: " + name);
}

PriorSpec construction_prior(Construction construction, const PriorSpec& params) {
    PriorSpec s = params;
    switch (construction) {
        case Construction::triviality_mixture: s.kind = PriorKind::triviality_mixture; break;
        case Construction::spiky_two_point: s.kind = PriorKind::spiky_v1; break;
        case Construction::design_unknown_noise: s.kind = PriorKind::mixture_noise_pair; break;
    }
    return s;
}

namespace {

// Law of f(x) + sqrt(V(x)) xi for a fixed model at one design point.
MixtureLaw point_law(const RegressionModel& m, double x) {
    return MixtureLaw::of_noise(m.noise).scaled(std::sqrt(m.V(x))).shifted(m.f(x));
}

// Single-observation laws at design point i under both hypotheses. The
// priors here randomize only through independent per-point signs, so the
// marginal at i is the equal mixture over the two sign values of that point.
std::pair<MixtureLaw, MixtureLaw> construction_marginals(Construction construction,
                                                         const PriorSpec& s, int i) {
    const int n = s.n;
    const double x = static_cast<double>(i) / n;
    PriorDraw null = draw_prior(s, Hypothesis::null, 0);
    const MixtureLaw p0 = point_law(null.model, x);
    switch (construction) {
        case Construction::spiky_two_point: {
            PriorDraw alt = draw_prior(s, Hypothesis::alternative, 0);
            return {p0, point_law(alt.model, x)};
        }
        case Construction::triviality_mixture: {
            const MixtureLaw parts[2] = {MixtureLaw::gaussian(0.0, 1.0), MixtureLaw::gaussian(0.0, s.M)};
            const double probs[2] = {0.5, 0.5};
            return {p0, MixtureLaw::combine(parts, probs)};
        }
        case Construction::design_unknown_noise: {
            const double a = mixture_noise_amplitude(s.c, s.beta, n);
            MixtureLaw parts[2];
            for (int sign = 0; sign < 2; ++sign) {
                std::vector<double> coefs(static_cast<std::size_t>(n + 1), sign ? a : -a);
                RegressionModel m;
                m.n = n;
                m.V = FunctionSpec::kappa_prior(n, 1.0, std::move(coefs), s.beta);
                parts[sign] = point_law(m, x);
            }
            const double probs[2] = {0.5, 0.5};
            return {p0, MixtureLaw::combine(parts, probs)};
        }
    }
    throw std::logic_error("construction_marginals: unknown construction");
}

}  // namespace

MarginalGap marginal_equality_check(Construction construction, const PriorSpec& params,
                                    int num_quadrature) {
    const PriorSpec s = construction_prior(construction, params);
    if (num_quadrature < 2) throw std::invalid_argument("marginal_equality_check: need >= 2 points");
    MarginalGap out;
    // Spiky and mixture constructions vary with i only through the design
    // point, so every point is checked.
    const int points = construction == Construction::triviality_mixture ? 1 : s.n + 1;
    for (int i = 0; i < points; ++i) {
        const auto [p0, p1] = construction_marginals(construction, s, i);
        double sd = 0.0;
        for (const auto& p : p0.parts) sd = std::max(sd, std::sqrt(p.variance));
        const double lim = 12.0 * sd;
        for (int k = 0; k < num_quadrature; ++k) {
            const double y = -lim + 2.0 * lim * k / (num_quadrature - 1);
            const double d0 = p0.density(y);
            const double d1 = p1.density(y);
            out.gap = std::max(out.gap, std::fabs(d0 - d1));
            out.peak_density = std::max(out.peak_density, d0);
            ++out.points;
        }
    }
    return out;
}

RiskFloor risk_floor_estimate(const PriorSpec& spec, int replicates, std::uint64_t seed,
                              int threads) {
    const int n = spec.n;
    DesignGrid grid(n);
    const std::size_t N = static_cast<std::size_t>(grid.size());
    // Per-coordinate densities of the two product hypotheses.
    std::vector<MixtureLaw> q0(N), q1(N);
    std::vector<double> chi(N);
    switch (spec.kind) {
        case PriorKind::rademacher_profile: {
            const double rho = rademacher_profile_rho(spec.c, n);
            const MixtureLaw nu0 = MixtureLaw::gaussian(0.0, 2.0 * rho);
            const MixtureLaw parts[2] = {MixtureLaw::gaussian(0.0, rho), MixtureLaw::gaussian(0.0, 3.0 * rho)};
            const double probs[2] = {0.5, 0.5};
            const MixtureLaw nu1 = MixtureLaw::combine(parts, probs);
            const double v = chi2_convolved(nu0, nu1).value;
            for (std::size_t i = 0; i < N; ++i) {
                q0[i] = nu0.convolved_with_standard_normal();
                q1[i] = nu1.convolved_with_standard_normal();
                chi[i] = v;
            }
            break;
        }
        case PriorKind::nuisance_mean_prior: {
            const FunctionSpec V1 = FunctionSpec::transition_v1(n, spec.c, spec.alpha, spec.beta);
            const int q = spec.q > 0 ? spec.q : nuisance_moment_order(spec.alpha);
            const MomentMatchedLaw G = build_moment_matched(q);
            double last_s = -1.0, last_v = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double s = std::sqrt(std::max(0.0, V1(grid.point(static_cast<int>(i))) - 1.0));
                const MixtureLaw gauss = MixtureLaw::gaussian(0.0, s * s);
                const MixtureLaw disc = MixtureLaw::atoms(G.atoms, G.weights, s);
                // Gaussian reference in the denominator: its tails dominate.
                if (s != last_s) {
                    last_v = s > 0.0 ? chi2_convolved(gauss, disc).value : 0.0;
                    last_s = s;
                }
                chi[i] = last_v;
                q0[i] = disc.convolved_with_standard_normal();
                q1[i] = gauss.convolved_with_standard_normal();
            }
            break;
        }
        default:
            throw std::invalid_argument("risk_floor_estimate: unsupported construction " + to_string(spec.kind));
    }

    RiskFloor out;
    out.chi2 = chi2_tensorize(chi);
    out.bound = std::max(0.0, 1.0 - 0.5 * std::sqrt(out.chi2));
    out.replicates = replicates;
    if (replicates <= 0) return out;

    // Likelihood-ratio test on data drawn from each hypothesis.
    std::vector<int> wrong(2 * static_cast<std::size_t>(replicates), 0);
    parallel_for(wrong.size(), threads, [&](std::size_t job) {
        const bool alt = job % 2 == 1;
        const std::uint64_t s = derive_seed(seed, job);
        const PriorDraw d = draw_prior(spec, alt ? Hypothesis::alternative : Hypothesis::null,
                                       derive_seed(s, 0));
        const SampleVector y = sample(d.model, derive_seed(s, 1));
        CompensatedSum llr;
        for (std::size_t i = 0; i < N; ++i) llr += q1[i].log_density(y.y[i]) - q0[i].log_density(y.y[i]);
        const bool says_alt = llr.value() > 0.0L;
        wrong[job] = says_alt != alt ? 1 : 0;
    });
    double e0 = 0.0, e1 = 0.0;
    for (std::size_t j = 0; j < wrong.size(); ++j) (j % 2 ? e1 : e0) += wrong[j];
    e0 /= replicates;
    e1 /= replicates;
    out.mc_risk = e0 + e1;
    out.mc_stderr = std::sqrt((e0 * (1 - e0) + e1 * (1 - e1)) / replicates);
    return out;
}

}  // namespace hetero
