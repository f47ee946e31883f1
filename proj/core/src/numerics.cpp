#include "hetero/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hetero {

void CompensatedSum::add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        long double s = 0.0L;
        for (double x : v) s += x;
        return static_cast<double>(s);
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double pairwise_mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return pairwise_sum(v) / static_cast<double>(v.size());
}

namespace {

double midpoint_rule(const std::function<double(double)>& fn, double a, double b,
                     std::size_t points) {
    const double width = (b - a) / static_cast<double>(points);
    CompensatedSum acc;
    for (std::size_t k = 0; k < points; ++k) {
        const double x = a + (static_cast<double>(k) + 0.5) * width;
        const double v = fn(x);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite integrand value at x = " << x;
            throw std::domain_error(msg.str());
        }
        acc += v;
    }
    return static_cast<double>(acc.value() * width);
}

}  // namespace

QuadratureResult quadrature(const std::function<double(double)>& fn, double a,
                            double b, std::size_t points) {
    if (!(a < b)) {
        if (a == b) return {};
        throw std::invalid_argument("quadrature: need a < b");
    }
    points = std::max<std::size_t>(4, (points + 3) / 4 * 4);
    const double m1 = midpoint_rule(fn, a, b, points);
    const double m2 = midpoint_rule(fn, a, b, points / 2);
    const double m4 = midpoint_rule(fn, a, b, points / 4);
    const double e1 = m2 - m1;
    const double e2 = m4 - m2;
    double order = 2.0;
    if (e1 != 0.0) {
        const double r = e2 / e1;
        if (std::isfinite(r) && r > 1.0) order = std::clamp(std::log2(r), 0.5, 4.0);
    }
    const double factor = std::exp2(order) - 1.0;
    QuadratureResult out;
    out.value = m1 - e1 / factor;
    out.error = std::fabs(e1) / factor;
    return out;
}

QuadratureResult quadrature_piecewise(const std::function<double(double)>& fn,
                                      double a, double b,
                                      std::span<const double> breakpoints,
                                      std::size_t points) {
    std::vector<double> knots{a};
    for (double x : breakpoints) {
        if (x > a && x < b) knots.push_back(x);
    }
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    QuadratureResult total;
    CompensatedSum value;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i];
        const double hi = knots[i + 1];
        if (!(hi > lo)) continue;
        const double share = (hi - lo) / (b - a) * static_cast<double>(points);
        const std::size_t pts =
            std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(share)));
        const QuadratureResult piece = quadrature(fn, lo, hi, pts);
        value += piece.value;
        total.error += piece.error;
    }
    total.value = static_cast<double>(value.value());
    return total;
}

DiscreteSequence::DiscreteSequence(long lo, std::vector<double> values)
    : lo_(lo), values_(std::move(values)) {}

double DiscreteSequence::operator()(long z) const {
    const long k = z - lo_;
    if (k < 0 || k >= static_cast<long>(values_.size())) return 0.0;
    return values_[static_cast<std::size_t>(k)];
}

double DiscreteSequence::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

DiscreteSequence finite_difference(const DiscreteSequence& g, long h, int order) {
    if (order != 1 && order != 2) {
        throw std::invalid_argument("finite_difference: order must be 1 or 2");
    }
    if (g.empty()) return g;
    if (order == 2) return finite_difference(finite_difference(g, h, 1), h, 1);
    const long lo = std::min(g.lo(), g.lo() - h);
    const long hi = std::max(g.hi(), g.hi() - h);
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (long z = lo; z <= hi; ++z) {
        out[static_cast<std::size_t>(z - lo)] = g(z + h) - g(z);
    }
    return DiscreteSequence(lo, std::move(out));
}

DiscreteSequence discrete_convolution_reference(const DiscreteSequence& f,
                                                const DiscreteSequence& g) {
    if (f.empty() || g.empty()) return {};
    const long lo = f.lo() - g.hi();
    const long hi = f.hi() - g.lo();
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (long z = lo; z <= hi; ++z) {
        long double acc = 0.0L;
        for (long k = f.lo(); k <= f.hi(); ++k) {
            acc += static_cast<long double>(f(k)) * g(k - z);
        }
        out[static_cast<std::size_t>(z - lo)] = static_cast<double>(acc);
    }
    return DiscreteSequence(lo, std::move(out));
}

DiscreteSequence discrete_convolution(const DiscreteSequence& f,
                                      const DiscreteSequence& g) {
    if (f.empty() || g.empty()) return {};
    constexpr long kBlock = 256;
    const long lo = f.lo() - g.hi();
    const long hi = f.hi() - g.lo();
    const auto& fv = f.values();
    const auto& gv = g.values();
    std::vector<long double> acc(static_cast<std::size_t>(hi - lo + 1), 0.0L);
    // Tile over k so the f block stays in cache while z sweeps.
    for (long k0 = f.lo(); k0 <= f.hi(); k0 += kBlock) {
        const long k1 = std::min(f.hi(), k0 + kBlock - 1);
        for (long z = lo; z <= hi; ++z) {
            const long ka = std::max(k0, g.lo() + z);
            const long kb = std::min(k1, g.hi() + z);
            long double s = 0.0L;
            for (long k = ka; k <= kb; ++k) {
                s += static_cast<long double>(fv[static_cast<std::size_t>(k - f.lo())]) *
                     gv[static_cast<std::size_t>(k - z - g.lo())];
            }
            acc[static_cast<std::size_t>(z - lo)] += s;
        }
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i]);
    return DiscreteSequence(lo, std::move(out));
}

double zygmund_constant(double alpha) {
    if (!(alpha < 1.0)) throw std::domain_error("zygmund_constant: need alpha < 1");
    return 1.0 / (1.0 - std::exp2(alpha - 1.0));
}

double zygmund_seminorm(const DiscreteSequence& g, long n, double alpha) {
    if (g.empty()) return 0.0;
    double best = 0.0;
    for (long h = -n; h <= n; ++h) {
        if (h == 0) continue;
        const long zlo = std::min({g.lo(), g.lo() - h, g.lo() - 2 * h});
        const long zhi = std::max({g.hi(), g.hi() - h, g.hi() - 2 * h});
        const double scale = std::pow(std::fabs(static_cast<double>(h) / n), alpha);
        for (long z = zlo; z <= zhi; ++z) {
            const double d2 = g(z + 2 * h) - 2.0 * g(z + h) + g(z);
            best = std::max(best, std::fabs(d2) / scale);
        }
    }
    return best;
}

ZygmundCheck zygmund_bound_check(const DiscreteSequence& g, long n, double alpha) {
    ZygmundCheck out;
    out.seminorm = zygmund_seminorm(g, n, alpha);
    out.sup_norm = g.sup_norm();
    const double factor = out.seminorm * zygmund_constant(alpha) / 2.0 + 2.0 * out.sup_norm;
    for (long z = -n; z <= n; ++z) {
        if (z == 0) continue;
        const double lhs = std::fabs(g(z) - g(0));
        const double bound =
            std::pow(std::fabs(static_cast<double>(z) / n), alpha) * factor;
        double ratio = 0.0;
        if (bound > 0.0) {
            ratio = lhs / bound;
        } else if (lhs > 0.0) {
            ratio = std::numeric_limits<double>::infinity();
        }
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_z = z;
        }
    }
    out.holds = out.worst_ratio <= 1.0 + 1e-12;
    return out;
}

ConvolutionSmoothness convolution_smoothness_check(const DiscreteSequence& f,
                                                   const DiscreteSequence& g,
                                                   long n, double beta, double M) {
    ConvolutionSmoothness out;
    auto premise = [&](const DiscreteSequence& s) {
        double worst = 0.0;
        for (long h = -n; h <= n; ++h) {
            if (h == 0) continue;
            const double scale = M * std::pow(std::fabs(static_cast<double>(h) / n), beta);
            const long z0 = std::max(-h, 0L);
            const long z1 = n - std::max(h, 0L);
            for (long z = z0; z <= z1; ++z) {
                worst = std::max(worst, std::fabs(s(z + h) - s(z)) / scale);
            }
        }
        return worst;
    };
    out.premise_worst = std::max(premise(f), premise(g));
    out.premise_holds = out.premise_worst <= 1.0 + 1e-12;
    if (!out.premise_holds) return out;

    const DiscreteSequence conv = discrete_convolution(f, g);
    out.sup_conv = conv.sup_norm();
    const double c0 = conv(0);
    for (long z = -n; z <= n; ++z) {
        if (z == 0) continue;
        const double denom =
            static_cast<double>(n) * std::pow(std::fabs(static_cast<double>(z) / n), 2.0 * beta);
        out.constant = std::max(out.constant, std::fabs(conv(z) - c0) / denom);
    }
    const double m_eff = std::max({M, f.sup_norm(), g.sup_norm()});
    out.zygmund_factor = 2.0 * m_eff * m_eff * zygmund_constant(2.0 * beta) +
                         2.0 * m_eff * m_eff * static_cast<double>(n + 1) / n;
    return out;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares: need matching inputs of size >= 2");
    }
    const double k = static_cast<double>(x.size());
    const double mx = pairwise_mean(x);
    const double my = pairwise_mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / (k - 2.0) / sxx);
    }
    return fit;
}

GaussRule gauss_hermite_probabilists(int points) {
    if (points < 1) throw std::invalid_argument("gauss_hermite: need at least one point");
    // Golub-Welsch on the Jacobi matrix of the monic Hermite recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
    for (int i = 1; i < points; ++i) {
        jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("gauss_hermite: eigen decomposition failed");
    }
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(points));
    rule.weights.resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = vals(i);
        rule.weights[static_cast<std::size_t>(i)] = vecs(0, i) * vecs(0, i);
    }
    // Enforce exact symmetry; eigenvalues come back sorted ascending.
    for (int i = 0; i < points / 2; ++i) {
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(points - 1 - i);
        const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
        const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
        rule.nodes[a] = -x;
        rule.nodes[b] = x;
        rule.weights[a] = rule.weights[b] = w;
    }
    if (points % 2 == 1) rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
    long double total = 0.0L;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w = static_cast<double>(w / total);
    return rule;
}

double normal_moment(int k) {
    if (k < 0) throw std::invalid_argument("normal_moment: negative order");
    if (k % 2 == 1) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 1; j -= 2) m *= j;
    return m;
}

}  // namespace hetero
