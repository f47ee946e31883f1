// Acceptance suite: one PASS/FAIL line per criterion. Tolerances live here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hetero/harness.hpp"
#include "hetero/kernel.hpp"
#include "hetero/lowerbound.hpp"
#include "hetero/numerics.hpp"
#include "hetero/statistics.hpp"
#include "hetero/testing.hpp"
#include "oracles.hpp"

using namespace hetero;

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kBruteRelTol = 1e-10;
constexpr double kMseSlopeTolT = 0.5;
constexpr double kMseSlopeTolS = 0.4;
constexpr double kType1Max = 0.08;
constexpr double kPowerMin = 0.9;
constexpr double kMarginalGapMax = 1e-10;
constexpr double kRocSigmas = 3.0;
constexpr double kChi2RatioTol = 0.15;
constexpr double kIdentityTol = 1e-10;
constexpr double kConvRatioMax = 2.0;
constexpr double kMomentTol = 1e-9;

int failures = 0;

void report(const char* id, bool pass, double seconds, const std::string& detail) {
    std::printf("%s %s (%.2fs) %s\n", id, pass ? "PASS" : "FAIL", seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

template <class Fn>
void timed(const char* id, Fn fn) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, pass, s, detail);
}

bool ac1(std::string& detail) {
    double worst = 0.0;
    int rows = 0;
    for (int n : {50, 200, 1000}) {
        for (double h : {0.05, 0.2}) {
            const ModifiedKernel k = build_modified_kernel(BaseKernel::box(), n, h);
            const int S = k.support();
            for (int i = S; i + S <= n - 1; ++i) {
                long double sum = 0.0L;
                for (int j = 0; j < n; ++j) sum += k(i - j);
                worst = std::max(worst, static_cast<double>(std::fabs(sum - 1.0L)));
                ++rows;
            }
        }
    }
    detail = fmt("interior rows %.0f, max |row sum - 1| = %.3g", rows, worst);
    return rows > 0 && worst <= kRowSumTol;
}

bool ac2(std::string& detail) {
    std::mt19937_64 gen(20240601);
    std::uniform_int_distribution<int> nd(8, 64);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::normal_distribution<double> z;
    double worst = 0.0;
    int checks = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = nd(gen);
        const double scale = 0.1 + 3.0 * ud(gen);
        const double slope = 4.0 * ud(gen) - 2.0;
        std::vector<double> y(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) y[i] = slope * i / n + scale * z(gen) * (1.0 + 0.5 * std::sin(6.0 * i / n));
        const bool box = trial % 2 == 0;
        const BaseKernel base = box ? BaseKernel::box() : BaseKernel::quartic_plateau();
        const oracle::Integral I = box ? oracle::Integral(oracle::box_integral)
                                       : oracle::Integral(oracle::quartic_plateau_integral);
        const std::function<long double(long double)> Kv =
            box ? std::function<long double(long double)>(oracle::box_value)
                : std::function<long double(long double)>(oracle::quartic_plateau_value);
        // bandwidth with normalizer >= 0.1 for either kernel
        double h = 0.0;
        do {
            h = 0.05 + 0.9 * ud(gen);
        } while (kernel_normalizer(base, n, h) < 0.2);
        auto rel = [&](double lib, long double ref) {
            const double d = static_cast<double>(std::fabs(static_cast<long double>(lib) - ref));
            const double r = ref == 0.0L ? d : d / static_cast<double>(std::fabs(ref));
            worst = std::max(worst, r);
            ++checks;
        };
        const ModifiedKernel k = build_modified_kernel(base, n, h);
        rel(t_hat_kernel(y, k).value, oracle::t_hat_kernel(y, I, h));
        rel(t_hat_profile(y).value, oracle::t_hat_profile(y));
        rel(t1_hat(y).value, oracle::t1_hat(y));
        rel(t2_hat(y).value, oracle::t2_hat(y));
        rel(s_hat(y).value, oracle::t_hat_profile(y) + oracle::t1_hat(y) + oracle::t2_hat(y));
        rel(dette_munk_stat(y), oracle::dette_munk(y));
        rel(dette_2002_stat(y, base, h), oracle::dette_2002(y, Kv, h));
    }
    detail = fmt("%.0f comparisons, max relative error %.3g", checks, worst);
    return worst < kBruteRelTol;
}

ExperimentConfig mse_config(StatisticId id, std::uint64_t seed) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::mse_rate;
    c.name = "ac_mse";
    c.n_grid = {256, 512, 1024, 2048};
    c.replicates = 400;
    c.seed = seed;
    c.statistic.id = id;
    c.statistic.alpha = 1.0;
    c.statistic.beta = 0.4;
    c.scenario.f = FunctionSpec::constant(0.0);
    c.scenario.V = FunctionSpec::constant(1.0);
    return c;
}

bool ac3(std::string& detail) {
    const ExperimentResult r = run_mse_rate(mse_config(StatisticId::t_hat_kernel, 3));
    const double slope = r.summary.at("slope").get<double>();
    const double target = -8.0 * 0.4 / (4.0 * 0.4 + 1.0);
    detail = fmt("slope %.4f, target %.4f +- %.1f", slope, target, kMseSlopeTolT);
    return std::fabs(slope - target) <= kMseSlopeTolT;
}

bool ac4(std::string& detail) {
    const ExperimentResult r = run_mse_rate(mse_config(StatisticId::s_hat, 4));
    const double slope = r.summary.at("slope").get<double>();
    detail = fmt("slope %.4f, target -1 +- %.1f", slope, kMseSlopeTolS);
    return std::fabs(slope + 1.0) <= kMseSlopeTolS;
}

ExperimentConfig calibrated_config(ExperimentKind kind, std::uint64_t seed) {
    ExperimentConfig c;
    c.experiment = kind;
    c.n_grid = {1024};
    c.seed = seed;
    c.eta = 0.1;
    c.M = 10.0;
    c.calibration_replicates = 2000;
    c.statistic.id = StatisticId::t_hat_kernel;
    c.statistic.alpha = 1.0;
    c.statistic.beta = 0.4;
    c.statistic.C_h = 8.0;
    return c;
}

bool ac5(std::string& detail) {
    ExperimentConfig c = calibrated_config(ExperimentKind::type1, 5);
    c.replicates = 2000;
    const ExperimentResult r = run_type1(c);
    const double worst = r.summary.at("max_type1").get<double>();
    detail = fmt("max held-out Type I over %.0f null scenarios = %.4f (limit %.2f)",
                 static_cast<double>(r.table.rows.size()), worst, kType1Max);
    return worst <= kType1Max;
}

bool ac6(std::string& detail) {
    ExperimentConfig c = calibrated_config(ExperimentKind::power_curve, 6);
    c.replicates = 500;
    c.C_list = {10.0};
    const ExperimentResult r = run_power_curve(c);
    const double p = r.summary.at("power_at_max_C").get<double>();
    detail = fmt("power at 10 zeta = %.4f (zeta %.4f)", p, r.summary.at("zeta").get<double>());
    return p >= kPowerMin;
}

bool ac7(std::string& detail) {
    double gap = 0.0;
    PriorSpec a;
    a.n = 256;
    a.M = 9.0;
    a.c = 0.5;
    a.beta = 0.4;
    PriorSpec b = a;  // design-unknown example parameters
    b.n = 100;
    b.beta = 0.2;
    PriorSpec d = a;
    d.n = 1000;
    d.M = 4.0;
    d.c = 0.2;
    for (const PriorSpec& p : {a, b, d}) {
        for (auto con : {Construction::triviality_mixture, Construction::spiky_two_point,
                         Construction::design_unknown_noise}) {
            gap = std::max(gap, marginal_equality_check(con, p, 1001).gap);
        }
    }
    StatisticConfig sc;
    sc.alpha = 1.0;
    sc.beta = 0.4;
    double worst_z = 0.0;
    int rocs = 0;
    for (auto con : {Construction::triviality_mixture, Construction::spiky_two_point,
                     Construction::design_unknown_noise}) {
        for (const RocPoint& r : roc_study(con, a, sc, 1000, 70 + static_cast<int>(con))) {
            worst_z = std::max(worst_z, std::fabs(r.auc - 0.5) / r.auc_stderr);
            ++rocs;
        }
    }
    detail = fmt("max marginal gap %.3g; %.0f ROC curves, worst |AUC-1/2|/stderr = %.2f", gap, rocs, worst_z);
    return gap < kMarginalGapMax && worst_z <= kRocSigmas;
}

double rademacher_chi2(double c, int n) {
    const double rho = rademacher_profile_rho(c, n);
    const MixtureLaw parts[2] = {MixtureLaw::gaussian(0.0, rho), MixtureLaw::gaussian(0.0, 3.0 * rho)};
    const double probs[2] = {0.5, 0.5};
    return chi2_convolved(MixtureLaw::gaussian(0.0, 2.0 * rho), MixtureLaw::combine(parts, probs)).value;
}

bool ac8(std::string& detail) {
    const double c = 0.05;
    const double ratio = rademacher_chi2(c, 256) / rademacher_chi2(c, 1024);
    bool mm = true;
    double worst = 0.0;
    for (int q : {3, 5, 7, 9}) {
        const MomentMatchedLaw G = build_moment_matched(q);
        for (double eps : {0.1, 0.3}) {
            const double v = chi2_convolved(MixtureLaw::gaussian(0.0, eps * eps),
                                            MixtureLaw::atoms(G.atoms, G.weights, eps)).value;
            const double bound = moment_matching_chi2_bound(q, eps);
            mm = mm && v <= bound;
            worst = std::max(worst, v / bound);
        }
    }
    detail = fmt("chi2(n)/chi2(4n) = %.4f (4 +- 15%%); moment-matched worst value/bound = %.3g", ratio, worst);
    return std::fabs(ratio / 4.0 - 1.0) <= kChi2RatioTol && mm;
}

bool ac9(std::string& detail) {
    std::mt19937_64 gen(909);
    std::uniform_int_distribution<int> nd(4, 64);
    std::normal_distribution<double> z;
    double id_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = nd(gen);
        const long flo = -static_cast<long>(gen() % 5), glo = -static_cast<long>(gen() % 5);
        std::vector<double> fv(static_cast<std::size_t>(n) + 1), gv(static_cast<std::size_t>(n) / 2 + 1);
        for (auto& v : fv) v = z(gen);
        for (auto& v : gv) v = z(gen);
        const DiscreteSequence f(flo, fv), g(glo, gv);
        oracle::Seq fo, go;
        for (std::size_t i = 0; i < fv.size(); ++i) fo[flo + static_cast<long>(i)] = fv[i];
        for (std::size_t i = 0; i < gv.size(); ++i) go[glo + static_cast<long>(i)] = gv[i];
        const long h = 1 + static_cast<long>(gen() % static_cast<unsigned>(n));
        const DiscreteSequence lhs = finite_difference(discrete_convolution(f, g), h, 2);
        // (D_h f) * (D_h g^-) evaluated from the oracle sums.
        oracle::Seq dfo, dgo;
        for (long k = oracle::lo(fo) - h; k <= oracle::hi(fo); ++k) dfo[k] = oracle::at(fo, k + h) - oracle::at(fo, k);
        for (long k = oracle::lo(go) - h; k <= oracle::hi(go); ++k) dgo[k] = oracle::at(go, k + h) - oracle::at(go, k);
        const long zlo = oracle::lo(fo) - oracle::hi(go) - 2 * h - 2;
        const long zhi = oracle::hi(fo) - oracle::lo(go) + 2 * h + 2;
        for (long zz = zlo; zz <= zhi; ++zz) {
            // (D_h g^-)(x) = g(-x-h) - g(-x) = -(D_h g)(-x-h)
            long double rhs = 0.0L;
            for (const auto& [k, v] : dfo) rhs += v * -oracle::at(dgo, k - zz - h);
            id_err = std::max(id_err, static_cast<double>(std::fabs(lhs(zz) - rhs)));
        }
    }
    // Zygmund conclusion on random admissible sequences.
    std::uniform_real_distribution<double> ud(0.05, 0.95);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = nd(gen);
        const double alpha = ud(gen);
        std::vector<double> v(2 * static_cast<std::size_t>(n) + 1);
        double walk = 0.0;
        for (auto& x : v) x = (walk += z(gen) / std::sqrt(static_cast<double>(n)));
        const DiscreteSequence g(-n, v);
        const ZygmundCheck zc = zygmund_bound_check(g, n, alpha);
        // independent bound evaluation
        const double C = 1.0 / (1.0 - std::pow(2.0, alpha - 1.0));
        for (long zz = -n; zz <= n; ++zz) {
            if (zz == 0) continue;
            const double bound = std::pow(std::fabs(static_cast<double>(zz) / n), alpha) *
                                 (zc.seminorm * C / 2.0 + 2.0 * zc.sup_norm);
            worst_ratio = std::max(worst_ratio, std::fabs(g(zz) - g(0)) / bound);
        }
    }
    // Convolution constant under n doubling.
    const double beta = 0.4;
    const FunctionSpec F = FunctionSpec::sawtooth_m_scaled(1.0, 4, beta);
    const FunctionSpec G = FunctionSpec::sawtooth_m_scaled(1.0, 3, beta);
    double constants[2];
    bool premise = true;
    int idx = 0;
    for (int n : {512, 1024}) {
        const DesignGrid grid(n);
        const ConvolutionSmoothness cs = convolution_smoothness_check(
            DiscreteSequence::on_grid(F.on_grid(grid)), DiscreteSequence::on_grid(G.on_grid(grid)), n, beta, 1.0);
        premise = premise && cs.premise_holds;
        constants[idx++] = cs.constant;
    }
    const double ratio = constants[1] / constants[0];
    detail = fmt("identity max error %.3g; Zygmund worst ratio %.3f; constant ratio 1024/512 = %.3f",
                 id_err, worst_ratio, ratio);
    return id_err <= kIdentityTol && worst_ratio <= 1.0 && premise && ratio < kConvRatioMax;
}

bool ac10(std::string& detail) {
    double worst = 0.0;
    for (int q : {3, 5, 7, 9}) {
        const MomentMatchedLaw G = build_moment_matched(q);
        for (int k = 1; k <= q; ++k) {
            long double m = 0.0L;
            for (std::size_t i = 0; i < G.atoms.size(); ++i) m += G.weights[i] * std::pow(static_cast<long double>(G.atoms[i]), k);
            worst = std::max(worst, static_cast<double>(std::fabs(m - oracle::double_factorial_moment(k))));
        }
    }
    detail = fmt("max moment error %.3g over q in {3,5,7,9}", worst);
    return worst <= kMomentTol;
}

}  // namespace

int main() {
    timed("AC1", ac1);
    timed("AC2", ac2);
    timed("AC3", ac3);
    timed("AC4", ac4);
    timed("AC5", ac5);
    timed("AC6", ac6);
    timed("AC7", ac7);
    timed("AC8", ac8);
    timed("AC9", ac9);
    timed("AC10", ac10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
