#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hetero/sim_model.hpp"

namespace hetero {

// Symmetric law on [-bound, bound] sharing the first q moments of N(0,1).
struct MomentMatchedLaw {
    int q = 1;
    double bound = 0.0;
    std::vector<double> atoms;
    std::vector<double> weights;

    double moment(int k) const;
};

MomentMatchedLaw build_moment_matched(int q);

// Finite mixture of normals; a zero variance component is a point mass.
struct MixtureLaw {
    struct Component {
        double weight = 1.0;
        double mean = 0.0;
        double variance = 0.0;
    };
    std::vector<Component> parts;

    static MixtureLaw gaussian(double mean, double variance);
    static MixtureLaw atoms(std::span<const double> locations, std::span<const double> weights,
                            double scale = 1.0);
    static MixtureLaw of_noise(const NoiseSpec& noise);

    MixtureLaw convolved_with_standard_normal() const;
    MixtureLaw shifted(double delta) const;
    MixtureLaw scaled(double factor) const;
    // Mixture of laws with the given probabilities.
    static MixtureLaw combine(std::span<const MixtureLaw> laws, std::span<const double> probs);

    double log_density(double x) const;  // needs every variance > 0
    double density(double x) const;
    double moment(int k) const;
    double mean() const { return moment(1); }
};

struct Chi2Result {
    double value = 0.0;
    double abs_error = 0.0;
    double tail_estimate = 0.0;  // integral over the next shell beyond the cut
    double lower = 0.0;
    double upper = 0.0;
};

// chi^2(nu1 * N(0,1) || nu0 * N(0,1)) = int (p1 - p0)^2 / p0.
Chi2Result chi2_convolved(const MixtureLaw& nu0, const MixtureLaw& nu1,
                          double truncation_sd = 12.0);

// prod(1 + v_i) - 1, evaluated in log space.
double chi2_tensorize(std::span<const double> per_coordinate);

// The (16/sqrt(L)) eps^{2L+2} / (1 - eps^2) bound for eps-subgaussian laws
// sharing L moments.
double moment_matching_chi2_bound(int L, double eps);

enum class PriorKind {
    nuisance_mean_prior,
    bump_variance_prior,
    spiky_v1,
    rademacher_profile,
    mixture_noise_pair,
    triviality_mixture,
};

std::string to_string(PriorKind kind);
PriorKind prior_kind_from_string(const std::string& name);

enum class Hypothesis { null, alternative };

struct PriorSpec {
    PriorKind kind = PriorKind::spiky_v1;
    int n = 256;
    double alpha = 0.2;
    double beta = 0.4;
    double c = 0.1;
    int q = 0;          // nuisance prior moment order; 0 picks the smallest with 2 alpha (q+1) > 1
    double M = 9.0;     // triviality mixture variance ratio
    int rejection_budget = 10000;
};

struct PriorDraw {
    RegressionModel model;
    int attempts = 1;
};

// Draws the model of the requested hypothesis; deterministic sides ignore
// the seed. Conditioning events are enforced by rejection sampling.
PriorDraw draw_prior(const PriorSpec& spec, Hypothesis which, std::uint64_t seed);

// Derived construction parameters.
int nuisance_moment_order(double alpha);
double rademacher_profile_rho(double c, int n);
double mixture_noise_amplitude(double c, double beta, int n);
int bump_count(double beta, int n);
double bump_rho(double c, double beta, int n);

struct PriorClassCheck {
    bool hoelder_ok = true;
    bool nonnegative_ok = true;
    bool separation_ok = true;
    double hoelder_ratio = 0.0;
    double separation = 0.0;
    double separation_target = 0.0;
    bool ok() const { return hoelder_ok && nonnegative_ok && separation_ok; }
};

// Class membership of a draw; M is the Hoelder constant of the class.
PriorClassCheck check_prior_draw(const PriorSpec& spec, Hypothesis which,
                                 const PriorDraw& draw, double M = 10.0);

enum class Construction { triviality_mixture, spiky_two_point, design_unknown_noise };

std::string to_string(Construction c);
Construction construction_from_string(const std::string& name);

struct MarginalGap {
    double gap = 0.0;
    double peak_density = 0.0;
    int points = 0;
};

// sup over a grid of |p0 - p1| for the single-observation marginals of the
// two hypotheses, maximized over design points.
MarginalGap marginal_equality_check(Construction construction, const PriorSpec& params,
                                    int num_quadrature);

// Pair of hypotheses used by marginal_equality_check and the ROC study.
PriorSpec construction_prior(Construction construction, const PriorSpec& params);

struct RiskFloor {
    double chi2 = 0.0;
    double bound = 1.0;      // 1 - sqrt(chi2)/2, floored at 0
    double mc_risk = 1.0;    // type I + type II of the likelihood-ratio test
    double mc_stderr = 0.0;
    int replicates = 0;
};

// Supported constructions: rademacher_profile, nuisance_mean_prior.
RiskFloor risk_floor_estimate(const PriorSpec& spec, int replicates, std::uint64_t seed,
                              int threads = 1);

}  // namespace hetero
