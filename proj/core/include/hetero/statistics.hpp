#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetero/kernel.hpp"
#include "hetero/sim_model.hpp"

namespace hetero {

// Index convention: y has n+1 entries Y_0..Y_n, and
//   r[i]       = Y_{i+1} - Y_i,  i = 0..n-1
//   r_tilde[i] = Y_{i+2} - Y_i,  i = 0..n-2
//   s[i]       = Y_{i+3} - Y_i,  i = 0..n-3
struct DifferenceSet {
    std::vector<double> r;
    std::vector<double> r_tilde;
    std::vector<double> s;
};

DifferenceSet differences(std::span<const double> y);

enum class StatisticId {
    t_hat_kernel,
    t_hat_profile,
    t1_hat,
    t2_hat,
    s_hat,
    dette_munk,
    dette_2002,
};

std::string to_string(StatisticId id);
StatisticId statistic_id_from_string(const std::string& name);
std::vector<StatisticId> all_statistics();

struct StatisticTerm {
    std::string name;
    double value = 0.0;
};

struct StatisticReport {
    StatisticId statistic_id = StatisticId::t_hat_kernel;
    double value = 0.0;
    std::vector<StatisticTerm> terms;
    std::optional<double> proxy;
    int n = 0;
    std::optional<double> h;
    std::optional<std::uint64_t> seed;
};

// Kernel statistic over pairs |i-j| >= 2 with the modified kernel k.
StatisticReport t_hat_kernel(std::span<const double> y, const ModifiedKernel& k);
// (1/(2n^2)) sum_{|i-j|>=2} [(R_i^4 + R_j^4)/3 - 2 R_i^2 R_j^2]
StatisticReport t_hat_profile(std::span<const double> y);
// (1/n) sum_{k=0}^{n-3} [(R_{k+1}^4 + S_k^4)/3 - 2 R_{k+1}^2 S_k^2]
StatisticReport t1_hat(std::span<const double> y);
// (1/n) sum_{k=0}^{n-3} [(Rt_{k+1}^4 + Rt_k^4)/3 - 2 Rt_{k+1}^2 Rt_k^2]
StatisticReport t2_hat(std::span<const double> y);
StatisticReport s_hat(std::span<const double> y);

double dette_munk_stat(std::span<const double> y);
// Uses the raw base kernel at argument (i-j)/(n h).
double dette_2002_stat(std::span<const double> y, const BaseKernel& base, double h);

struct OracleQuantities {
    std::vector<double> W;            // V_i + V_{i+1}
    std::vector<double> delta;        // f_{i+1} - f_i
    std::vector<double> U;            // W_i + delta_i^2
    std::vector<double> W_tilde;      // V_i + V_{i+2}
    std::vector<double> delta_tilde;  // f_{i+2} - f_i
    double W_bar = 0.0;
    double delta2_bar = 0.0;
};

OracleQuantities oracle_quantities(std::span<const double> f, std::span<const double> V);

double proxy_T(std::span<const double> f, std::span<const double> V);
double proxy_T1_tilde(std::span<const double> f, std::span<const double> V);
double proxy_T2_tilde(std::span<const double> f, std::span<const double> V);
double proxy_T(const FunctionSpec& f, const FunctionSpec& V, const DesignGrid& grid);
double proxy_T1_tilde(const FunctionSpec& f, const FunctionSpec& V, const DesignGrid& grid);
double proxy_T2_tilde(const FunctionSpec& f, const FunctionSpec& V, const DesignGrid& grid);

}  // namespace hetero
