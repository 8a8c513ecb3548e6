#pragma once

#include "rfopt/core_types.hpp"

namespace rfopt {

/// Large-array approximations under equal power allocation, and the
/// resulting closed-form RF-chain count.
struct EqualPowerSolution {
  ChainCount s_star;
  double x_continuous;    // unconstrained maximizer of the average sum-rate
  double r_bar;           // predicted average sum-rate at s_star, bits/s/Hz
  double per_user_power;  // (p_max - s_star*p_c) / K
};

/// Mean-field SINR of every user with p_k = p_out/K:
///   (p_out/K) S / (p_out + K),  p_out = p_max - S p_c.
double approx_sinr_equal(const SystemConfig& cfg, ChainCount s);

/// Average sum-rate K log2(1 + S (p_max - S p_c) / (K (p_max - S p_c + K))).
double avg_sum_rate_equal(const SystemConfig& cfg, ChainCount s);

/// Continuous maximizer x = (p_max + K - sqrt(K (p_max + K))) / p_c.
/// Always strictly below p_max / p_c.
double continuous_optimum_x(const SystemConfig& cfg);

/// Integer optimum: floor(x) when its rate is strictly larger or floor(x)
/// already exhausts the budget, otherwise ceil(x); then clamped to
/// [K, min(N, floor(p_max/p_c))].
EqualPowerSolution optimal_chains_equal(const SystemConfig& cfg);

/// Unequal-power SINR surrogate p_k beta_k^2 / (S (p_max - S p_c - p_k + K)).
double approx_sinr_unequal(double p_k, double beta_k_sq, ChainCount s,
                           const SystemConfig& cfg);

}  // namespace rfopt
