#include "rfopt/analytic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rfopt {
namespace {

// Average sum-rate as a function of a real-valued S; also used for the
// floor/ceil candidates of x, which may fall outside the ChainCount range.
double avg_sum_rate_at(const SystemConfig& cfg, double s) {
  const double k = cfg.n_users;
  const double budget = std::max(0.0, cfg.p_max - s * cfg.p_c);
  return k * std::log2(1.0 + s * budget / (k * (budget + k)));
}

}  // namespace

double approx_sinr_equal(const SystemConfig& cfg, ChainCount s) {
  const double k = cfg.n_users;
  const double p_out = transmit_budget(cfg, s);
  return (p_out / k) * s.value() / (p_out + k);
}

double avg_sum_rate_equal(const SystemConfig& cfg, ChainCount s) {
  return avg_sum_rate_at(cfg, s.value());
}

double continuous_optimum_x(const SystemConfig& cfg) {
  const double k = cfg.n_users;
  return (cfg.p_max + k - std::sqrt(k * (cfg.p_max + k))) / cfg.p_c;
}

EqualPowerSolution optimal_chains_equal(const SystemConfig& cfg) {
  require_valid(cfg);
  const double x = continuous_optimum_x(cfg);
  const int lo = cfg.n_users;
  const int hi = max_chain_count(cfg);

  const int fl = static_cast<int>(std::floor(x));
  const int ce = static_cast<int>(std::ceil(x));
  int pick = ce;
  if (avg_sum_rate_at(cfg, fl) > avg_sum_rate_at(cfg, ce) ||
      fl == max_supported_chains(cfg)) {
    pick = fl;
  }
  // The rate is unimodal in S, so clamping the unconstrained pick keeps it
  // the argmax over the admissible range.
  pick = std::clamp(pick, lo, hi);

#ifndef NDEBUG
  for (int s = lo; s <= hi; ++s) {
    assert(avg_sum_rate_at(cfg, s) <=
           avg_sum_rate_at(cfg, pick) * (1.0 + 1e-12));
  }
#endif

  const ChainCount s_star(cfg, pick);
  return EqualPowerSolution{
      .s_star = s_star,
      .x_continuous = x,
      .r_bar = avg_sum_rate_equal(cfg, s_star),
      .per_user_power = transmit_budget(cfg, s_star) / cfg.n_users,
  };
}

double approx_sinr_unequal(double p_k, double beta_k_sq, ChainCount s,
                           const SystemConfig& cfg) {
  const double sv = s.value();
  return p_k * beta_k_sq /
         (sv * (cfg.p_max - sv * cfg.p_c - p_k + cfg.n_users));
}

}  // namespace rfopt
