#pragma once

#include <span>
#include <vector>

#include "rfopt/channel.hpp"
#include "rfopt/core_types.hpp"

namespace rfopt {

struct RateReport {
  std::vector<double> per_user_sinr;
  std::vector<double> per_user_rate;  // bits/s/Hz
  double sum_rate = 0.0;
};

/// SINR of every user under conjugate beamforming W = H^H / ||H^H||_F:
///   sinr_k = (p_k/eta) beta_k^2 / (sum_{i != k} (p_i/eta) |h_k h_i^H|^2 + 1)
/// Throws kDimensionMismatch when `powers` and `g` disagree on K.
std::vector<double> exact_sinr(const GramStats& g, std::span<const double> powers);
std::vector<double> exact_sinr(const GramStats& g, const PowerAllocation& p);

/// log2(1 + sinr) per user and their sum. Throws kNegativeSinr.
RateReport rate_report(std::span<const double> sinr);

/// Convenience: rate_report(exact_sinr(g, p)).sum_rate.
double exact_sum_rate(const GramStats& g, std::span<const double> powers);

}  // namespace rfopt
