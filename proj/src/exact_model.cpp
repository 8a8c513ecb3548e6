#include "rfopt/exact_model.hpp"

#include <cmath>

namespace rfopt {

std::vector<double> exact_sinr(const GramStats& g,
                               std::span<const double> powers) {
  const int k_users = g.n_users();
  if (powers.size() != static_cast<std::size_t>(k_users) ||
      g.cross_sq.rows() != k_users || g.cross_sq.cols() != k_users) {
    throw Error(ErrorCode::kDimensionMismatch,
                "power vector and Gram statistics disagree on K");
  }
  std::vector<double> sinr(k_users, 0.0);
  if (!(g.eta > 0.0)) return sinr;

  for (int k = 0; k < k_users; ++k) {
    double interference = 0.0;
    for (int i = 0; i < k_users; ++i) {
      if (i != k) interference += powers[i] / g.eta * g.cross_sq(k, i);
    }
    sinr[k] = powers[k] / g.eta * g.beta_sq[k] / (interference + 1.0);
  }
  return sinr;
}

std::vector<double> exact_sinr(const GramStats& g, const PowerAllocation& p) {
  return exact_sinr(g, std::span<const double>(p.per_user()));
}

RateReport rate_report(std::span<const double> sinr) {
  RateReport r;
  r.per_user_sinr.assign(sinr.begin(), sinr.end());
  r.per_user_rate.reserve(sinr.size());
  for (double s : sinr) {
    if (!(s >= 0.0)) {
      throw Error(ErrorCode::kNegativeSinr, "SINR must be non-negative");
    }
    const double rate = std::log2(1.0 + s);
    r.per_user_rate.push_back(rate);
    r.sum_rate += rate;
  }
  return r;
}

double exact_sum_rate(const GramStats& g, std::span<const double> powers) {
  return rate_report(exact_sinr(g, powers)).sum_rate;
}

}  // namespace rfopt
