#pragma once

#include <random>
#include <vector>

#include "oracles.hpp"
#include "rfopt/channel.hpp"
#include "rfopt/kkt_solver.hpp"

namespace rfopt::testing {

/// A fixed-S allocation problem with beta^2 taken from a CN(0, 1) channel
/// realization over S antennas, and p_max chosen so the budget is exact.
struct Instance {
  SystemConfig cfg;
  ChainCount s;
  KktInputs inputs;
};

inline Instance make_instance(int k_users, int s, double budget,
                              std::uint64_t seed) {
  const double p_c = 0.05;
  SystemConfig cfg{std::max(256, s), k_users, budget + s * p_c, p_c};
  const ChainCount chains(cfg, s);
  const GramStats g = gram_stats(
      generate_channel(SystemConfig{s, k_users, 1.0, 1e-3}, seed, 0));
  return Instance{cfg, chains, KktInputs(cfg, chains, g.beta_sq)};
}

inline Instance random_instance(std::mt19937_64& rng, int max_users = 8) {
  std::uniform_int_distribution<int> k_dist(1, max_users);
  const int k = k_dist(rng);
  std::uniform_int_distribution<int> s_dist(std::max(k, 16), 200);
  std::uniform_real_distribution<double> b_dist(0.1, 20.0);
  const int s = s_dist(rng);
  return make_instance(k, s, b_dist(rng), rng());
}

inline oracle::Surrogate surrogate_of(const KktInputs& in) {
  return oracle::Surrogate{in.beta_sq(), in.s(), in.budget(), in.a()};
}

}  // namespace rfopt::testing
