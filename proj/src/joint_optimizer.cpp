#include "rfopt/joint_optimizer.hpp"

#include <optional>

#include "rfopt/exact_model.hpp"

namespace rfopt {

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::kEarlyStop ? "early-stop" : "exhaustive";
}

JointResult optimize(const ChannelMatrix& full, const SystemConfig& cfg,
                     SearchMode mode, std::span<const int> column_order) {
  require_valid(cfg);
  const int k_users = cfg.n_users;
  if (full.n_users() != k_users || full.n_selected() != cfg.n_antennas) {
    throw Error(ErrorCode::kDimensionMismatch,
                "channel must be n_users x n_antennas");
  }
  const int s_lo = k_users;
  const int s_hi = max_chain_count(cfg);
  if (column_order.size() < static_cast<std::size_t>(s_hi)) {
    throw Error(ErrorCode::kDimensionMismatch, "column order too short");
  }

  const Eigen::MatrixXcd& h = full.gains();
  std::vector<double> norm_sq(k_users, 0.0);
  auto add_column = [&](int col) {
    for (int k = 0; k < k_users; ++k) norm_sq[k] += std::norm(h(k, col));
  };
  for (int j = 0; j < s_lo - 1; ++j) add_column(column_order[j]);

  std::vector<std::pair<int, double>> trajectory;
  std::optional<KktSolution> best;
  int best_s = s_lo;
  double best_rate = 0.0;

  for (int s = s_lo; s <= s_hi; ++s) {
    add_column(column_order[s - 1]);
    std::vector<double> beta_sq(k_users);
    for (int k = 0; k < k_users; ++k) beta_sq[k] = norm_sq[k] * norm_sq[k];

    const KktInputs in(cfg, ChainCount(cfg, s), std::move(beta_sq));
    KktSolution sol = solve(in);
    const double rate =
        surrogate_sum_rate(in, sol.allocation.per_user());
    trajectory.emplace_back(s, rate);

    // In early-stop mode every non-decreasing step is taken, so best_rate
    // is R_{S-1} here.
    const bool early = mode == SearchMode::kEarlyStop;
    if (early && best && rate < best_rate) break;
    if (!best || early || rate > best_rate) {
      best = std::move(sol);
      best_rate = rate;
      best_s = s;
    }
  }

  const ChannelMatrix selected =
      select_columns(full, column_order.subspan(0, best_s));
  const GramStats g = gram_stats(selected);
  const double exact = exact_sum_rate(g, best->allocation.per_user());

  return JointResult{
      .s_opt = ChainCount(cfg, best_s),
      .allocation = std::move(best->allocation),
      .sum_rate_approx = best_rate,
      .sum_rate_exact = exact,
      .trajectory = std::move(trajectory),
  };
}

JointResult optimize(const ChannelMatrix& full, const SystemConfig& cfg,
                     SearchMode mode, std::uint64_t selection_seed) {
  const auto order = antenna_permutation(full.n_selected(), selection_seed);
  return optimize(full, cfg, mode, std::span<const int>(order));
}

}  // namespace rfopt
