#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfopt/core_types.hpp"
#include "rfopt/joint_optimizer.hpp"

namespace rfopt {

/// How each trial allocates power.
struct Strategy {
  enum class Kind { kEqualPower, kKkt, kJoint };

  Kind kind = Kind::kEqualPower;
  /// Fixed S for kEqualPower / kKkt. Unset for kEqualPower means the
  /// closed-form s_star; kKkt requires it.
  std::optional<int> chains;
  SearchMode mode = SearchMode::kEarlyStop;  // kJoint only

  static Strategy equal_power(std::optional<int> s = std::nullopt) {
    return {Kind::kEqualPower, s, SearchMode::kEarlyStop};
  }
  static Strategy kkt(int s) { return {Kind::kKkt, s, SearchMode::kEarlyStop}; }
  static Strategy joint(SearchMode m = SearchMode::kExhaustive) {
    return {Kind::kJoint, std::nullopt, m};
  }
};

std::string_view to_string(Strategy::Kind kind);

struct TrialOptions {
  int n_trials = 1000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  /// Use one antenna permutation for every trial instead of one per trial.
  bool freeze_antennas = false;
};

struct TrialOutcome {
  double exact_sum_rate = 0.0;
  double approx_sum_rate = 0.0;  // surrogate objective for the same powers
  int chains = 0;
};

struct Summary {
  double mean = 0.0;
  double half_width_95 = 0.0;  // 1.96 * sample stddev / sqrt(n)
  int n = 0;
};

Summary summarize(std::span<const double> values);

struct SweepResult {
  double x_value = 0.0;
  std::optional<double> analytic;
  double mc_mean = 0.0;
  double mc_half_width_95 = 0.0;
  int n_trials = 0;
  std::optional<std::string> error;  // set when this point failed
};

/// Antenna permutation seed for a trial, honoring freeze_antennas.
std::uint64_t selection_seed_for(const TrialOptions& opts,
                                 std::uint64_t trial_index);

/// One realization: generates the channel, applies the strategy and
/// evaluates the exact sum-rate.
TrialOutcome run_single_trial(const SystemConfig& cfg, const Strategy& strategy,
                              const TrialOptions& opts,
                              std::uint64_t trial_index);

/// Outcomes in trial-index order, computed on opts.workers threads. The
/// result does not depend on the worker count. Throws kTrialFailure naming
/// the lowest failing trial index.
std::vector<TrialOutcome> collect_trials(const SystemConfig& cfg,
                                         const Strategy& strategy,
                                         const TrialOptions& opts);

/// Mean exact sum-rate with its 95% half-width. x_value is the fixed S of
/// the strategy (s_star for equal power without S), NaN for kJoint.
/// Requires n_trials >= 2.
SweepResult run_trials(const SystemConfig& cfg, const Strategy& strategy,
                       const TrialOptions& opts);

enum class SweepVariable { kChains, kPMax, kUsers };

/// One SweepResult per grid value; `analytic` holds the average sum-rate
/// approximation for equal-power strategies. Per-point failures are recorded
/// in SweepResult::error and the sweep continues.
std::vector<SweepResult> sweep(const SystemConfig& base, SweepVariable variable,
                               std::span<const double> grid,
                               const Strategy& strategy,
                               const TrialOptions& opts);

}  // namespace rfopt
