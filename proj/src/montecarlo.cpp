#include "rfopt/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rfopt/analytic.hpp"
#include "rfopt/channel.hpp"
#include "rfopt/exact_model.hpp"
#include "rfopt/kkt_solver.hpp"

namespace rfopt {
namespace {

constexpr std::uint64_t kFrozenSelectionIndex =
    std::numeric_limits<std::uint64_t>::max();

struct TrialSlot {
  std::optional<TrialOutcome> outcome;
  std::string error;
};

int resolve_chains(const SystemConfig& cfg, const Strategy& strategy) {
  if (strategy.chains) return *strategy.chains;
  if (strategy.kind == Strategy::Kind::kEqualPower) {
    return optimal_chains_equal(cfg).s_star.value();
  }
  throw Error(ErrorCode::kInvalidChainCount,
              "fixed-S strategy needs a chain count");
}

int as_integer(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9) {
    throw Error(ErrorCode::kBadDimensions,
                std::string(what) + " grid values must be integers");
  }
  return static_cast<int>(r);
}

}  // namespace

std::string_view to_string(Strategy::Kind kind) {
  switch (kind) {
    case Strategy::Kind::kEqualPower: return "equal-power";
    case Strategy::Kind::kKkt: return "kkt";
    case Strategy::Kind::kJoint: return "joint";
  }
  return "unknown";
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / (s.n - 1));
  s.half_width_95 = 1.96 * sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

std::uint64_t selection_seed_for(const TrialOptions& opts,
                                 std::uint64_t trial_index) {
  return derive_seed(opts.master_seed,
                     opts.freeze_antennas ? kFrozenSelectionIndex : trial_index,
                     kSelectionStream);
}

TrialOutcome run_single_trial(const SystemConfig& cfg, const Strategy& strategy,
                              const TrialOptions& opts,
                              std::uint64_t trial_index) {
  const ChannelMatrix full = generate_channel(cfg, opts.master_seed, trial_index);
  const auto order =
      antenna_permutation(cfg.n_antennas, selection_seed_for(opts, trial_index));

  if (strategy.kind == Strategy::Kind::kJoint) {
    const JointResult r =
        optimize(full, cfg, strategy.mode, std::span<const int>(order));
    return {r.sum_rate_exact, r.sum_rate_approx, r.s_opt.value()};
  }

  const ChainCount s(cfg, resolve_chains(cfg, strategy));
  const ChannelMatrix sub =
      select_columns(full, std::span<const int>(order).subspan(0, s.value()));
  const GramStats g = gram_stats(sub);
  const KktInputs in(cfg, s, g.beta_sq);

  std::vector<double> powers;
  if (strategy.kind == Strategy::Kind::kEqualPower) {
    powers = equal_allocation(cfg, s).per_user();
  } else {
    powers = solve(in).allocation.per_user();
  }
  return {exact_sum_rate(g, powers), surrogate_sum_rate(in, powers),
          s.value()};
}

std::vector<TrialOutcome> collect_trials(const SystemConfig& cfg,
                                         const Strategy& strategy,
                                         const TrialOptions& opts) {
  require_valid(cfg);
  if (opts.n_trials < 1) {
    throw Error(ErrorCode::kTrialFailure, "n_trials must be positive");
  }
  // Resolve s_star once, outside the workers.
  Strategy resolved = strategy;
  if (resolved.kind != Strategy::Kind::kJoint) {
    resolved.chains = resolve_chains(cfg, strategy);
    (void)ChainCount(cfg, *resolved.chains);
  }

  std::vector<TrialSlot> slots(opts.n_trials);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < opts.n_trials; i = next.fetch_add(1)) {
      try {
        slots[i].outcome = run_single_trial(cfg, resolved, opts, i);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };

  const int n_workers = std::max(1, std::min(opts.workers, opts.n_trials));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  std::vector<TrialOutcome> out;
  out.reserve(opts.n_trials);
  for (int i = 0; i < opts.n_trials; ++i) {
    if (!slots[i].outcome) {
      throw Error(ErrorCode::kTrialFailure,
                  "trial " + std::to_string(i) + " (seed " +
                      std::to_string(opts.master_seed) + "): " + slots[i].error);
    }
    out.push_back(*slots[i].outcome);
  }
  return out;
}

SweepResult run_trials(const SystemConfig& cfg, const Strategy& strategy,
                       const TrialOptions& opts) {
  if (opts.n_trials < 2) {
    throw Error(ErrorCode::kTrialFailure, "n_trials must be at least 2");
  }
  const auto outcomes = collect_trials(cfg, strategy, opts);
  std::vector<double> rates;
  rates.reserve(outcomes.size());
  for (const auto& o : outcomes) rates.push_back(o.exact_sum_rate);
  const Summary sum = summarize(rates);

  SweepResult r;
  r.n_trials = sum.n;
  r.mc_mean = sum.mean;
  r.mc_half_width_95 = sum.half_width_95;
  if (strategy.kind == Strategy::Kind::kJoint) {
    r.x_value = std::numeric_limits<double>::quiet_NaN();
  } else {
    const ChainCount s(cfg, resolve_chains(cfg, strategy));
    r.x_value = s.value();
    if (strategy.kind == Strategy::Kind::kEqualPower) {
      r.analytic = avg_sum_rate_equal(cfg, s);
    }
  }
  return r;
}

std::vector<SweepResult> sweep(const SystemConfig& base, SweepVariable variable,
                               std::span<const double> grid,
                               const Strategy& strategy,
                               const TrialOptions& opts) {
  std::vector<SweepResult> out;
  out.reserve(grid.size());
  for (double x : grid) {
    SweepResult r;
    r.x_value = x;
    try {
      SystemConfig cfg = base;
      Strategy st = strategy;
      switch (variable) {
        case SweepVariable::kChains:
          if (st.kind == Strategy::Kind::kJoint) {
            throw Error(ErrorCode::kInvalidChainCount,
                        "the joint strategy chooses S itself");
          }
          st.chains = as_integer(x, "S");
          break;
        case SweepVariable::kPMax:
          cfg.p_max = x;
          break;
        case SweepVariable::kUsers:
          cfg.n_users = as_integer(x, "K");
          break;
      }
      r = run_trials(cfg, st, opts);
      r.x_value = x;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.mc_mean = std::numeric_limits<double>::quiet_NaN();
      r.mc_half_width_95 = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rfopt
