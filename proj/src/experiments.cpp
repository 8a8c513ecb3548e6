#include "rfopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rfopt/analytic.hpp"
#include "rfopt/channel.hpp"
#include "rfopt/exact_model.hpp"
#include "rfopt/montecarlo.hpp"

namespace rfopt {
namespace {

TrialOptions trial_options(const ExperimentSpec& spec) {
  return TrialOptions{
      .n_trials = spec.n_trials,
      .master_seed = spec.master_seed,
      .workers = spec.workers,
      .freeze_antennas = spec.freeze_antennas,
  };
}

std::vector<double> int_grid(int lo, int hi, int step) {
  std::vector<double> g;
  for (int v = lo; v <= hi; v += step) g.push_back(v);
  return g;
}

void require_point(const SweepResult& r) {
  if (r.error) {
    std::ostringstream os;
    os << "grid point " << format_number(r.x_value) << ": " << *r.error;
    throw Error(ErrorCode::kTrialFailure, os.str());
  }
}

Table fig1(const ExperimentSpec& spec) {
  const SystemConfig& cfg = spec.config;
  const auto grid = int_grid(cfg.n_users, max_chain_count(cfg), 2);
  const auto pts = sweep(cfg, SweepVariable::kChains, grid,
                         Strategy::equal_power(), trial_options(spec));
  Table t{experiment_columns(Experiment::kFig1), {}};
  for (const auto& r : pts) {
    require_point(r);
    t.rows.push_back({r.x_value, *r.analytic, r.mc_mean, r.mc_half_width_95});
  }
  return t;
}

Table fig2(const ExperimentSpec& spec) {
  Table t{experiment_columns(Experiment::kFig2), {}};
  for (int p_max = 1; p_max <= 20; ++p_max) {
    SystemConfig cfg = spec.config;
    cfg.p_max = p_max;
    try {
      const EqualPowerSolution eq = optimal_chains_equal(cfg);
      const auto outcomes =
          collect_trials(cfg, Strategy::joint(spec.mode), trial_options(spec));
      std::vector<double> chains, rates;
      for (const auto& o : outcomes) {
        chains.push_back(o.chains);
        rates.push_back(o.exact_sum_rate);
      }
      const Summary cs = summarize(chains);
      const Summary rs = summarize(rates);
      t.rows.push_back({static_cast<double>(p_max), eq.x_continuous,
                        static_cast<double>(eq.s_star.value()), eq.r_bar,
                        cs.mean, cs.half_width_95, rs.mean, rs.half_width_95});
    } catch (const Error& e) {
      throw Error(e.code(), "p_max " + std::to_string(p_max) + ": " + e.what());
    }
  }
  return t;
}

Table fig3(const ExperimentSpec& spec) {
  const SystemConfig& cfg = spec.config;
  const TrialOptions opts = trial_options(spec);
  const auto grid = int_grid(cfg.n_users, max_chain_count(cfg), 2);
  // The S grid overrides the strategy's chain count.
  const auto kkt = sweep(cfg, SweepVariable::kChains, grid,
                         Strategy::kkt(cfg.n_users), opts);
  const auto eq = sweep(cfg, SweepVariable::kChains, grid,
                        Strategy::equal_power(), opts);
  Table t{experiment_columns(Experiment::kFig3), {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_point(kkt[i]);
    require_point(eq[i]);
    t.rows.push_back({grid[i], kkt[i].mc_mean, kkt[i].mc_half_width_95,
                      eq[i].mc_mean, eq[i].mc_half_width_95});
  }
  return t;
}

Table fig4(const ExperimentSpec& spec) {
  const SystemConfig& cfg = spec.config;
  const int s = spec.fig4_chains;
  const TrialOptions opts = trial_options(spec);
  // S >= K, so the K grid stops at S.
  const auto grid = int_grid(2, std::min(100, s), 2);
  const auto eq = sweep(cfg, SweepVariable::kUsers, grid,
                        Strategy::equal_power(s), opts);
  const auto kkt =
      sweep(cfg, SweepVariable::kUsers, grid, Strategy::kkt(s), opts);
  Table t{experiment_columns(Experiment::kFig4), {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_point(eq[i]);
    require_point(kkt[i]);
    t.rows.push_back({grid[i], *eq[i].analytic, eq[i].mc_mean,
                      eq[i].mc_half_width_95, kkt[i].mc_mean,
                      kkt[i].mc_half_width_95});
  }
  return t;
}

ExperimentOutput solve_once(const ExperimentSpec& spec) {
  const SystemConfig& cfg = spec.config;
  require_valid(cfg);
  const TrialOptions opts = trial_options(spec);
  const ChannelMatrix full = generate_channel(cfg, spec.master_seed, 0);
  const auto order = antenna_permutation(cfg.n_antennas, selection_seed_for(opts, 0));
  const JointResult r = optimize(full, cfg, spec.mode, std::span<const int>(order));

  const int s = r.s_opt.value();
  const GramStats g = gram_stats(
      select_columns(full, std::span<const int>(order).subspan(0, s)));
  const auto& p = r.allocation.per_user();
  const RateReport rep = rate_report(exact_sinr(g, r.allocation));

  ExperimentOutput out;
  out.table.columns = experiment_columns(Experiment::kSolve);
  for (int k = 0; k < cfg.n_users; ++k) {
    out.table.rows.push_back({static_cast<double>(k), p[k], g.beta_sq[k],
                              rep.per_user_sinr[k], rep.per_user_rate[k]});
  }
  const double budget = transmit_budget(cfg, r.s_opt);
  out.summary = {
      "mode: " + std::string(to_string(spec.mode)),
      "s_opt: " + std::to_string(s),
      "transmit_budget: " + format_number(budget),
      "p_out: " + format_number(r.allocation.p_out()),
      "budget_gap: " + format_number(r.allocation.p_out() - budget),
      "sum_rate_approx: " + format_number(r.sum_rate_approx),
      "sum_rate_exact: " + format_number(r.sum_rate_exact),
      "evaluated_s: " + std::to_string(r.trajectory.size()),
  };
  std::string powers = "powers:";
  for (double v : p) powers += " " + format_number(v);
  out.summary.push_back(powers);
  return out;
}

ExperimentOutput s_star(const ExperimentSpec& spec) {
  const EqualPowerSolution eq = optimal_chains_equal(spec.config);
  ExperimentOutput out;
  out.table.columns = experiment_columns(Experiment::kSStar);
  out.table.rows.push_back({eq.x_continuous,
                            static_cast<double>(eq.s_star.value()), eq.r_bar,
                            eq.per_user_power});
  out.summary = {
      "x: " + format_number(eq.x_continuous),
      "s_star: " + std::to_string(eq.s_star.value()),
      "r_bar: " + format_number(eq.r_bar),
      "per_user_power: " + format_number(eq.per_user_power),
  };
  return out;
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  if (name == "fig1") return Experiment::kFig1;
  if (name == "fig2") return Experiment::kFig2;
  if (name == "fig3") return Experiment::kFig3;
  if (name == "fig4") return Experiment::kFig4;
  if (name == "solve") return Experiment::kSolve;
  if (name == "s-star") return Experiment::kSStar;
  return std::nullopt;
}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kFig1: return "fig1";
    case Experiment::kFig2: return "fig2";
    case Experiment::kFig3: return "fig3";
    case Experiment::kFig4: return "fig4";
    case Experiment::kSolve: return "solve";
    case Experiment::kSStar: return "s-star";
  }
  return "unknown";
}

std::vector<std::string> experiment_columns(Experiment e) {
  switch (e) {
    case Experiment::kFig1:
      return {"S", "analytic_rate", "mc_rate", "mc_ci95"};
    case Experiment::kFig2:
      return {"p_max", "x_continuous", "s_star", "analytic_rate",
              "joint_s_opt_mean", "joint_s_opt_ci95", "joint_mc_rate",
              "joint_mc_ci95"};
    case Experiment::kFig3:
      return {"S", "kkt_mc_rate", "kkt_ci95", "equal_mc_rate", "equal_ci95"};
    case Experiment::kFig4:
      return {"K", "analytic_rate", "equal_mc_rate", "equal_ci95",
              "kkt_mc_rate", "kkt_ci95"};
    case Experiment::kSolve:
      return {"user", "power", "beta_sq", "exact_sinr", "exact_rate"};
    case Experiment::kSStar:
      return {"x_continuous", "s_star", "analytic_rate", "per_user_power"};
  }
  return {};
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  require_valid(spec.config);
  switch (spec.experiment) {
    case Experiment::kFig1: return {fig1(spec), {}};
    case Experiment::kFig2: return {fig2(spec), {}};
    case Experiment::kFig3: return {fig3(spec), {}};
    case Experiment::kFig4: return {fig4(spec), {}};
    case Experiment::kSolve: return solve_once(spec);
    case Experiment::kSStar: return s_star(spec);
  }
  throw Error(ErrorCode::kParseError, "unknown experiment");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out << ',';
    out << t.columns[c];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_number(row[c]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) {
      if (std::isfinite(row[c])) {
        obj[t.columns[c]] = row[c];
      } else {
        obj[t.columns[c]] = nullptr;
      }
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace rfopt
