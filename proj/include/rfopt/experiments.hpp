#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rfopt/core_types.hpp"
#include "rfopt/joint_optimizer.hpp"

namespace rfopt {

enum class Experiment { kFig1, kFig2, kFig3, kFig4, kSolve, kSStar };

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view to_string(Experiment e);

inline constexpr int kFig4Chains = 64;

struct ExperimentSpec {
  Experiment experiment = Experiment::kFig1;
  SystemConfig config{};  // defaults: N=256, K=10, p_max=10, p_c=0.05
  int n_trials = 1000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  SearchMode mode = SearchMode::kExhaustive;
  bool freeze_antennas = false;
  int fig4_chains = kFig4Chains;
};

/// Numeric result table; every experiment produces one.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentOutput {
  Table table;
  std::vector<std::string> summary;  // human-readable lines (solve, s-star)
};

/// Grids:
///   fig1  S in [K, min(N, floor(p_max/p_c))] step 2, equal power
///   fig2  p_max in [1, 20] step 1, closed-form s_star vs mean joint s_opt
///   fig3  S grid of fig1, KKT allocation vs equal power
///   fig4  K in [2, min(100, S)] step 2 at S = fig4_chains
/// Throws rfopt::Error on invalid configuration or any failed grid point.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// Column list of each experiment, for --help.
std::vector<std::string> experiment_columns(Experiment e);

/// RFC-4180 style CSV, comma separated, LF endings, header row, numbers
/// with 17 significant digits.
void write_csv(std::ostream& out, const Table& t);

/// JSON array with one object per row; non-finite numbers become null.
void write_json(std::ostream& out, const Table& t);

std::string format_number(double v);

}  // namespace rfopt
