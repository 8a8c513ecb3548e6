// Experiment runner for RF-chain count and power allocation in downlink
// massive MIMO with conjugate beamforming.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rfopt/channel.hpp"
#include "rfopt/config_io.hpp"
#include "rfopt/experiments.hpp"
#include "rfopt/montecarlo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string help_footer() {
  using rfopt::Experiment;
  std::ostringstream os;
  os << "Experiments and CSV columns:\n";
  for (Experiment e : {Experiment::kFig1, Experiment::kFig2, Experiment::kFig3,
                       Experiment::kFig4, Experiment::kSolve,
                       Experiment::kSStar}) {
    os << "  " << rfopt::to_string(e) << ":";
    for (const auto& c : rfopt::experiment_columns(e)) os << ' ' << c;
    os << '\n';
  }
  os << "\nGrids: fig1/fig3 sweep S over [K, min(N, floor(p_max/p_c))] step 2;\n"
        "fig2 sweeps p_max over [1, 20] step 1; fig4 sweeps K over\n"
        "[2, min(100, S)] step 2 at S = --chains (default 64).\n"
        "\nConfig file: one 'key = value' per line, keys n_antennas, n_users,\n"
        "p_max, p_c; '#' starts a comment. Flags override the file.\n"
        "\n--dump-channel (solve only) writes the K x N realization as text:\n"
        "one row per user, entries 're+imj' with 17 significant digits,\n"
        "separated by single spaces.\n"
        "\nExit codes: 0 success, 1 solver/trial failure, 2 usage or\n"
        "configuration error. MIMO_RFOPT_SEED supplies --seed when unset.\n";
  return os.str();
}

bool is_usage_error(rfopt::ErrorCode code) {
  using rfopt::ErrorCode;
  return code == ErrorCode::kInfeasibleBudget ||
         code == ErrorCode::kBadDimensions ||
         code == ErrorCode::kInvalidChainCount ||
         code == ErrorCode::kParseError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal RF-chain count and power allocation for downlink "
               "massive MIMO"};
  app.footer(help_footer());

  std::string experiment_name;
  std::optional<std::string> config_path;
  std::optional<int> n_antennas, n_users, chains;
  std::optional<double> p_max, p_c;
  int trials = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<std::string> out_path, dump_path;
  bool json = false;
  bool freeze = false;
  std::string mode_name = "exhaustive";

  app.add_option("experiment,--experiment", experiment_name,
                 "fig1 | fig2 | fig3 | fig4 | solve | s-star")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "solve", "s-star"}));
  app.add_option("--config", config_path, "Key-value configuration file");
  app.add_option("--n-antennas", n_antennas, "Number of BS antennas N (256)");
  app.add_option("--n-users", n_users, "Number of users K (10)");
  app.add_option("--p-max", p_max, "Total power budget, noise-normalized (10)");
  app.add_option("--p-c", p_c, "Circuit power per RF chain (0.05)");
  app.add_option("--trials", trials, "Monte Carlo trials per grid point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Master seed")
      ->envname("MIMO_RFOPT_SEED")
      ->capture_default_str();
  app.add_option("--workers", workers, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Output file (stdout when omitted)");
  app.add_flag("--json", json, "Write JSON instead of CSV");
  app.add_option("--mode", mode_name,
                 "Joint search over S: exhaustive takes the argmax, "
                 "early-stop stops at the first drop")
      ->capture_default_str()
      ->check(CLI::IsMember({"early-stop", "exhaustive"}));
  app.add_flag("--freeze-antennas", freeze,
               "Use one antenna permutation for all trials");
  app.add_option("--chains", chains, "Active RF chains S for fig4 (64)");
  app.add_option("--dump-channel", dump_path,
                 "solve: write the channel realization to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  rfopt::ExperimentSpec spec;
  spec.experiment = *rfopt::parse_experiment(experiment_name);
  spec.n_trials = trials;
  spec.master_seed = seed;
  spec.workers = workers;
  spec.mode = mode_name == "exhaustive" ? rfopt::SearchMode::kExhaustive
                                        : rfopt::SearchMode::kEarlyStop;
  spec.freeze_antennas = freeze;
  if (chains) spec.fig4_chains = *chains;

  try {
    if (config_path) {
      spec.config = rfopt::load_config_file(*config_path, spec.config);
    }
    if (n_antennas) spec.config.n_antennas = *n_antennas;
    if (n_users) spec.config.n_users = *n_users;
    if (p_max) spec.config.p_max = *p_max;
    if (p_c) spec.config.p_c = *p_c;

    const rfopt::Validation v = rfopt::validate_config(spec.config);
    if (!v.ok()) {
      std::cerr << "error: " << v.message << '\n';
      return kExitUsage;
    }
    for (const auto& w : v.warnings) std::cerr << "warning: " << w << '\n';
    if (spec.n_trials < 2 && spec.experiment != rfopt::Experiment::kSolve &&
        spec.experiment != rfopt::Experiment::kSStar) {
      std::cerr << "error: --trials must be at least 2\n";
      return kExitUsage;
    }

    if (dump_path) {
      if (spec.experiment != rfopt::Experiment::kSolve) {
        std::cerr << "error: --dump-channel only applies to solve\n";
        return kExitUsage;
      }
      std::ofstream dump(*dump_path);
      if (!dump) {
        std::cerr << "error: cannot write " << *dump_path << '\n';
        return kExitUsage;
      }
      rfopt::write_channel_text(
          dump, rfopt::generate_channel(spec.config, spec.master_seed, 0));
    }

    const rfopt::ExperimentOutput result = rfopt::run_experiment(spec);
    for (const auto& line : result.summary) std::cout << line << '\n';

    const bool summary_only = !result.summary.empty() && !out_path;
    if (!summary_only) {
      std::ofstream file;
      if (out_path) {
        file.open(*out_path, std::ios::binary);
        if (!file) {
          std::cerr << "error: cannot write " << *out_path << '\n';
          return kExitUsage;
        }
      }
      std::ostream& os = out_path ? static_cast<std::ostream&>(file) : std::cout;
      if (json) {
        rfopt::write_json(os, result.table);
      } else {
        rfopt::write_csv(os, result.table);
      }
    }
  } catch (const rfopt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
