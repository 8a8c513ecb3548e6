#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rfopt {

/// Absolute slack allowed on the circuit power constraint p_out + S*p_c <= p_max.
inline constexpr double kBudgetTolerance = 1e-9;

enum class ErrorCode {
  kInfeasibleBudget,
  kBadDimensions,
  kInvalidChainCount,
  kBudgetViolation,
  kDimensionMismatch,
  kNegativeSinr,
  kBracketFailure,
  kTrialFailure,
  kParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Static scenario parameters. All powers are normalized by the noise power.
struct SystemConfig {
  int n_antennas = 256;
  int n_users = 10;
  double p_max = 10.0;
  double p_c = 0.05;
};

struct Validation {
  std::optional<ErrorCode> error;
  std::string message;
  std::vector<std::string> warnings;

  bool ok() const { return !error.has_value(); }
};

Validation validate_config(const SystemConfig& cfg);

/// Throws rfopt::Error if validate_config fails.
void require_valid(const SystemConfig& cfg);

/// Largest number of RF chains whose circuit power fits in p_max.
int max_supported_chains(const SystemConfig& cfg);

/// Upper bound on S: min(N, max_supported_chains).
int max_chain_count(const SystemConfig& cfg);

/// Number of activated RF chains, K <= S <= min(N, floor(p_max/p_c)).
class ChainCount {
 public:
  ChainCount(const SystemConfig& cfg, int s);

  int value() const noexcept { return s_; }

  friend bool operator==(ChainCount, ChainCount) = default;

 private:
  int s_;
};

/// Maximum total transmit power with s chains active: p_max - s*p_c.
double transmit_budget(const SystemConfig& cfg, ChainCount s);

/// Per-user transmit powers together with the chain count that produced them.
class PowerAllocation {
 public:
  /// Throws kBudgetViolation if any power is negative or the circuit power
  /// constraint is exceeded by more than kBudgetTolerance, and
  /// kDimensionMismatch if the vector length differs from n_users.
  PowerAllocation(const SystemConfig& cfg, ChainCount chains,
                  std::vector<double> per_user);

  ChainCount chain_count() const noexcept { return chains_; }
  const std::vector<double>& per_user() const noexcept { return per_user_; }
  double p_out() const noexcept { return p_out_; }

 private:
  ChainCount chains_;
  std::vector<double> per_user_;
  double p_out_;
};

/// p_k = budget / K for every user.
PowerAllocation equal_allocation(const SystemConfig& cfg, ChainCount chains);

}  // namespace rfopt
