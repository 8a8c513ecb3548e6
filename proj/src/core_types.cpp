#include "rfopt/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rfopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::kBadDimensions: return "BadDimensions";
    case ErrorCode::kInvalidChainCount: return "InvalidChainCount";
    case ErrorCode::kBudgetViolation: return "BudgetViolation";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNegativeSinr: return "NegativeSinr";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kTrialFailure: return "TrialFailure";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Validation validate_config(const SystemConfig& cfg) {
  Validation v;
  auto fail = [&v](ErrorCode code, std::string msg) {
    v.error = code;
    v.message = std::string(to_string(code)) + ": " + std::move(msg);
    return v;
  };

  if (cfg.n_antennas <= 0 || cfg.n_users <= 0) {
    return fail(ErrorCode::kBadDimensions,
                "n_antennas and n_users must be positive");
  }
  if (!(cfg.p_max > 0.0) || !(cfg.p_c > 0.0) || !std::isfinite(cfg.p_max) ||
      !std::isfinite(cfg.p_c)) {
    return fail(ErrorCode::kBadDimensions, "p_max and p_c must be positive");
  }
  if (cfg.n_users > cfg.n_antennas) {
    std::ostringstream os;
    os << "n_users (" << cfg.n_users << ") exceeds n_antennas ("
       << cfg.n_antennas << ")";
    return fail(ErrorCode::kBadDimensions, os.str());
  }
  // p_max must leave strictly positive transmit power once K chains are on.
  if (!(cfg.p_max > cfg.n_users * cfg.p_c)) {
    std::ostringstream os;
    os << "p_max (" << cfg.p_max << ") must exceed n_users * p_c ("
       << cfg.n_users * cfg.p_c << ")";
    return fail(ErrorCode::kInfeasibleBudget, os.str());
  }
  if (4 * cfg.n_users > cfg.n_antennas) {
    v.warnings.push_back(
        "n_users > n_antennas / 4: large-array approximations may be loose");
  }
  return v;
}

void require_valid(const SystemConfig& cfg) {
  const Validation v = validate_config(cfg);
  if (!v.ok()) throw Error(*v.error, v.message);
}

int max_supported_chains(const SystemConfig& cfg) {
  const double ratio = cfg.p_max / cfg.p_c;
  if (ratio >= static_cast<double>(std::numeric_limits<int>::max())) {
    return std::numeric_limits<int>::max();
  }
  // 10/0.05 and friends land a few ulps either side of the integer.
  long s = static_cast<long>(std::floor(ratio));
  const double slack = cfg.p_max * 1e-12;
  while ((s + 1) * cfg.p_c <= cfg.p_max + slack) ++s;
  while (s > 0 && s * cfg.p_c > cfg.p_max + slack) --s;
  return static_cast<int>(s);
}

int max_chain_count(const SystemConfig& cfg) {
  return std::min(cfg.n_antennas, max_supported_chains(cfg));
}

ChainCount::ChainCount(const SystemConfig& cfg, int s) : s_(s) {
  const int hi = max_chain_count(cfg);
  if (s < cfg.n_users || s > hi) {
    std::ostringstream os;
    os << "chain count " << s << " outside [" << cfg.n_users << ", " << hi
       << "]";
    throw Error(ErrorCode::kInvalidChainCount, os.str());
  }
}

double transmit_budget(const SystemConfig& cfg, ChainCount s) {
  return std::max(0.0, cfg.p_max - s.value() * cfg.p_c);
}

PowerAllocation::PowerAllocation(const SystemConfig& cfg, ChainCount chains,
                                 std::vector<double> per_user)
    : chains_(chains), per_user_(std::move(per_user)), p_out_(0.0) {
  if (per_user_.size() != static_cast<std::size_t>(cfg.n_users)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "power vector length does not match n_users");
  }
  for (double p : per_user_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::kBudgetViolation,
                  "per-user power must be finite and non-negative");
    }
  }
  p_out_ = std::accumulate(per_user_.begin(), per_user_.end(), 0.0);
  if (p_out_ + chains.value() * cfg.p_c > cfg.p_max + kBudgetTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "p_out + S*p_c = " << p_out_ + chains.value() * cfg.p_c
       << " exceeds p_max = " << cfg.p_max;
    throw Error(ErrorCode::kBudgetViolation, os.str());
  }
}

PowerAllocation equal_allocation(const SystemConfig& cfg, ChainCount chains) {
  const double per = transmit_budget(cfg, chains) / cfg.n_users;
  return PowerAllocation(cfg, chains,
                         std::vector<double>(cfg.n_users, per));
}

}  // namespace rfopt
