#pragma once

#include <span>
#include <vector>

#include "rfopt/core_types.hpp"

namespace rfopt {

/// Inputs of the fixed-S power allocation problem
///   maximize  sum_k log2(1 + p_k beta_k^2 / (S (a - p_k)))
///   s.t.      sum_k p_k <= budget,  p_k >= 0,
/// with budget = p_max - S p_c and a = budget + K.
class KktInputs {
 public:
  /// Throws kDimensionMismatch if beta_sq.size() != K or any beta_k^2 is
  /// negative or non-finite.
  KktInputs(const SystemConfig& cfg, ChainCount s, std::vector<double> beta_sq);

  const SystemConfig& config() const noexcept { return cfg_; }
  ChainCount chains() const noexcept { return s_; }
  double s() const noexcept { return s_.value(); }
  const std::vector<double>& beta_sq() const noexcept { return beta_sq_; }
  int n_users() const noexcept { return static_cast<int>(beta_sq_.size()); }
  double budget() const noexcept { return budget_; }
  double a() const noexcept { return a_; }

 private:
  SystemConfig cfg_;
  ChainCount s_;
  std::vector<double> beta_sq_;
  double budget_;
  double a_;
};

/// Multiplier search range. The solver works with the water-level price
/// lambda = -mu > 0, where mu multiplies (sum p_k + S p_c - p_max) in the
/// Lagrangian; the budget residual is non-increasing in lambda.
struct MultiplierBracket {
  double lambda_low = 0.0;   // residual(lambda_low) > 0
  double lambda_high = 0.0;  // residual(lambda_high) < 0
  double tolerance_power = 0.0;
  int max_iterations = 200;
};

struct KktDiagnostics {
  double lambda = 0.0;  // final water-level price, mu = -lambda
  int iterations = 0;
  double final_residual = 0.0;  // sum p_k - budget
  /// Set when no price makes the per-user best responses meet the budget
  /// (some term is convex on part of [0, budget]). The allocation is then
  /// the better of a KKT point on the concave branches and a pairwise
  /// exchange started from the split best-response jump.
  bool duality_gap = false;
  /// Users whose power came from the split jump and pairwise exchange.
  /// Empty in the concave regime and when the concave-branch point wins.
  std::vector<int> relaxed_users;
};

struct KktSolution {
  PowerAllocation allocation;
  KktDiagnostics diagnostics;
};

/// Discriminant of the stationarity quadratic
///   p^2 (S - b2) + p a (b2 - 2S) + S a^2 + a b2 / (ln2 mu) = 0
/// evaluated at mu = -lambda.
double kkt_discriminant(double beta_k_sq, const KktInputs& in, double lambda);

/// The root (a (2S - b2) + sqrt(disc)) / (2 (S - b2)) computed without
/// cancellation, with a linear fallback when |S - b2| < 1e-9 S^2. Returns NaN
/// when the discriminant is negative.
double kkt_root(double beta_k_sq, const KktInputs& in, double lambda);

/// Left-hand side of the stationarity quadratic at power p and mu = -lambda.
double kkt_quadratic(double beta_k_sq, const KktInputs& in, double p,
                     double lambda);

/// Power user k would take at price lambda: the maximizer of
/// term_k(p) - lambda p over [0, budget]. Candidates are 0, the budget and
/// kkt_root when it lies inside; in the large-gain regime this is the
/// clamped root.
double candidate_power(double beta_k_sq, const KktInputs& in, double lambda);

/// sum_k candidate_power(beta_k^2, in, lambda) - budget.
double budget_residual(const KktInputs& in, double lambda);

/// Throws kBracketFailure if no sign change is found.
MultiplierBracket find_multiplier_bracket(const KktInputs& in);

/// Throws kBracketFailure when the multiplier cannot be bracketed.
KktSolution solve(const KktInputs& in);

/// k-th term log2(1 + p b2 / (S (a - p))) of the surrogate sum-rate.
double surrogate_term(double beta_k_sq, const KktInputs& in, double p);
double surrogate_sum_rate(const KktInputs& in, std::span<const double> powers);

/// d/dp of surrogate_term: b2 a / (ln2 (a - p) (S (a - p) + p b2)).
double surrogate_term_derivative(double beta_k_sq, const KktInputs& in,
                                 double p);

/// d^2/dp^2 of surrogate_term.
double surrogate_term_second_derivative(double beta_k_sq, const KktInputs& in,
                                        double p);

/// Curvature certificate -2 b2 a / (S (a - p)^3). Its magnitude is
/// d^2 sinr/dp^2, which is positive; the rate curvature is
/// surrogate_term_second_derivative.
double sinr_curvature_expression(double beta_k_sq, const KktInputs& in,
                                 double p);

}  // namespace rfopt
