#include "rfopt/kkt_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

namespace rfopt {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLambdaFloor = 1e-12;
constexpr int kMaxGrowSteps = 60;

double tolerance_for(double budget) {
  // 1e-8 relative, but never looser than what PowerAllocation accepts.
  return std::max(1e-12, std::min(1e-8 * budget, 0.1 * kBudgetTolerance));
}

// term_k(p) - lambda p, the per-user Lagrangian.
double user_lagrangian(double beta_k_sq, const KktInputs& in, double p,
                       double lambda) {
  return surrogate_term(beta_k_sq, in, p) - lambda * p;
}

std::vector<double> candidates_at(const KktInputs& in, double lambda) {
  std::vector<double> p(in.n_users());
  for (int k = 0; k < in.n_users(); ++k) {
    p[k] = candidate_power(in.beta_sq()[k], in, lambda);
  }
  return p;
}

double sum_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Start of the convex part of a user's term; zero if it has no concave part.
double inflection_power(double beta_k_sq, const KktInputs& in) {
  const double s = in.s();
  if (beta_k_sq <= 2.0 * s) return 0.0;
  return in.a() * (beta_k_sq - 2.0 * s) / (2.0 * (beta_k_sq - s));
}

// Stationary point on the concave branch, capped at the inflection point.
// Continuous and non-increasing in lambda.
double concave_branch_power(double beta_k_sq, const KktInputs& in,
                            double lambda) {
  const double cap = std::min(inflection_power(beta_k_sq, in), in.budget());
  if (cap <= 0.0) return 0.0;
  if (lambda >= surrogate_term_derivative(beta_k_sq, in, 0.0)) return 0.0;
  if (lambda <= surrogate_term_derivative(beta_k_sq, in, cap)) return cap;
  return std::clamp(kkt_root(beta_k_sq, in, lambda), 0.0, cap);
}

// KKT point with every user on its concave branch, if the branches can
// absorb the budget.
std::optional<std::vector<double>> concave_branch_point(const KktInputs& in,
                                                        double tol,
                                                        double& lambda) {
  const int k_users = in.n_users();
  auto powers_at = [&](double lam) {
    std::vector<double> p(k_users);
    for (int k = 0; k < k_users; ++k) {
      p[k] = concave_branch_power(in.beta_sq()[k], in, lam);
    }
    return p;
  };
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double b2 : in.beta_sq()) {
    const double cap = std::min(inflection_power(b2, in), in.budget());
    if (cap <= 0.0) continue;
    lo = std::min(lo, surrogate_term_derivative(b2, in, cap));
    hi = std::max(hi, surrogate_term_derivative(b2, in, 0.0));
  }
  if (!(hi > 0.0) || sum_of(powers_at(lo)) < in.budget() - tol) return std::nullopt;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto p = powers_at(mid);
    const double r = sum_of(p) - in.budget();
    if (std::abs(r) <= tol) {
      lambda = mid;
      return p;
    }
    if (!(mid > lo && mid < hi)) break;
    (r > 0.0 ? lo : hi) = mid;
  }
  return std::nullopt;
}

// Best split of c between users i and j: grid scan, then bisection on the
// marginal-rate difference around the best cell. Returns p_i.
double best_pair_split(const KktInputs& in, int i, int j, double c) {
  const double bi = in.beta_sq()[i], bj = in.beta_sq()[j];
  auto f = [&](double x) {
    return surrogate_term(bi, in, x) + surrogate_term(bj, in, c - x);
  };
  auto g = [&](double x) {
    return surrogate_term_derivative(bi, in, x) -
           surrogate_term_derivative(bj, in, c - x);
  };
  constexpr int kCells = 256;
  int best = 0;
  double best_val = f(0.0);
  for (int k = 1; k <= kCells; ++k) {
    const double v = f(c * k / kCells);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double x = c * best / kCells;
  double lo = c * std::max(0, best - 1) / kCells;
  double hi = c * std::min(kCells, best + 1) / kCells;
  if (g(lo) > 0.0 && g(hi) < 0.0) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (f(root) >= best_val) x = root;
  }
  return x;
}

// Pairwise exchange until no pair improves; each move keeps p_i + p_j.
void polish_pairs(const KktInputs& in, std::vector<double>& p) {
  const int k_users = in.n_users();
  for (int sweep = 0; sweep < 50; ++sweep) {
    bool improved = false;
    for (int i = 0; i < k_users; ++i) {
      for (int j = i + 1; j < k_users; ++j) {
        const double c = p[i] + p[j];
        if (c <= 0.0) continue;
        const double before = surrogate_term(in.beta_sq()[i], in, p[i]) +
                              surrogate_term(in.beta_sq()[j], in, p[j]);
        const double x = best_pair_split(in, i, j, c);
        const double after = surrogate_term(in.beta_sq()[i], in, x) +
                             surrogate_term(in.beta_sq()[j], in, c - x);
        if (after > before + 1e-13 * std::max(1.0, std::abs(before))) {
          p[i] = x;
          p[j] = c - x;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
}

}  // namespace

KktInputs::KktInputs(const SystemConfig& cfg, ChainCount s,
                     std::vector<double> beta_sq)
    : cfg_(cfg),
      s_(s),
      beta_sq_(std::move(beta_sq)),
      budget_(transmit_budget(cfg, s)),
      a_(budget_ + cfg.n_users) {
  if (beta_sq_.size() != static_cast<std::size_t>(cfg.n_users)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "beta_sq length does not match n_users");
  }
  for (double b : beta_sq_) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "beta_sq entries must be finite and non-negative");
    }
  }
}

double kkt_discriminant(double beta_k_sq, const KktInputs& in, double lambda) {
  const double s = in.s();
  const double a = in.a();
  const double lin = a * (beta_k_sq - 2.0 * s);
  // mu = -lambda turns + a b2 / (ln2 mu) into - a b2 / (ln2 lambda).
  const double c = s * a * a - a * beta_k_sq / (kLn2 * lambda);
  return lin * lin - 4.0 * (s - beta_k_sq) * c;
}

double kkt_root(double beta_k_sq, const KktInputs& in, double lambda) {
  const double s = in.s();
  const double a = in.a();
  const double qa = s - beta_k_sq;
  const double qb = a * (beta_k_sq - 2.0 * s);
  const double qc = s * a * a - a * beta_k_sq / (kLn2 * lambda);

  if (std::abs(qa) < 1e-9 * s * s) {
    if (qb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return -qc / qb;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double sq = std::sqrt(disc);
  // (-qb + sq) / (2 qa); for qb > 0 use the product of roots to avoid
  // cancellation between -qb and sq.
  if (qb > 0.0) return -2.0 * qc / (qb + sq);
  return (-qb + sq) / (2.0 * qa);
}

double kkt_quadratic(double beta_k_sq, const KktInputs& in, double p,
                     double lambda) {
  const double s = in.s();
  const double a = in.a();
  const double mu = -lambda;
  return p * p * (s - beta_k_sq) + p * a * (beta_k_sq - 2.0 * s) +
         s * a * a + a * beta_k_sq / (kLn2 * mu);
}

double candidate_power(double beta_k_sq, const KktInputs& in, double lambda) {
  const double budget = in.budget();
  if (budget <= 0.0 || beta_k_sq <= 0.0) return 0.0;

  double best_p = 0.0;
  double best_val = user_lagrangian(beta_k_sq, in, 0.0, lambda);
  const double root = kkt_root(beta_k_sq, in, lambda);
  if (std::isfinite(root) && root > 0.0 && root < budget) {
    const double v = user_lagrangian(beta_k_sq, in, root, lambda);
    if (v > best_val) {
      best_val = v;
      best_p = root;
    }
  }
  if (user_lagrangian(beta_k_sq, in, budget, lambda) > best_val) {
    best_p = budget;
  }
  return best_p;
}

double budget_residual(const KktInputs& in, double lambda) {
  return sum_of(candidates_at(in, lambda)) - in.budget();
}

MultiplierBracket find_multiplier_bracket(const KktInputs& in) {
  MultiplierBracket br;
  br.tolerance_power = tolerance_for(in.budget());

  br.lambda_low = kLambdaFloor;
  int steps = 0;
  while (budget_residual(in, br.lambda_low) <= 0.0) {
    if (++steps > kMaxGrowSteps) {
      throw Error(ErrorCode::kBracketFailure,
                  "budget residual never positive: no user accepts power");
    }
    br.lambda_low *= 0.1;
  }

  br.lambda_high = 1.0;
  steps = 0;
  while (budget_residual(in, br.lambda_high) >= 0.0) {
    if (++steps > kMaxGrowSteps) {
      throw Error(ErrorCode::kBracketFailure,
                  "budget residual never negative over the price range");
    }
    br.lambda_high *= 10.0;
  }
  return br;
}

KktSolution solve(const KktInputs& in) {
  const SystemConfig& cfg = in.config();
  const int k_users = in.n_users();
  const double budget = in.budget();
  KktDiagnostics diag;

  if (budget <= 0.0) {
    return {PowerAllocation(cfg, in.chains(), std::vector<double>(k_users, 0.0)),
            diag};
  }

  const double tol = tolerance_for(budget);
  // A residual of exactly zero at the floor price happens when a single
  // user takes the whole budget.
  {
    auto p = candidates_at(in, kLambdaFloor);
    const double r = sum_of(p) - budget;
    if (std::abs(r) <= tol) {
      diag.lambda = kLambdaFloor;
      diag.final_residual = r;
      return {PowerAllocation(cfg, in.chains(), std::move(p)), diag};
    }
  }

  const MultiplierBracket br = find_multiplier_bracket(in);
  double lo = br.lambda_low;
  double hi = br.lambda_high;

  for (int it = 0; it < br.max_iterations; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    auto p = candidates_at(in, mid);
    const double r = sum_of(p) - budget;
    diag.iterations = it + 1;
    if (std::abs(r) <= br.tolerance_power) {
      diag.lambda = mid;
      diag.final_residual = r;
      return {PowerAllocation(cfg, in.chains(), std::move(p)), diag};
    }
    (r > 0.0 ? lo : hi) = mid;
  }

  // The price interval collapsed onto a point where some user's best
  // response jumps (non-concave term). Start from the under-budget side and
  // hand the shortfall to the jumping users, largest jump first.
  std::vector<double> p_hi = candidates_at(in, hi);
  const std::vector<double> p_lo = candidates_at(in, lo);
  double deficit = budget - sum_of(p_hi);
  std::vector<int> order(k_users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return p_lo[x] - p_hi[x] > p_lo[y] - p_hi[y];
  });
  for (int k : order) {
    if (deficit <= 0.0) break;
    const double jump = p_lo[k] - p_hi[k];
    if (jump <= 0.0) break;
    const double add = std::min(jump, deficit);
    p_hi[k] += add;
    deficit -= add;
    diag.relaxed_users.push_back(k);
  }
  // The relaxed point is not stationary for the non-concave users.
  polish_pairs(in, p_hi);
  diag.lambda = hi;
  diag.duality_gap = true;
  {
    // After the exchange the interior users share one marginal rate.
    double acc = 0.0;
    int n = 0;
    for (int k = 0; k < k_users; ++k) {
      if (p_hi[k] > 0.0 && p_hi[k] < budget) {
        acc += surrogate_term_derivative(in.beta_sq()[k], in, p_hi[k]);
        ++n;
      }
    }
    if (n > 0) diag.lambda = acc / n;
  }
  diag.final_residual = sum_of(p_hi) - budget;
  if (std::abs(diag.final_residual) > br.tolerance_power) {
    throw Error(ErrorCode::kBracketFailure,
                "bisection on the water level did not meet the budget");
  }

  // Prefer a stationary point on the concave branches when it is as good.
  double lambda_local = 0.0;
  if (auto local = concave_branch_point(in, br.tolerance_power, lambda_local)) {
    const double r_local = surrogate_sum_rate(in, *local);
    const double r_relaxed = surrogate_sum_rate(in, p_hi);
    // Budget slack within tolerance is worth about lambda * tol.
    const double slack =
        2.0 * lambda_local * br.tolerance_power + 1e-12 * std::max(1.0, r_relaxed);
    if (r_local >= r_relaxed - slack) {
      KktDiagnostics local_diag;
      local_diag.lambda = lambda_local;
      local_diag.duality_gap = true;
      local_diag.iterations = diag.iterations;
      local_diag.final_residual = sum_of(*local) - budget;
      return {PowerAllocation(cfg, in.chains(), std::move(*local)), local_diag};
    }
  }
  return {PowerAllocation(cfg, in.chains(), std::move(p_hi)), diag};
}

double surrogate_term(double beta_k_sq, const KktInputs& in, double p) {
  const double sinr = p * beta_k_sq / (in.s() * (in.a() - p));
  return std::log1p(sinr) / kLn2;
}

double surrogate_sum_rate(const KktInputs& in,
                          std::span<const double> powers) {
  if (powers.size() != in.beta_sq().size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "power vector length does not match n_users");
  }
  double r = 0.0;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    r += surrogate_term(in.beta_sq()[k], in, powers[k]);
  }
  return r;
}

double surrogate_term_derivative(double beta_k_sq, const KktInputs& in,
                                 double p) {
  const double s = in.s();
  const double a = in.a();
  const double rem = a - p;
  return beta_k_sq * a / (kLn2 * rem * (s * rem + p * beta_k_sq));
}

double surrogate_term_second_derivative(double beta_k_sq, const KktInputs& in,
                                        double p) {
  const double s = in.s();
  const double a = in.a();
  const double g = (s * a + p * (beta_k_sq - s)) * (a - p);
  const double dg = a * (beta_k_sq - 2.0 * s) - 2.0 * p * (beta_k_sq - s);
  return -beta_k_sq * a * dg / (kLn2 * g * g);
}

double sinr_curvature_expression(double beta_k_sq, const KktInputs& in,
                                 double p) {
  const double rem = in.a() - p;
  return -2.0 * beta_k_sq * in.a() / (in.s() * rem * rem * rem);
}

}  // namespace rfopt
