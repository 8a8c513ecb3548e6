#pragma once

#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rfopt/core_types.hpp"

namespace rfopt {

/// K x S complex channel gains: row k is user k's channel h_k over the
/// currently selected antennas.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  explicit ChannelMatrix(Eigen::MatrixXcd gains, std::uint64_t seed_label = 0)
      : gains_(std::move(gains)), seed_label_(seed_label) {}

  const Eigen::MatrixXcd& gains() const noexcept { return gains_; }
  int n_users() const noexcept { return static_cast<int>(gains_.rows()); }
  int n_selected() const noexcept { return static_cast<int>(gains_.cols()); }
  std::uint64_t seed_label() const noexcept { return seed_label_; }

 private:
  Eigen::MatrixXcd gains_;
  std::uint64_t seed_label_ = 0;
};

/// Per-realization quantities entering the SINR expressions.
struct GramStats {
  std::vector<double> beta_sq;  // |h_k h_k^H|^2 = ||h_k||^4
  Eigen::MatrixXd cross_sq;     // |h_k h_i^H|^2, zero diagonal
  double eta = 0.0;             // ||H^H||_F^2

  int n_users() const noexcept { return static_cast<int>(beta_sq.size()); }
};

/// Order-independent substream seed for (master_seed, index, stream).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                          std::uint64_t stream);

inline constexpr std::uint64_t kChannelStream = 0;
inline constexpr std::uint64_t kSelectionStream = 1;

/// Full K x N realization with i.i.d. CN(0, 1) entries. Rows are drawn in
/// order, so the first K rows for a given (seed, trial) are shared by every
/// larger K.
ChannelMatrix generate_channel(const SystemConfig& cfg,
                               std::uint64_t master_seed,
                               std::uint64_t trial_index);

/// Uniformly random permutation of 0..n-1 determined by `seed`.
std::vector<int> antenna_permutation(int n, std::uint64_t seed);

/// Keeps the listed columns, in the given order.
ChannelMatrix select_columns(const ChannelMatrix& full,
                             std::span<const int> columns);

/// First `s` columns of antenna_permutation(N, selection_seed). Subsets for
/// increasing s under the same seed are nested.
ChannelMatrix select_antennas(const ChannelMatrix& full, int s,
                              std::uint64_t selection_seed);
ChannelMatrix select_antennas(const ChannelMatrix& full, ChainCount s,
                              std::uint64_t selection_seed);

GramStats gram_stats(const ChannelMatrix& ch);

/// One row per user; entries formatted as "re+imj" / "re-imj" with 17
/// significant digits, separated by single spaces.
void write_channel_text(std::ostream& out, const ChannelMatrix& ch);
ChannelMatrix read_channel_text(std::istream& in);

}  // namespace rfopt
