#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rfopt/channel.hpp"
#include "rfopt/core_types.hpp"
#include "rfopt/kkt_solver.hpp"

namespace rfopt {

enum class SearchMode {
  kEarlyStop,   // stop at the first S whose surrogate rate drops
  kExhaustive,  // evaluate every admissible S and take the argmax
};

std::string_view to_string(SearchMode mode);

struct JointResult {
  ChainCount s_opt;
  PowerAllocation allocation;
  double sum_rate_approx = 0.0;  // surrogate objective at the optimum
  double sum_rate_exact = 0.0;   // exact conjugate-beamforming rate, same channel
  std::vector<std::pair<int, double>> trajectory;  // (S, surrogate rate) visited
};

/// Sweeps S = K .. min(N, floor(p_max/p_c)) over nested antenna subsets (the
/// first S entries of `column_order`), solving the fixed-S allocation at
/// each step. Throws kBracketFailure from the allocation solver and
/// kDimensionMismatch if the channel is not K x N or the order is too short.
JointResult optimize(const ChannelMatrix& full, const SystemConfig& cfg,
                     SearchMode mode, std::span<const int> column_order);

/// Same, with column_order = antenna_permutation(N, selection_seed).
JointResult optimize(const ChannelMatrix& full, const SystemConfig& cfg,
                     SearchMode mode, std::uint64_t selection_seed);

}  // namespace rfopt
