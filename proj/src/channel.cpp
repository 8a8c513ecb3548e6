#include "rfopt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace rfopt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_entry(std::complex<double> z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

std::complex<double> parse_entry(const std::string& tok) {
  // The imaginary part starts at the last sign that is not part of an
  // exponent and not the leading character.
  if (tok.size() < 2 || tok.back() != 'j') {
    throw Error(ErrorCode::kParseError, "bad channel entry '" + tok + "'");
  }
  std::size_t split = std::string::npos;
  for (std::size_t i = tok.size() - 1; i > 0; --i) {
    if ((tok[i] == '+' || tok[i] == '-') && tok[i - 1] != 'e' &&
        tok[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    throw Error(ErrorCode::kParseError, "bad channel entry '" + tok + "'");
  }
  const std::string re = tok.substr(0, split);
  const std::string im = tok.substr(split, tok.size() - split - 1);
  char* end = nullptr;
  const double r = std::strtod(re.c_str(), &end);
  if (end != re.c_str() + re.size()) {
    throw Error(ErrorCode::kParseError, "bad real part in '" + tok + "'");
  }
  const double i = std::strtod(im.c_str(), &end);
  if (end != im.c_str() + im.size()) {
    throw Error(ErrorCode::kParseError, "bad imaginary part in '" + tok + "'");
  }
  return {r, i};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                          std::uint64_t stream) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ (stream * 0xd6e8feb86659fd93ULL));
}

ChannelMatrix generate_channel(const SystemConfig& cfg,
                               std::uint64_t master_seed,
                               std::uint64_t trial_index) {
  const std::uint64_t seed =
      derive_seed(master_seed, trial_index, kChannelStream);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(2.0);

  Eigen::MatrixXcd gains(cfg.n_users, cfg.n_antennas);
  for (int k = 0; k < cfg.n_users; ++k) {
    for (int n = 0; n < cfg.n_antennas; ++n) {
      const double re = normal(rng);
      const double im = normal(rng);
      gains(k, n) = {scale * re, scale * im};
    }
  }
  return ChannelMatrix(std::move(gains), seed);
}

std::vector<int> antenna_permutation(int n, std::uint64_t seed) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

ChannelMatrix select_columns(const ChannelMatrix& full,
                             std::span<const int> columns) {
  Eigen::MatrixXcd sub(full.n_users(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const int c = columns[j];
    if (c < 0 || c >= full.n_selected()) {
      throw Error(ErrorCode::kDimensionMismatch, "column index out of range");
    }
    sub.col(static_cast<Eigen::Index>(j)) = full.gains().col(c);
  }
  return ChannelMatrix(std::move(sub), full.seed_label());
}

ChannelMatrix select_antennas(const ChannelMatrix& full, int s,
                              std::uint64_t selection_seed) {
  if (s < 1 || s > full.n_selected()) {
    throw Error(ErrorCode::kInvalidChainCount,
                "cannot select " + std::to_string(s) + " of " +
                    std::to_string(full.n_selected()) + " antennas");
  }
  const auto perm = antenna_permutation(full.n_selected(), selection_seed);
  return select_columns(full, std::span<const int>(perm.data(), s));
}

ChannelMatrix select_antennas(const ChannelMatrix& full, ChainCount s,
                              std::uint64_t selection_seed) {
  return select_antennas(full, s.value(), selection_seed);
}

GramStats gram_stats(const ChannelMatrix& ch) {
  const Eigen::MatrixXcd& h = ch.gains();
  const int k_users = ch.n_users();
  const Eigen::MatrixXcd gram = h * h.adjoint();

  GramStats g;
  g.beta_sq.resize(k_users);
  g.cross_sq = Eigen::MatrixXd::Zero(k_users, k_users);
  g.eta = 0.0;
  for (int k = 0; k < k_users; ++k) {
    // h_k h_k^H is real; take the row norm directly rather than gram(k,k).
    const double norm_sq = h.row(k).squaredNorm();
    g.beta_sq[k] = norm_sq * norm_sq;
    g.eta += norm_sq;
    for (int i = 0; i < k; ++i) {
      const double c = std::norm(gram(k, i));
      g.cross_sq(k, i) = c;
      g.cross_sq(i, k) = c;
    }
  }
  return g;
}

void write_channel_text(std::ostream& out, const ChannelMatrix& ch) {
  for (int k = 0; k < ch.n_users(); ++k) {
    for (int n = 0; n < ch.n_selected(); ++n) {
      if (n) out << ' ';
      out << format_entry(ch.gains()(k, n));
    }
    out << '\n';
  }
}

ChannelMatrix read_channel_text(std::istream& in) {
  std::vector<std::vector<std::complex<double>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::complex<double>> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_entry(tok));
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged channel matrix");
    }
    rows.push_back(std::move(row));
  }
  const Eigen::Index cols = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXcd gains(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (Eigen::Index n = 0; n < cols; ++n) gains(k, n) = rows[k][n];
  }
  return ChannelMatrix(std::move(gains));
}

}  // namespace rfopt
