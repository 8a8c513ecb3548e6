#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rfopt/channel.hpp"

namespace rfopt {
namespace {

SystemConfig cfg_of(int n, int k) { return SystemConfig{n, k, 1e6, 1e-3}; }

TEST(GenerateChannel, UnitVarianceEntries) {
  // 10^6 entries.
  const ChannelMatrix ch = generate_channel(cfg_of(1000, 1000), 2024, 0);
  const auto& h = ch.gains();
  const double n = static_cast<double>(h.size());
  const double mean_abs_sq = h.cwiseAbs2().sum() / n;
  EXPECT_NEAR(mean_abs_sq, 1.0, 0.005);
  const double re_var = h.real().array().square().sum() / n;
  EXPECT_NEAR(re_var, 0.5, 0.005);
  EXPECT_NEAR(h.real().sum() / n, 0.0, 0.005);
  EXPECT_NEAR(h.imag().sum() / n, 0.0, 0.005);
}

TEST(GenerateChannel, Deterministic) {
  const SystemConfig cfg = cfg_of(64, 4);
  const ChannelMatrix a = generate_channel(cfg, 7, 3);
  const ChannelMatrix b = generate_channel(cfg, 7, 3);
  EXPECT_TRUE(a.gains() == b.gains());
  EXPECT_FALSE(a.gains() == generate_channel(cfg, 7, 4).gains());
  EXPECT_FALSE(a.gains() == generate_channel(cfg, 8, 3).gains());
}

TEST(GenerateChannel, RowsArePrefixStable) {
  const ChannelMatrix small = generate_channel(cfg_of(32, 2), 5, 1);
  const ChannelMatrix large = generate_channel(cfg_of(32, 6), 5, 1);
  EXPECT_TRUE(large.gains().topRows(2) == small.gains());
}

TEST(GenerateChannel, FourthMomentOfRowNorm) {
  // E{(||h||^2)^2} = S^2 + S for h ~ CN(0, I_S).
  const int s = 64;
  const SystemConfig cfg = cfg_of(s, 1);
  double acc = 0.0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    acc += gram_stats(generate_channel(cfg, 99, t)).beta_sq[0];
  }
  const double mean = acc / draws;
  EXPECT_NEAR(mean, s * s + s, 0.02 * (s * s + s));
}

TEST(SelectAntennas, AllColumnsIsPermutation) {
  const ChannelMatrix full = generate_channel(cfg_of(16, 3), 1, 0);
  const ChannelMatrix sel = select_antennas(full, 16, 77);
  ASSERT_EQ(sel.n_selected(), 16);
  const auto perm = antenna_permutation(16, 77);
  std::set<int> seen(perm.begin(), perm.end());
  EXPECT_EQ(seen.size(), 16u);
  for (int j = 0; j < 16; ++j) {
    EXPECT_TRUE(sel.gains().col(j) == full.gains().col(perm[j]));
  }
}

TEST(SelectAntennas, SingleColumnReproducible) {
  const ChannelMatrix full = generate_channel(cfg_of(16, 2), 1, 0);
  const ChannelMatrix a = select_antennas(full, 1, 1234);
  const ChannelMatrix b = select_antennas(full, 1, 1234);
  EXPECT_TRUE(a.gains() == b.gains());
  EXPECT_EQ(a.n_selected(), 1);
}

TEST(SelectAntennas, UniformSingleColumnFrequency) {
  std::vector<int> counts(4, 0);
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    ++counts[antenna_permutation(4, derive_seed(31, r, kSelectionStream))[0]];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / reps, 0.25, 0.01);
}

TEST(SelectAntennas, NestedAcrossSubsetSizes) {
  const ChannelMatrix full = generate_channel(cfg_of(40, 3), 2, 0);
  const ChannelMatrix s10 = select_antennas(full, 10, 55);
  const ChannelMatrix s25 = select_antennas(full, 25, 55);
  EXPECT_TRUE(s25.gains().leftCols(10) == s10.gains());
}

TEST(SelectAntennas, RejectsBadSize) {
  const ChannelMatrix full = generate_channel(cfg_of(8, 2), 2, 0);
  EXPECT_THROW(select_antennas(full, 0, 1), Error);
  EXPECT_THROW(select_antennas(full, 9, 1), Error);
}

TEST(GramStats, SingleUser) {
  const ChannelMatrix ch = generate_channel(cfg_of(12, 1), 3, 0);
  const GramStats g = gram_stats(ch);
  const double norm_sq = ch.gains().squaredNorm();
  EXPECT_NEAR(g.eta, norm_sq, 1e-12 * norm_sq);
  EXPECT_NEAR(g.beta_sq[0], g.eta * g.eta, 1e-12 * g.eta * g.eta);
  EXPECT_EQ(g.cross_sq.rows(), 1);
  EXPECT_EQ(g.cross_sq(0, 0), 0.0);
}

TEST(GramStats, OrthogonalRows) {
  Eigen::MatrixXcd h(2, 2);
  h << std::complex<double>(1, 0), 0, 0, std::complex<double>(0, 2);
  const GramStats g = gram_stats(ChannelMatrix(h));
  EXPECT_EQ(g.cross_sq(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(g.beta_sq[0], 1.0);
  EXPECT_DOUBLE_EQ(g.beta_sq[1], 16.0);
  EXPECT_DOUBLE_EQ(g.eta, 5.0);
}

TEST(GramStats, MatchesNaiveLoops) {
  const ChannelMatrix ch = generate_channel(cfg_of(8, 3), 17, 0);
  const GramStats g = gram_stats(ch);
  const oracle::NaiveGram ref = oracle::naive_gram(ch.gains());
  EXPECT_NEAR(g.eta, ref.eta, 1e-12 * ref.eta);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(g.beta_sq[k], ref.beta_sq[k], 1e-12 * ref.beta_sq[k]);
    for (int i = 0; i < 3; ++i) {
      if (i == k) continue;
      EXPECT_NEAR(g.cross_sq(k, i), ref.cross_sq[k][i],
                  1e-12 * std::max(1.0, ref.cross_sq[k][i]));
    }
  }
}

TEST(GramStats, InvariantsOnRandomRealizations) {
  for (int t = 0; t < 200; ++t) {
    const int k_users = 1 + t % 7;
    const int s = k_users + t % 23;
    const GramStats g = gram_stats(generate_channel(cfg_of(s, k_users), 4, t));
    double sum_beta = 0.0, sum_norm = 0.0;
    for (int k = 0; k < k_users; ++k) {
      sum_beta += g.beta_sq[k];
      sum_norm += std::sqrt(g.beta_sq[k]);
      for (int i = 0; i < k_users; ++i) {
        EXPECT_EQ(g.cross_sq(k, i), g.cross_sq(i, k));
      }
    }
    EXPECT_NEAR(g.eta, sum_norm, 1e-12 * g.eta);
    EXPECT_LE(g.eta * g.eta, k_users * sum_beta * (1.0 + 1e-12));
  }
}

TEST(GramStats, LargeArrayExpectations) {
  // E{|h_k h_i^H|^2} = S and E{eta} = K S.
  const int k_users = 10;
  for (int s : {64, 128}) {
    const SystemConfig cfg = cfg_of(s, k_users);
    const int draws = 2000;
    double cross = 0.0, eta = 0.0;
    int pairs = 0;
    for (int t = 0; t < draws; ++t) {
      const GramStats g = gram_stats(generate_channel(cfg, 8, t));
      eta += g.eta;
      for (int k = 0; k < k_users; ++k) {
        for (int i = k + 1; i < k_users; ++i) {
          cross += g.cross_sq(k, i);
          ++pairs;
        }
      }
    }
    EXPECT_NEAR(cross / pairs, s, 0.02 * s) << "S=" << s;
    EXPECT_NEAR(eta / draws, k_users * s, 0.01 * k_users * s) << "S=" << s;
  }
}

TEST(ChannelText, RoundTripAndFormat) {
  const ChannelMatrix ch = generate_channel(cfg_of(5, 3), 12, 0);
  std::ostringstream out;
  write_channel_text(out, ch);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(text.back(), '\n');
  std::istringstream in(text);
  const ChannelMatrix back = read_channel_text(in);
  EXPECT_TRUE(back.gains() == ch.gains());

  std::istringstream bad("1+2j 3+4\n");
  EXPECT_THROW(read_channel_text(bad), Error);
  std::istringstream ragged("1+2j 3+4j\n5-1e-05j\n");
  EXPECT_THROW(read_channel_text(ragged), Error);
  std::istringstream expo("-1.5e-05-2e+03j\n");
  const ChannelMatrix e = read_channel_text(expo);
  EXPECT_EQ(e.gains()(0, 0), std::complex<double>(-1.5e-05, -2e+03));
}

}  // namespace
}  // namespace rfopt
