#include <sstream>

#include <gtest/gtest.h>

#include "rfopt/config_io.hpp"
#include "rfopt/core_types.hpp"

namespace rfopt {
namespace {

SystemConfig make(int n, int k, double p_max, double p_c) {
  return SystemConfig{n, k, p_max, p_c};
}

TEST(ValidateConfig, DefaultScenarioIsValid) {
  const Validation v = validate_config(make(256, 10, 10.0, 0.05));
  EXPECT_TRUE(v.ok());
  EXPECT_TRUE(v.warnings.empty());
}

TEST(ValidateConfig, BudgetExactlyConsumedByKChains) {
  const Validation v = validate_config(make(256, 10, 0.5, 0.05));
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(*v.error, ErrorCode::kInfeasibleBudget);
  EXPECT_NE(v.message.find("InfeasibleBudget"), std::string::npos);
}

TEST(ValidateConfig, MoreUsersThanAntennas) {
  const Validation v = validate_config(make(8, 10, 10.0, 0.05));
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(*v.error, ErrorCode::kBadDimensions);
}

TEST(ValidateConfig, NonPositiveFields) {
  EXPECT_EQ(*validate_config(make(0, 1, 1.0, 0.05)).error,
            ErrorCode::kBadDimensions);
  EXPECT_EQ(*validate_config(make(4, 0, 1.0, 0.05)).error,
            ErrorCode::kBadDimensions);
  EXPECT_EQ(*validate_config(make(4, 1, -1.0, 0.05)).error,
            ErrorCode::kBadDimensions);
  EXPECT_EQ(*validate_config(make(4, 1, 1.0, 0.0)).error,
            ErrorCode::kBadDimensions);
}

TEST(ValidateConfig, WarnsWhenUsersExceedQuarterOfAntennas) {
  const Validation v = validate_config(make(32, 10, 10.0, 0.05));
  EXPECT_TRUE(v.ok());
  EXPECT_EQ(v.warnings.size(), 1u);
  EXPECT_THROW(require_valid(make(8, 10, 10.0, 0.05)), Error);
}

TEST(MaxChains, IntegralRatioIsExact) {
  EXPECT_EQ(max_supported_chains(make(256, 10, 10.0, 0.05)), 200);
  EXPECT_EQ(max_supported_chains(make(256, 10, 0.3, 0.1)), 3);
  EXPECT_EQ(max_chain_count(make(256, 10, 20.0, 0.05)), 256);
}

TEST(TransmitBudget, Examples) {
  const SystemConfig cfg = make(256, 10, 10.0, 0.05);
  // Independent evaluation of p_max - s * p_c.
  const double p_max = 10.0, p_c = 0.05;
  EXPECT_NEAR(transmit_budget(cfg, ChainCount(cfg, 64)), p_max - 64 * p_c, 1e-12);
  EXPECT_NEAR(transmit_budget(cfg, ChainCount(cfg, 64)), 6.8, 1e-12);
  EXPECT_EQ(transmit_budget(cfg, ChainCount(cfg, 200)), 0.0);
  EXPECT_NEAR(transmit_budget(cfg, ChainCount(cfg, 10)), 9.5, 1e-12);
}

TEST(TransmitBudget, StrictlyDecreasingWithSlopePc) {
  const SystemConfig cfg = make(256, 10, 10.0, 0.05);
  for (int s = cfg.n_users; s < max_chain_count(cfg); ++s) {
    const double here = transmit_budget(cfg, ChainCount(cfg, s));
    const double next = transmit_budget(cfg, ChainCount(cfg, s + 1));
    EXPECT_LT(next, here);
    EXPECT_NEAR(here - next, cfg.p_c, 1e-12);
  }
}

TEST(ChainCount, Bounds) {
  const SystemConfig cfg = make(256, 10, 10.0, 0.05);
  EXPECT_NO_THROW(ChainCount(cfg, 10));
  EXPECT_NO_THROW(ChainCount(cfg, 200));
  EXPECT_THROW(ChainCount(cfg, 9), Error);
  EXPECT_THROW(ChainCount(cfg, 201), Error);
  const SystemConfig small = make(64, 10, 10.0, 0.05);
  EXPECT_THROW(ChainCount(small, 65), Error);
}

TEST(PowerAllocation, BudgetInvariant) {
  const SystemConfig cfg = make(16, 2, 2.0, 0.1);
  const ChainCount s(cfg, 10);  // budget 1.0
  const PowerAllocation ok(cfg, s, {0.25, 0.75});
  EXPECT_DOUBLE_EQ(ok.p_out(), 1.0);
  EXPECT_NO_THROW(PowerAllocation(cfg, s, {0.5, 0.5 + 0.5 * kBudgetTolerance}));

  try {
    PowerAllocation(cfg, s, {0.5, 0.5 + 10 * kBudgetTolerance});
    FAIL() << "expected budget violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetViolation);
  }
  EXPECT_THROW(PowerAllocation(cfg, s, {-0.1, 0.5}), Error);
  try {
    PowerAllocation(cfg, s, {0.1, 0.1, 0.1});
    FAIL() << "expected dimension mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(PowerAllocation, EqualSplit) {
  const SystemConfig cfg = make(256, 10, 10.0, 0.05);
  const PowerAllocation p = equal_allocation(cfg, ChainCount(cfg, 64));
  for (double v : p.per_user()) EXPECT_NEAR(v, 0.68, 1e-12);
  EXPECT_NEAR(p.p_out(), 6.8, 1e-12);
}

TEST(ConfigFile, ParsesKeysCommentsAndBothSeparators) {
  std::istringstream in(
      "# scenario\n"
      "n_antennas = 128\n"
      "n_users 8   # trailing comment\n"
      "\n"
      "p_max=12.5\n");
  const SystemConfig cfg = parse_config(in);
  EXPECT_EQ(cfg.n_antennas, 128);
  EXPECT_EQ(cfg.n_users, 8);
  EXPECT_DOUBLE_EQ(cfg.p_max, 12.5);
  EXPECT_DOUBLE_EQ(cfg.p_c, 0.05);  // default kept
}

TEST(ConfigFile, Errors) {
  std::istringstream unknown("n_rf = 3\n");
  EXPECT_THROW(parse_config(unknown), Error);
  std::istringstream bad_int("n_users = 3.5\n");
  EXPECT_THROW(parse_config(bad_int), Error);
  std::istringstream bad_real("p_c = abc\n");
  EXPECT_THROW(parse_config(bad_real), Error);
  EXPECT_THROW(load_config_file("/nonexistent/rfopt.cfg"), Error);
}

}  // namespace
}  // namespace rfopt
