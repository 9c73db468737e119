#include <gtest/gtest.h>

#include <cmath>

#include "properties.hpp"
#include "swarmnet/trust.hpp"

using namespace swarmnet;
using namespace swarmnet::trust;

TEST(ExpectedTrust, Ratios) {
  EXPECT_EQ(expected_trust({1, 1, {}}), 0.5);
  EXPECT_NEAR(expected_trust({2, 1, {}}), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(expected_trust({8, 2, {}}), 0.8, 1e-15);
}

TEST(Update, IncrementWithoutDecay) {
  TrustParams p;
  p.lambda = 0.0;
  const auto r = update({1, 1, {}}, Verdict::kPositive, SimTime::from_seconds(3), p);
  EXPECT_EQ(r.alpha, 2.0);
  EXPECT_EQ(r.beta, 1.0);
  EXPECT_EQ(r.last_update, SimTime::from_seconds(3));
}

TEST(Update, IncrementThenDecay) {
  TrustParams p;
  p.lambda = 0.1;
  const auto r = update({1, 1, {}}, Verdict::kPositive, SimTime::from_seconds(10), p);
  EXPECT_NEAR(r.alpha, 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(r.beta, std::exp(-1.0), 1e-15);
}

TEST(Update, DecayThenIncrementOrder) {
  TrustParams p;
  p.lambda = 0.1;
  p.order = DecayOrder::kDecayThenIncrement;
  const auto r = update({1, 1, {}}, Verdict::kNegative, SimTime::from_seconds(10), p);
  EXPECT_NEAR(r.alpha, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(r.beta, std::exp(-1.0) + 2.0, 1e-15);
}

TEST(Update, OutOfOrderIsAFault) {
  TrustParams p;
  const TrustRecord r{1, 1, SimTime::from_seconds(5)};
  EXPECT_THROW(update(r, Verdict::kPositive, SimTime::from_seconds(4), p), HardFault);
}

TEST(Update, LongSilenceKeepsEvidencePositive) {
  TrustParams p;
  p.lambda = 1.0;
  const auto r = update({1, 1, {}}, Verdict::kNegative, SimTime::from_seconds(100000), p);
  EXPECT_GT(r.alpha, 0.0);
  EXPECT_GT(r.beta, 0.0);
  EXPECT_NEAR(expected_trust(r), 1.0 / 4.0, 1e-12);
}

TEST(Isolation, Threshold) {
  TrustParams p;
  EXPECT_FALSE(is_isolated({1, 1, {}}, p));
  EXPECT_TRUE(is_isolated({1, 9, {}}, p));
  p.isolation_threshold = 0.0;
  EXPECT_FALSE(is_isolated({1e-9, 1e9, {}}, p));
}

TEST(Isolation, PersistentDropperCrossesWithinTensOfEvents) {
  TrustParams p;
  TrustRecord r = prior_record(p, SimTime{});
  int events = 0;
  while (!is_isolated(r, p)) {
    ++events;
    r = update(r, Verdict::kNegative, SimTime::from_seconds(events), p);
  }
  EXPECT_LT(events, 40);
}

TEST(Table, UnobservedPeersAreNotDistrusted) {
  TrustParams p;
  TrustTable t(4);
  EXPECT_FALSE(t.has(2));
  EXPECT_EQ(t.score(2, p), 0.5);
  EXPECT_FALSE(t.distrusts(2, p));
  for (int i = 1; i <= 5; ++i) t.observe(2, Verdict::kNegative, SimTime::from_seconds(i), p);
  EXPECT_TRUE(t.has(2));
  EXPECT_TRUE(t.distrusts(2, p));
}

TEST(Params, Validation) {
  EXPECT_TRUE(TrustParams{}.validate().empty());
  TrustParams p;
  p.delta_alpha = 0.0;
  p.lambda = -1.0;
  p.isolation_threshold = 1.0;
  EXPECT_GE(p.validate().size(), 3u);
}

TEST(Properties, RandomizedSequences) {
  const auto r = props::trust_sequences(10000, 1);
  EXPECT_EQ(r.sequences, 10000u);
  EXPECT_EQ(r.monotonicity_failures, 0u);
  EXPECT_LE(r.max_decay_score_error, 1e-12);
  EXPECT_LE(r.max_evidence_decay_error, 1e-12);
  EXPECT_GT(r.min_score, 0.0);
  EXPECT_LT(r.max_score, 1.0);
}
