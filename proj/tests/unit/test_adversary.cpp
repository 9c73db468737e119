#include <gtest/gtest.h>

#include "swarmnet/adversary.hpp"

using namespace swarmnet;
using namespace swarmnet::adversary;

namespace {

AdversaryProfile profile(Kind k, double drop_prob, double violation_rate = 0.0) {
  AdversaryProfile p;
  p.kind = k;
  p.drop_prob = drop_prob;
  p.violation_rate = violation_rate;
  return p;
}

}  // namespace

TEST(Behavior, CertainOutcomesConsumeNoDraws) {
  RngStream a(1, "drop"), b(1, "drop");
  auto benign = profile(Kind::kBlackhole, 0.0);
  auto hole = profile(Kind::kBlackhole, 1.0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(apply_behavior(&benign, SimTime{}, a), RelayAction::kForward);
    EXPECT_EQ(apply_behavior(&hole, SimTime{}, a), RelayAction::kDrop);
    EXPECT_EQ(apply_behavior(nullptr, SimTime{}, a), RelayAction::kForward);
  }
  EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Behavior, GrayholeDropFraction) {
  RngStream rng(2, "gray");
  auto gray = profile(Kind::kGrayhole, 0.5);
  int drops = 0;
  for (int i = 0; i < 10000; ++i) drops += apply_behavior(&gray, SimTime{}, rng) == RelayAction::kDrop;
  EXPECT_NEAR(drops / 10000.0, 0.5, 0.02);
}

TEST(Behavior, InactiveUntilActivation) {
  RngStream rng(2, "late");
  auto hole = profile(Kind::kBlackhole, 1.0);
  hole.active_from = SimTime::from_seconds(60);
  EXPECT_EQ(apply_behavior(&hole, SimTime::from_seconds(59), rng), RelayAction::kForward);
  EXPECT_EQ(apply_behavior(&hole, SimTime::from_seconds(60), rng), RelayAction::kDrop);
}

TEST(Behavior, ViolationAttempts) {
  RngStream rng(3, "viol");
  auto v = profile(Kind::kMacViolator, 0.0, 2.0);
  EXPECT_EQ(violation_attempts(&v, SimTime{}, rng), 2);
  EXPECT_EQ(violation_attempts(nullptr, SimTime{}, rng), 0);
  v.violation_rate = 0.25;
  int total = 0;
  for (int i = 0; i < 10000; ++i) total += violation_attempts(&v, SimTime{}, rng);
  EXPECT_NEAR(total / 10000.0, 0.25, 0.02);
}

TEST(Watchdog, Outcomes) {
  const auto t = SimTime::from_seconds(1);
  const auto pos = observe_forwarding(1, 2, true, false, true, t);
  ASSERT_TRUE(pos);
  EXPECT_EQ(pos->verdict, trust::Verdict::kPositive);
  const auto neg = observe_forwarding(1, 2, false, true, true, t);
  ASSERT_TRUE(neg);
  EXPECT_EQ(neg->verdict, trust::Verdict::kNegative);
  EXPECT_EQ(neg->cause, Cause::kDropped);
  EXPECT_FALSE(observe_forwarding(1, 2, false, true, false, t));  // out of range
  EXPECT_FALSE(observe_forwarding(1, 2, false, false, true, t));  // still waiting
  EXPECT_FALSE(observe_forwarding(2, 2, true, false, true, t));
}

TEST(Quorum, Boundaries) {
  const FlagRule rule;
  EXPECT_FALSE(quorum_flags({0.9, 0.9, 0.9}, rule));
  EXPECT_TRUE(quorum_flags({0.1, 0.1}, rule));
  EXPECT_TRUE(quorum_flags({0.1, 0.9}, rule));
  EXPECT_FALSE(quorum_flags({0.1, 0.9, 0.9}, rule));
  EXPECT_FALSE(quorum_flags({}, rule));
}

TEST(Tracker, FlagsFromTrustTables) {
  trust::TrustParams p;
  std::vector<trust::TrustTable> tables(4, trust::TrustTable(4));
  for (int i = 1; i <= 6; ++i) {
    tables[0].observe(3, trust::Verdict::kNegative, SimTime::from_seconds(i), p);
    tables[1].observe(3, trust::Verdict::kNegative, SimTime::from_seconds(i), p);
  }
  tables[2].observe(3, trust::Verdict::kPositive, SimTime::from_seconds(1), p);
  tables[2].observe(1, trust::Verdict::kPositive, SimTime::from_seconds(1), p);
  EXPECT_EQ(peer_scores(tables, 3).size(), 3u);
  DetectionTracker tr(4);
  tr.refresh(tables, FlagRule{}, SimTime::from_seconds(7));
  EXPECT_TRUE(tr.flagged(3));
  EXPECT_EQ(tr.status()[3].flagged_at, SimTime::from_seconds(7));
  EXPECT_FALSE(tr.flagged(1));
  EXPECT_FALSE(tr.flagged(0));  // nobody holds a record on node 0
}

TEST(Profile, Validation) {
  EXPECT_TRUE(AdversaryProfile{}.validate().empty());
  auto bad = profile(Kind::kGrayhole, 1.5);
  EXPECT_FALSE(bad.validate().empty());
  EXPECT_EQ(parse_kind("grayhole"), Kind::kGrayhole);
  EXPECT_FALSE(parse_kind("wormhole").has_value());
}
