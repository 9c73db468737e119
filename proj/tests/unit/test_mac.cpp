#include <gtest/gtest.h>

#include "swarmnet/mac.hpp"

using namespace swarmnet;
using namespace swarmnet::mac;

namespace {

MacConfig cfg30() {
  MacConfig c;
  c.scheduled_len = SimTime::from_ms(30);
  return c;
}

SimTime ms(double v) { return SimTime::from_ms(v); }

}  // namespace

TEST(Superframe, EqualSlots) {
  const auto sf = build_superframe(9, {1, 2, 3}, cfg30(), ms(100));
  ASSERT_EQ(sf.slots.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(sf.slots[i].offset, ms(10.0 * static_cast<double>(i)));
    EXPECT_EQ(sf.slots[i].length, ms(10));
  }
  EXPECT_EQ(sf.slot_of(2)->begin, ms(100 + 20 + 10));
  EXPECT_TRUE(sf.tiles());
}

TEST(Superframe, SingleMemberOwnsWindow) {
  const auto sf = build_superframe(9, {4}, cfg30(), SimTime{});
  ASSERT_EQ(sf.slots.size(), 1u);
  EXPECT_EQ(sf.slots[0].length, ms(30));
}

TEST(Superframe, NoMembersNoSlots) {
  const auto sf = build_superframe(9, {}, cfg30(), SimTime{});
  EXPECT_TRUE(sf.slots.empty());
  EXPECT_EQ(sf.scheduled_len, SimTime{});
  EXPECT_EQ(sf.frame_len(), cfg30().frame_len());
  EXPECT_TRUE(sf.tiles());
}

TEST(Superframe, TilesForAnyMemberCount) {
  MacConfig c;
  c.guard = SimTime::from_us(50);
  for (std::size_t n = 0; n <= 40; ++n) {
    std::vector<NodeId> m;
    for (std::size_t i = 0; i < n; ++i) m.push_back(static_cast<NodeId>(i + 1));
    const auto sf = build_superframe(0, m, c, ms(500));
    ASSERT_TRUE(sf.tiles()) << n;
    ASSERT_EQ(sf.frame_len(), c.frame_len());
  }
}

TEST(Superframe, BacklogWeightedSlots) {
  MacConfig c = cfg30();
  c.slots_by_backlog = true;
  const std::vector<std::size_t> backlog{1, 2, 0};
  const auto sf = build_superframe(0, {1, 2, 3}, c, SimTime{}, &backlog);
  EXPECT_EQ(sf.slots[0].length, ms(7.5));
  EXPECT_EQ(sf.slots[1].length, ms(15));
  EXPECT_EQ(sf.slots[2].length, ms(7.5));
  EXPECT_TRUE(sf.tiles());
}

TEST(Slots, FramesPerSlot) {
  EXPECT_EQ(frames_per_slot(ms(10), SimTime::from_us(2048)), 4u);
  EXPECT_EQ(frames_per_slot(ms(2), SimTime::from_us(2048)), 0u);
}

TEST(Slots, ComplianceCheck) {
  const auto sf = build_superframe(9, {1, 2, 3}, cfg30(), SimTime{});
  const auto own = *sf.slot_of(2);
  EXPECT_EQ(check_transmission(sf, 2, {own.begin, own.begin + ms(2)}), SlotCheck::kCompliant);
  EXPECT_EQ(check_transmission(sf, 2, {own.end - ms(1), own.end + ms(1)}), SlotCheck::kViolation);
  EXPECT_EQ(check_transmission(sf, 1, {own.begin, own.begin + ms(2)}), SlotCheck::kViolation);
  EXPECT_EQ(check_transmission(sf, 7, {own.begin, own.begin + ms(2)}), SlotCheck::kViolation);
}

TEST(Sleep, ComplementOfOwnSlot) {
  const auto sf = build_superframe(9, {1, 2, 3}, cfg30(), SimTime{});
  for (NodeId m : {1, 2, 3}) {
    SimTime asleep;
    for (const auto& i : sleep_plan(m, sf)) asleep += i.length();
    EXPECT_EQ(asleep, ms(20)) << m;
  }
  EXPECT_TRUE(sleep_plan(9, sf).empty());
  EXPECT_TRUE(sleep_plan(1, build_superframe(9, {1}, cfg30(), SimTime{})).empty());
}

TEST(Csma, SoleContenderWithZeroDrawTransmits) {
  BackoffState s{8, 0, 0};
  EXPECT_EQ(csma_attempt(s, false, true), CsmaDecision::kTransmit);
}

TEST(Csma, BusyMediumFreezesCounter) {
  BackoffState s{8, 0, 3};
  EXPECT_EQ(csma_attempt(s, true, true), CsmaDecision::kWait);
  EXPECT_EQ(s.backoff_remaining, 3);
  EXPECT_EQ(csma_attempt(s, false, true), CsmaDecision::kWait);
  EXPECT_EQ(s.backoff_remaining, 2);
}

TEST(Csma, DefersWhenFrameDoesNotFit) {
  BackoffState s{8, 0, 0};
  EXPECT_EQ(csma_attempt(s, false, false), CsmaDecision::kDefer);
}

TEST(Csma, ForcedTieCollidesAndBothDouble) {
  MacConfig c;
  RngStream r1(1, "a"), r2(2, "b");
  BackoffState a{8, 0, 0}, b{8, 0, 0};
  ASSERT_EQ(csma_attempt(a, false, true), CsmaDecision::kTransmit);
  ASSERT_EQ(csma_attempt(b, false, true), CsmaDecision::kTransmit);
  // Both transmitted in the same backoff slot: neither is acknowledged.
  EXPECT_FALSE(on_tx_failure(a, r1, c));
  EXPECT_FALSE(on_tx_failure(b, r2, c));
  EXPECT_EQ(a.cw, 16);
  EXPECT_EQ(b.cw, 16);
  EXPECT_LT(a.backoff_remaining, 16);
}

TEST(Csma, RetryLimitDropsFrame) {
  MacConfig c;
  RngStream r(1, "retry");
  BackoffState s = fresh_backoff(c);
  int failures = 0;
  while (!on_tx_failure(s, r, c)) ++failures;
  EXPECT_EQ(failures, c.retry_limit);
  EXPECT_EQ(s.cw, c.cw_min);  // reset for the next frame
}

TEST(Csma, WindowCapsAtMaximum) {
  MacConfig c;
  c.retry_limit = 10;
  RngStream r(1, "cap");
  BackoffState s = fresh_backoff(c);
  for (int i = 0; i < 6; ++i) on_tx_failure(s, r, c);
  EXPECT_EQ(s.cw, c.cw_max);
  on_tx_success(s, r, c);
  EXPECT_EQ(s.cw, c.cw_min);
  EXPECT_EQ(s.retries, 0);
}

TEST(Auditor, CountsOnlyCompliantOverlapsOnOneChannel) {
  CollisionAuditor a;
  a.record(1, 10, {ms(0), ms(2)}, true);
  a.record(1, 11, {ms(2), ms(4)}, true);   // back to back, no overlap
  a.record(2, 12, {ms(1), ms(3)}, true);   // other channel
  a.record(1, 13, {ms(1), ms(3)}, false);  // violator
  EXPECT_EQ(a.compliant_collisions(), 0u);
  a.record(1, 14, {ms(3), ms(5)}, true);
  EXPECT_EQ(a.compliant_collisions(), 1u);
  EXPECT_EQ(a.recorded(), 5u);
}

TEST(Config, Validation) {
  EXPECT_TRUE(MacConfig{}.validate().empty());
  MacConfig c;
  c.cw_min = 0;
  c.cw_max = 4;
  EXPECT_FALSE(c.validate().empty());
}
