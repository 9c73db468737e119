#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "swarmnet/engine.hpp"

using namespace swarmnet;

TEST(EventQueue, SingleEventPops) {
  EventQueue<int> q;
  q.schedule(SimTime::from_us(5), 1);
  auto e = q.pop();
  EXPECT_EQ(e.fire_at.us(), 5);
  EXPECT_EQ(q.now().us(), 5);
  EXPECT_TRUE(q.empty());
}

TEST(EventQueue, EqualTimesPopBySequence) {
  EventQueue<int> q;
  q.schedule_raw({SimTime::from_us(5), 1, 11});
  q.schedule_raw({SimTime::from_us(5), 0, 10});
  EXPECT_EQ(q.pop().seq, 0u);
  EXPECT_EQ(q.pop().seq, 1u);
}

TEST(EventQueue, PopsInTimeOrder) {
  EventQueue<int> q;
  for (int t : {7, 3, 5}) q.schedule(SimTime::from_us(t), t);
  std::vector<int> got;
  while (!q.empty()) got.push_back(q.pop().payload);
  EXPECT_EQ(got, (std::vector<int>{3, 5, 7}));
}

TEST(EventQueue, MatchesStableSortOracle) {
  RngStream rng(9, "queue-oracle");
  EventQueue<int> q;
  std::vector<std::pair<std::int64_t, int>> ref;
  for (int i = 0; i < 5000; ++i) {
    const auto t = rng.uniform_int(0, 300);  // many ties
    q.schedule(SimTime::from_us(t), i);
    ref.emplace_back(t, i);
  }
  std::stable_sort(ref.begin(), ref.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [t, id] : ref) {
    auto e = q.pop();
    ASSERT_EQ(e.fire_at.us(), t);
    ASSERT_EQ(e.payload, id);
  }
}

TEST(EventQueue, PastSchedulingIsAFault) {
  EventQueue<int> q;
  q.schedule(SimTime::from_us(10), 0);
  q.pop();
  EXPECT_THROW(q.schedule(SimTime::from_us(9), 1), HardFault);
  EXPECT_NO_THROW(q.schedule(SimTime::from_us(10), 1));
}

TEST(RunUntil, EmptyQueueAdvancesClock) {
  EventQueue<int> q;
  int handled = 0;
  auto out = run_until(q, SimTime::from_seconds(10), [&](auto&) { ++handled; }, [] { return false; });
  EXPECT_EQ(out, RunOutcome::kHorizonReached);
  EXPECT_EQ(q.now(), SimTime::from_seconds(10));
  EXPECT_EQ(handled, 0);
}

TEST(RunUntil, ProcessesEventsUpToHorizonInclusive) {
  EventQueue<int> q;
  q.schedule(SimTime::from_us(10), 1);
  q.schedule(SimTime::from_us(20), 2);
  q.schedule(SimTime::from_us(21), 3);
  std::vector<int> seen;
  run_until(q, SimTime::from_us(20), [&](auto& e) { seen.push_back(e.payload); }, [] { return false; });
  EXPECT_EQ(seen, (std::vector<int>{1, 2}));
  EXPECT_EQ(q.size(), 1u);
}

TEST(RunUntil, HandlersMayScheduleAtCurrentTime) {
  EventQueue<int> q;
  q.schedule(SimTime::from_us(5), 0);
  std::vector<int> seen;
  run_until(
      q, SimTime::from_us(100),
      [&](auto& e) {
        seen.push_back(e.payload);
        if (e.payload < 3) q.schedule(q.now(), e.payload + 1);
      },
      [] { return false; });
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3}));
}

TEST(RunUntil, StopRuleEndsEarly) {
  EventQueue<int> q;
  for (int i = 0; i < 10; ++i) q.schedule(SimTime::from_us(i), i);
  int handled = 0;
  auto out = run_until(q, SimTime::from_us(100), [&](auto&) { ++handled; }, [&] { return handled == 4; });
  EXPECT_EQ(out, RunOutcome::kStopRule);
  EXPECT_EQ(handled, 4);
}

TEST(SimTime, RejectsNegative) {
  EXPECT_THROW(SimTime::from_us(-1), HardFault);
  EXPECT_THROW(SimTime::from_us(3) - SimTime::from_us(4), HardFault);
  EXPECT_EQ(SimTime::from_ms(2.048).us(), 2048);
}

TEST(RngStream, SameKeySameSequence) {
  RngStream a(7, "mobility", 3), b(7, "mobility", 3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.uniform(), b.uniform());
}

TEST(RngStream, DifferentKeysDiverge) {
  RngStream a(7, "mobility", 3), b(7, "mobility", 4), c(7, "fading", 3), d(8, "mobility", 3);
  const double x = a.uniform();
  EXPECT_NE(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  EXPECT_NE(x, d.uniform());
}

TEST(RngStream, PointIntervalAndBounds) {
  RngStream r(1, "bounds");
  EXPECT_EQ(r.uniform(5.0, 5.0), 5.0);
  for (int i = 0; i < 1000; ++i) {
    const auto k = r.uniform_int(2, 4);
    ASSERT_GE(k, 2);
    ASSERT_LE(k, 4);
  }
  EXPECT_FALSE(r.bernoulli(0.0));
  EXPECT_TRUE(r.bernoulli(1.0));
}
