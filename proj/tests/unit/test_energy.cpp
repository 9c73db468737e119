#include <gtest/gtest.h>

#include "swarmnet/energy.hpp"
#include "swarmnet/engine.hpp"

using namespace swarmnet;
using namespace swarmnet::energy;

TEST(Ledger, IdleForZeroSeconds) {
  EnergyParams p;
  auto l = make_ledger(p, SimTime{}, RadioState::kIdle);
  transition(l, RadioState::kTx, SimTime{}, p);
  EXPECT_EQ(l.residual, 100.0);
  EXPECT_EQ(l.state, RadioState::kTx);
}

TEST(Ledger, OneSecondOfTx) {
  EnergyParams p;
  auto l = make_ledger(p, SimTime{}, RadioState::kTx);
  transition(l, RadioState::kIdle, SimTime::from_seconds(1), p);
  EXPECT_NEAR(l.consumed[0], 0.0174 * 3.0 * 1.0, 1e-15);
  EXPECT_NEAR(l.residual, 100.0 - 0.0522, 1e-12);
}

TEST(Ledger, DeathClampsAtZeroAtTheExactInstant) {
  EnergyParams p;
  p.initial_energy_j = 0.01;
  auto l = make_ledger(p, SimTime{}, RadioState::kTx);
  transition(l, RadioState::kIdle, SimTime::from_seconds(1), p);
  EXPECT_FALSE(l.alive);
  EXPECT_EQ(l.residual, 0.0);
  ASSERT_TRUE(l.died_at.has_value());
  // 0.01 J at 0.0522 W empties after 0.19157 s.
  EXPECT_NEAR(l.died_at->seconds(), 0.01 / 0.0522, 2e-6);
  EXPECT_NEAR(l.total_consumed(), 0.01, 1e-15);
}

TEST(Ledger, DeadNodeIgnoresTransitions) {
  EnergyParams p;
  p.initial_energy_j = 1e-6;
  auto l = make_ledger(p, SimTime{}, RadioState::kRx);
  transition(l, RadioState::kIdle, SimTime::from_seconds(1), p);
  ASSERT_FALSE(l.alive);
  transition(l, RadioState::kTx, SimTime::from_seconds(2), p);
  charge_processing(l, 0.01, SimTime::from_seconds(2), p);
  EXPECT_EQ(l.ignored_on_dead, 2u);
  EXPECT_EQ(l.residual, 0.0);
}

TEST(Ledger, ConservationOverRandomTimeline) {
  EnergyParams p;
  RngStream rng(4, "energy-timeline");
  auto l = make_ledger(p, SimTime{}, RadioState::kIdle);
  SimTime t;
  for (int i = 0; i < 10000; ++i) {
    t += SimTime::from_us(rng.uniform_int(0, 50000));
    transition(l, static_cast<RadioState>(rng.uniform_int(0, 3)), t, p);
    if (rng.bernoulli(0.1)) charge_processing(l, 0.0035, t, p);
  }
  EXPECT_NEAR(l.initial - l.residual - l.total_consumed(), 0.0, 1e-9);
}

TEST(Ledger, ProcessingBilledAtIdlePower) {
  EnergyParams p;
  auto l = make_ledger(p, SimTime{}, RadioState::kSleep);
  charge_processing(l, 2.0, SimTime{}, p);
  EXPECT_NEAR(l.consumed[2], 0.000273 * 3.0 * 2.0, 1e-15);
}

TEST(Normalized, Fractions) {
  EnergyParams p;
  auto l = make_ledger(p, SimTime{}, RadioState::kIdle);
  EXPECT_EQ(normalized_energy(l, p), 1.0);
  l.residual = 50.0;
  EXPECT_EQ(normalized_energy(l, p), 0.5);
  l.alive = false;
  EXPECT_EQ(normalized_energy(l, p), 0.0);
}

TEST(Params, Validation) {
  EXPECT_TRUE(EnergyParams{}.validate().empty());
  EXPECT_FALSE(EnergyParams{}.warnings().empty());  // default tx current is below rx
  EnergyParams bad;
  bad.initial_energy_j = 0.0;
  EXPECT_FALSE(bad.validate().empty());
}
