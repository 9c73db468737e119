#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "swarmnet/batch.hpp"
#include "swarmnet/network.hpp"

using namespace swarmnet;

namespace {

const std::filesystem::path kScenarios = SWARMNET_SCENARIO_DIR;

Scenario golden(const char* file, double duration_s) {
  auto s = std::get<Scenario>(load_scenario(kScenarios / file));
  s.duration_s = duration_s;
  return s;
}

Scenario small(double duration_s = 20.0) {
  auto s = golden("benign-100.json", duration_s);
  s.node_count = 40;
  return s;
}

std::string dump(const RunReport& r) {
  auto j = to_json(r);
  j.erase("config");
  j.erase("config_digest");
  j.erase("scenario");
  return j.dump();
}

}  // namespace

TEST(Roster, FractionAndExplicitNodes) {
  auto s = golden("attack-100.json", 10);
  const auto a = assign_adversaries(s, 1);
  EXPECT_EQ(std::count(a.begin(), a.end(), 0), 20);
  EXPECT_EQ(a, assign_adversaries(s, 1));
  EXPECT_NE(a, assign_adversaries(s, 2));

  AdversaryGroup fixed;
  fixed.profile.kind = adversary::Kind::kGrayhole;
  fixed.profile.drop_prob = 0.5;
  fixed.nodes = {3, 7};
  s.adversaries.insert(s.adversaries.begin(), fixed);
  const auto b = assign_adversaries(s, 1);
  EXPECT_EQ(b[3], 0);
  EXPECT_EQ(b[7], 0);
  EXPECT_EQ(std::count(b.begin(), b.end(), 1), 20);
}

TEST(Run, ConservationHolds) {
  for (const char* f : {"benign-100.json", "attack-100.json"}) {
    auto s = golden(f, 30);
    const auto out = run_simulation(s, 4, RunOptions{nullptr, true});
    const auto& r = out.report;
    EXPECT_TRUE(r.conservation_ok) << f;
    EXPECT_EQ(r.sent, r.delivered + r.dropped + r.in_flight) << f;
    EXPECT_EQ(r.sent, out.ledger.sent());
    EXPECT_NO_THROW(out.ledger.audit());
    EXPECT_LE(r.energy.max_drift_j, 1e-9) << f;
    EXPECT_TRUE(r.overhead_cross_check) << f;
    EXPECT_EQ(r.overhead.overhead(), r.tally.overhead);
    EXPECT_EQ(r.mac.tiling_failures, 0u) << f;
    EXPECT_EQ(r.mac.compliant_collisions, 0u) << f;
    std::uint64_t by_reason = 0;
    for (const auto& [k, v] : r.drops_by_reason) by_reason += v;
    EXPECT_EQ(by_reason, r.dropped);
  }
}

TEST(Run, SameSeedIsByteIdentical) {
  const auto s = small();
  std::ostringstream t1, t2;
  const auto a = run_simulation(s, 9, RunOptions{&t1, false});
  const auto b = run_simulation(s, 9, RunOptions{&t2, false});
  EXPECT_EQ(to_json(a.report).dump(), to_json(b.report).dump());
  EXPECT_EQ(t1.str(), t2.str());
  std::ostringstream c1, c2;
  write_timeseries_csv(c1, a.timeseries);
  write_timeseries_csv(c2, b.timeseries);
  EXPECT_EQ(c1.str(), c2.str());
  EXPECT_NE(dump(run_simulation(s, 10).report), dump(a.report));
}

TEST(Run, TraceIsJsonLines) {
  std::ostringstream trace;
  run_simulation(small(3), 1, RunOptions{&trace, false});
  std::istringstream in(trace.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    ASSERT_TRUE(j.contains("t_us"));
    ++lines;
  }
  EXPECT_GT(lines, 100u);
}

TEST(Run, ZeroDropBlackholeMatchesBenign) {
  const auto benign = small();
  auto inert = benign;
  AdversaryGroup g;
  g.profile.kind = adversary::Kind::kBlackhole;
  g.profile.drop_prob = 0.0;
  g.fraction = 0.2;
  inert.adversaries.push_back(g);
  const auto a = run_simulation(benign, 2, RunOptions{nullptr, true});
  const auto b = run_simulation(inert, 2, RunOptions{nullptr, true});
  EXPECT_EQ(a.report.sent, b.report.sent);
  EXPECT_EQ(a.report.delivered, b.report.delivered);
  EXPECT_EQ(a.report.delay->mean_ms, b.report.delay->mean_ms);
  EXPECT_EQ(a.report.overhead.total(), b.report.overhead.total());
  EXPECT_EQ(a.report.energy.total_consumed_j, b.report.energy.total_consumed_j);
  std::ostringstream pa, pb;
  write_packets_csv(pa, a.ledger);
  write_packets_csv(pb, b.ledger);
  EXPECT_EQ(pa.str(), pb.str());
}

TEST(Run, BlackholesHurtWithoutTrust) {
  auto s = golden("attack-100.json", 30);
  s.trust.enabled = false;
  const auto r = run_simulation(s, 3).report;
  EXPECT_LT(*r.pdr, 0.5);
  EXPECT_GT(r.drops_by_reason.at("malicious-drop"), 0u);
}

TEST(Run, HalfDeadStopRule) {
  auto s = small(600);
  s.energy.initial_energy_j = 0.5;
  s.stop_rule = StopRule::kHalfDead;
  const auto r = run_simulation(s, 1).report;
  EXPECT_EQ(r.outcome, "stop-rule");
  ASSERT_TRUE(r.lifetime.half_death_s.has_value());
  EXPECT_LT(r.simulated_s, 600.0);
  EXPECT_LE(r.energy.alive_at_end, s.node_count / 2);
  EXPECT_TRUE(r.conservation_ok);
}

TEST(Run, RealCryptoAgreesWithModeled) {
  auto s = small(5);
  const auto modeled = run_simulation(s, 5).report;
  s.security.backend = security::BackendKind::kReal;
  const auto real = run_simulation(s, 5).report;
  EXPECT_EQ(real.crypto_backend, "real");
  EXPECT_EQ(real.delivered, modeled.delivered);
  EXPECT_EQ(real.trust.auth_failures, 0u);
}

TEST(Batch, SingleSeedHasZeroSpread) {
  const auto b = run_batch(small(5), {3});
  ASSERT_EQ(b.runs.size(), 1u);
  EXPECT_EQ(b.aggregate.at("pdr").n, 1u);
  EXPECT_EQ(b.aggregate.at("pdr").stddev, 0.0);
  EXPECT_EQ(b.aggregate.at("pdr").mean, *b.runs[0].report.pdr);
}

TEST(Batch, AggregateMatchesOracle) {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  std::size_t seen = 0;
  const auto b = run_batch(small(5), seeds, {}, [&](const RunOutput&) { ++seen; });
  EXPECT_EQ(seen, seeds.size());
  for (const auto& [name, agg] : b.aggregate) {
    std::vector<double> xs;
    for (const auto& run : b.runs) {
      const auto m = scalar_metrics(run.report);
      if (m.count(name)) xs.push_back(m.at(name));
    }
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    EXPECT_EQ(agg.n, xs.size()) << name;
    EXPECT_NEAR(agg.mean, mean, 1e-9 * std::max(1.0, std::abs(mean))) << name;
    if (xs.size() > 1) {
      EXPECT_NEAR(agg.stddev, std::sqrt(ss / static_cast<double>(xs.size() - 1)), 1e-9) << name;
    }
  }
  const auto j = to_json(b.aggregate, seeds, "small", "digest");
  EXPECT_EQ(j["seeds"].size(), 4u);
  EXPECT_TRUE(j["metrics"].contains("pdr"));
  EXPECT_FALSE(j["metrics"].contains("detection_rate"));  // no adversaries
}
