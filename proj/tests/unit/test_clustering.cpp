#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "properties.hpp"
#include "swarmnet/clustering.hpp"
#include "swarmnet/engine.hpp"

using namespace swarmnet;
using namespace swarmnet::clustering;

TEST(Connectivity, DegreeOverFleet) {
  EXPECT_EQ(normalized_connectivity(4, 5), 1.0);
  EXPECT_EQ(normalized_connectivity(0, 5), 0.0);
  EXPECT_NEAR(normalized_connectivity(3, 100), 3.0 / 99.0, 1e-15);
  EXPECT_NEAR(normalized_connectivity(3, 100), 0.0303, 5e-5);
  EXPECT_THROW(normalized_connectivity(0, 1), std::invalid_argument);
}

TEST(Candidacy, WeightedSum) {
  const Weights w;
  EXPECT_NEAR(candidacy_score(1, 1, 1, w), 1.0, 1e-15);
  EXPECT_EQ(candidacy_score(0, 0, 0, w), 0.0);
  EXPECT_NEAR(candidacy_score(0.5, 1.0, 0.2, w), 0.56, 1e-15);
  EXPECT_THROW(candidacy_score(1.1, 0, 0, w), HardFault);
  EXPECT_THROW(candidacy_score(0, -0.1, 0, w), HardFault);
}

TEST(Weights, MustSumToOne) {
  EXPECT_TRUE(Weights{}.validate().empty());
  const auto errs = Weights{0.5, 0.5, 0.5}.validate();
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0], "weights must sum to 1");
}

TEST(Election, SingleNodeHeadsItself) {
  NeighborGraph g(1);
  const auto e = elect_heads({make_score(0, 0.5, 0.5, 0.5, Weights{})}, g);
  ASSERT_EQ(e.clusters.size(), 1u);
  EXPECT_EQ(e.clusters[0].head, 0);
  EXPECT_TRUE(e.clusters[0].members.empty());
}

TEST(Election, HigherScoreHeadsPair) {
  NeighborGraph g(2);
  g.add_edge(0, 1);
  const auto e = elect_heads({{0, 0.5}, {1, 0.9}}, g);
  ASSERT_EQ(e.clusters.size(), 1u);
  EXPECT_EQ(e.clusters[0].head, 1);
  EXPECT_EQ(e.clusters[0].members, (std::vector<NodeId>{0}));
}

TEST(Election, TiesGoToLowerId) {
  NeighborGraph g(3);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  const auto e = elect_heads({{2, 0.7}, {1, 0.7}, {0, 0.1}}, g);
  EXPECT_EQ(e.clusters[0].head, 1);
  EXPECT_EQ(e.head_of.at(2), 1);
  EXPECT_EQ(e.head_of.at(0), 0);
}

TEST(Election, LineGraphAgainstOracle) {
  // 0-1-2-3-4-5 with known scores.
  NeighborGraph g(6);
  std::vector<std::vector<bool>> adj(6, std::vector<bool>(6, false));
  for (NodeId i = 0; i + 1 < 6; ++i) {
    g.add_edge(i, i + 1);
    adj[i][i + 1] = adj[i + 1][i] = true;
  }
  const std::vector<CandidacyScore> c{{0, 0.3}, {1, 0.8}, {2, 0.4}, {3, 0.6}, {4, 0.9}, {5, 0.2}};
  const auto e = elect_heads(c, g);
  const auto o = props::greedy_oracle(c, adj);
  ASSERT_EQ(e.clusters.size(), 2u);
  EXPECT_EQ(e.clusters[0].head, 4);
  EXPECT_EQ(e.clusters[0].members, (std::vector<NodeId>{3, 5}));
  EXPECT_EQ(e.clusters[1].head, 1);
  EXPECT_EQ(e.clusters[1].members, (std::vector<NodeId>{0, 2}));
  EXPECT_EQ(e.head_of, o.head_of);
}

TEST(Election, IneligibleNodesJoinButDoNotLead) {
  NeighborGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  std::vector<bool> eligible{true, false, true};
  const auto e = elect_heads({{0, 0.2}, {1, 0.9}, {2, 0.5}}, g, &eligible);
  EXPECT_EQ(e.clusters[0].head, 2);
  EXPECT_EQ(e.head_of.at(1), 2);
  EXPECT_EQ(e.head_of.at(0), 0);
  EXPECT_EQ(swarm_leader(e, &eligible), 2);
}

TEST(Election, MemberCap) {
  NeighborGraph g(5);
  for (NodeId i = 1; i < 5; ++i) g.add_edge(0, i);
  const auto e = elect_heads({{0, 0.9}, {1, 0.1}, {2, 0.1}, {3, 0.1}, {4, 0.2}}, g, nullptr, 2);
  EXPECT_EQ(e.clusters[0].members, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(e.head_of.at(4), 4);
  EXPECT_EQ(e.head_of.at(3), 3);
}

TEST(Election, RandomGraphsMatchOracle) {
  const auto r = props::election_oracle(500, 3);
  EXPECT_EQ(r.graphs, 500u);
  EXPECT_EQ(r.oracle_mismatches, 0u);
  EXPECT_EQ(r.permutation_failures, 0u);
  EXPECT_EQ(r.adjacent_heads, 0u);
  EXPECT_EQ(r.uncovered, 0u);
}

TEST(Leader, HighestScoringHead) {
  Election e;
  e.clusters = {{3, {}, 0.7}, {1, {}, 0.9}, {2, {}, 0.9}};
  EXPECT_EQ(swarm_leader(e), 1);
  EXPECT_FALSE(swarm_leader(Election{}).has_value());
}

TEST(Beacons, EvictionAfterLimit) {
  ClusterView v{1, {2, 3}, {}, 0.0};
  EXPECT_FALSE(on_beacon_missed(v, 2, 3));
  EXPECT_FALSE(on_beacon_missed(v, 2, 3));
  on_beacon_received(v, 2);
  EXPECT_EQ(v.missed_beacons[2], 0);
  EXPECT_FALSE(on_beacon_missed(v, 2, 3));
  EXPECT_FALSE(on_beacon_missed(v, 2, 3));
  EXPECT_TRUE(on_beacon_missed(v, 2, 3));
  EXPECT_EQ(v.members, (std::vector<NodeId>{3}));
  EXPECT_FALSE(on_beacon_missed(v, 2, 3));  // no longer a member
}

TEST(Abdication, BelowFractionOfElectionScore) {
  EXPECT_FALSE(maybe_abdicate(0.56, 0.8, 0.7));
  EXPECT_TRUE(maybe_abdicate(0.5599, 0.8, 0.7));
  EXPECT_FALSE(maybe_abdicate(0.8, 0.8, 0.7));
  EXPECT_FALSE(maybe_abdicate(0.0, 0.8, 0.0));
}

TEST(NextHop, SingleCandidateAlwaysChosen) {
  EXPECT_EQ(next_hop({{7, 0.0, 0.0, 1e4}}, 1000.0), 7);
  EXPECT_FALSE(next_hop({}, 1000.0).has_value());
}

TEST(NextHop, TrustDominates) {
  EXPECT_EQ(next_hop({{1, 0.2, 0.9, 100}, {2, 0.9, 0.9, 100}}, 1000.0), 2);
}

TEST(NextHop, MatchesExhaustiveMinimum) {
  RngStream rng(8, "next-hop");
  const RouteWeights u;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<RelayCandidate> c;
    const auto n = rng.uniform_int(1, 6);
    for (std::int64_t i = 0; i < n; ++i)
      c.push_back({static_cast<NodeId>(rng.uniform_int(0, 50)), rng.uniform(), rng.uniform(),
                   rng.uniform(0.0, 1500.0)});
    double best = std::numeric_limits<double>::infinity();
    NodeId want = 0;
    for (const auto& x : c) {
      const double cost = u.trust * (1 - x.trust) + u.link_quality * (1 - x.link_quality) +
                          u.distance * std::min(1.0, x.distance_m / 1100.0);
      if (cost < best || (cost == best && x.node < want)) {
        best = cost;
        want = x.node;
      }
    }
    ASSERT_EQ(next_hop(c, 1100.0, u), want);
  }
}

TEST(Graph, SymmetricEdges) {
  NeighborGraph g(4);
  g.add_edge(0, 3);
  g.add_edge(3, 0);
  g.add_edge(2, 2);
  EXPECT_TRUE(g.symmetric());
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(2), 0u);
  g.remove_edge(3, 0);
  EXPECT_FALSE(g.adjacent(0, 3));
}

TEST(LinkQuality, Ewma) {
  LinkQuality q;
  q.record(false);
  EXPECT_NEAR(q.value, 0.9, 1e-15);
  q.record(true, 0.5);
  EXPECT_NEAR(q.value, 0.95, 1e-15);
}
