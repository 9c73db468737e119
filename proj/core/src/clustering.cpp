#include "swarmnet/clustering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace swarmnet::clustering {

std::vector<std::string> Weights::validate() const {
  std::vector<std::string> errors;
  for (double w : {trust, energy, connectivity}) {
    if (!(w >= 0.0 && w <= 1.0)) {
      errors.emplace_back("weights must each lie in [0, 1]");
      break;
    }
  }
  if (std::abs(trust + energy + connectivity - 1.0) > 1e-9)
    errors.emplace_back("weights must sum to 1");
  return errors;
}

double normalized_connectivity(std::size_t neighbors, std::size_t n_total) {
  if (n_total < 2) throw std::invalid_argument("connectivity needs a swarm of at least 2 nodes");
  return std::min(1.0, static_cast<double>(neighbors) / static_cast<double>(n_total - 1));
}

double candidacy_score(double t, double e, double c, const Weights& w) {
  for (double v : {t, e, c}) {
    if (!(v >= 0.0 && v <= 1.0)) throw HardFault("candidacy component outside [0, 1]");
  }
  // Summed in ascending order so the result does not depend on which
  // component carries which weight; with equal weights a permutation of
  // (T, E, C) then gives a bit-identical score and ties stay ties.
  std::array<double, 3> terms{w.trust * t, w.energy * e, w.connectivity * c};
  std::sort(terms.begin(), terms.end());
  return terms[0] + terms[1] + terms[2];
}

CandidacyScore make_score(NodeId node, double t, double e, double c, const Weights& w) {
  return CandidacyScore{node, candidacy_score(t, e, c, w), t, e, c};
}

void NeighborGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) return;
  auto insert = [](std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert(adj_.at(a), b);
  insert(adj_.at(b), a);
}

void NeighborGraph::remove_edge(NodeId a, NodeId b) {
  auto erase = [](std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
  };
  erase(adj_.at(a), b);
  erase(adj_.at(b), a);
}

bool NeighborGraph::adjacent(NodeId a, NodeId b) const {
  const auto& v = adj_.at(a);
  return std::binary_search(v.begin(), v.end(), b);
}

bool NeighborGraph::symmetric() const {
  for (std::size_t a = 0; a < adj_.size(); ++a) {
    for (NodeId b : adj_[a]) {
      if (!adjacent(b, static_cast<NodeId>(a))) return false;
    }
  }
  return true;
}

namespace {

bool ranks_before(const CandidacyScore& a, const CandidacyScore& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.node < b.node;
}

}  // namespace

Election elect_heads(const std::vector<CandidacyScore>& candidates, const NeighborGraph& locality,
                     const std::vector<bool>* eligible, std::size_t max_members) {
  std::vector<CandidacyScore> order = candidates;
  std::sort(order.begin(), order.end(), ranks_before);

  std::vector<bool> present(locality.id_space(), false);
  for (const auto& c : candidates) present.at(c.node) = true;

  Election out;
  auto assigned = [&](NodeId n) { return out.head_of.count(n) > 0; };
  auto is_eligible = [&](NodeId n) { return eligible == nullptr || (*eligible).at(n); };

  for (const auto& cand : order) {
    if (assigned(cand.node) || !is_eligible(cand.node)) continue;
    Cluster cluster{cand.node, {}, cand.score};
    out.head_of[cand.node] = cand.node;
    for (NodeId nb : locality.neighbors(cand.node)) {
      if (cluster.members.size() >= max_members) break;
      if (!present[nb] || assigned(nb)) continue;
      out.head_of[nb] = cand.node;
      cluster.members.push_back(nb);
    }
    out.clusters.push_back(std::move(cluster));
  }
  // Ineligible candidates nobody enrolled.
  for (const auto& cand : order) {
    if (assigned(cand.node)) continue;
    out.head_of[cand.node] = cand.node;
    out.clusters.push_back(Cluster{cand.node, {}, cand.score});
  }
  return out;
}

std::optional<NodeId> swarm_leader(const Election& e, const std::vector<bool>* eligible) {
  const Cluster* best = nullptr;
  auto better = [](const Cluster& a, const Cluster& b) {
    if (a.head_score != b.head_score) return a.head_score > b.head_score;
    return a.head < b.head;
  };
  for (int pass = 0; pass < 2 && best == nullptr; ++pass) {
    for (const auto& c : e.clusters) {
      if (pass == 0 && eligible != nullptr && !(*eligible).at(c.head)) continue;
      if (best == nullptr || better(c, *best)) best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->head;
}

bool on_beacon_missed(ClusterView& view, NodeId member, int limit) {
  auto it = std::find(view.members.begin(), view.members.end(), member);
  if (it == view.members.end()) return false;
  int& misses = view.missed_beacons[member];
  ++misses;
  if (misses < limit) return false;
  view.members.erase(it);
  view.missed_beacons.erase(member);
  return true;
}

void on_beacon_received(ClusterView& view, NodeId member) { view.missed_beacons[member] = 0; }

bool maybe_abdicate(double head_score, double score_at_election, double drop_fraction) {
  return head_score < drop_fraction * score_at_election;
}

double relay_cost(const RelayCandidate& c, double diagonal_m, const RouteWeights& u) {
  const double d = diagonal_m > 0.0 ? std::min(1.0, c.distance_m / diagonal_m) : 0.0;
  return u.trust * (1.0 - c.trust) + u.link_quality * (1.0 - c.link_quality) + u.distance * d;
}

std::optional<NodeId> next_hop(const std::vector<RelayCandidate>& candidates, double diagonal_m,
                               const RouteWeights& u) {
  std::optional<NodeId> best;
  double best_cost = 0.0;
  for (const auto& c : candidates) {
    const double cost = relay_cost(c, diagonal_m, u);
    if (!best || cost < best_cost || (cost == best_cost && c.node < *best)) {
      best = c.node;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace swarmnet::clustering
