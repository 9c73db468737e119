#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swarmnet/types.hpp"

namespace swarmnet::clustering {

/// Candidacy weights (trust, energy, connectivity); must sum to 1.
struct Weights {
  double trust = 0.4;
  double energy = 0.3;
  double connectivity = 0.3;

  std::vector<std::string> validate() const;
};

struct CandidacyScore {
  NodeId node = 0;
  double score = 0.0;
  double trust = 0.0;
  double energy = 0.0;
  double connectivity = 0.0;
};

/// Node degree over (N - 1). Throws std::invalid_argument when N < 2.
double normalized_connectivity(std::size_t neighbors, std::size_t n_total);

/// S = wT*T + wE*E + wC*C. Components outside [0,1] are an upstream
/// normalization bug and raise HardFault.
double candidacy_score(double t, double e, double c, const Weights& w);

CandidacyScore make_score(NodeId node, double t, double e, double c, const Weights& w);

/// Undirected one-hop locality graph over node ids.
class NeighborGraph {
 public:
  NeighborGraph() = default;
  explicit NeighborGraph(std::size_t id_space) : adj_(id_space) {}

  void add_edge(NodeId a, NodeId b);
  void remove_edge(NodeId a, NodeId b);
  bool adjacent(NodeId a, NodeId b) const;
  /// Sorted ascending.
  const std::vector<NodeId>& neighbors(NodeId a) const { return adj_.at(a); }
  std::size_t degree(NodeId a) const { return adj_.at(a).size(); }
  std::size_t id_space() const { return adj_.size(); }
  bool symmetric() const;

 private:
  std::vector<std::vector<NodeId>> adj_;
};

struct Cluster {
  NodeId head = 0;
  std::vector<NodeId> members;  // registration order
  double head_score = 0.0;
};

struct Election {
  std::vector<Cluster> clusters;  // in election order
  std::map<NodeId, NodeId> head_of;  // every candidate -> its head (heads map to themselves)
};

/// Greedy election: repeatedly take the unassigned eligible candidate with the
/// highest score (ties to the lower id) as head and enrol all its unassigned
/// neighbours. Candidates never enrolled become singleton heads.
/// `eligible`, when given, is indexed by NodeId. A head enrols at most
/// `max_members` neighbours (ascending id); the rest stay unassigned.
Election elect_heads(const std::vector<CandidacyScore>& candidates, const NeighborGraph& locality,
                     const std::vector<bool>* eligible = nullptr,
                     std::size_t max_members = static_cast<std::size_t>(-1));

/// The head with the highest score (lower id on ties), among `eligible` heads
/// when a mask is supplied and at least one head passes it.
std::optional<NodeId> swarm_leader(const Election& e, const std::vector<bool>* eligible = nullptr);

/// Member-side beacon bookkeeping kept by the head.
struct ClusterView {
  NodeId head = 0;
  std::vector<NodeId> members;
  std::map<NodeId, int> missed_beacons;
  double head_score_threshold = 0.0;
};

/// Returns true when the member hit `limit` consecutive misses and was evicted.
bool on_beacon_missed(ClusterView& view, NodeId member, int limit);
void on_beacon_received(ClusterView& view, NodeId member);

/// True when the head's current score fell below drop_fraction x its score at
/// election time.
bool maybe_abdicate(double head_score, double score_at_election, double drop_fraction);

/// Delivery-ratio estimate per link: EWMA over frame outcomes.
struct LinkQuality {
  double value = 1.0;
  void record(bool delivered, double weight = 0.1) {
    value = (1.0 - weight) * value + weight * (delivered ? 1.0 : 0.0);
  }
};

struct RouteWeights {
  double trust = 0.5;
  double link_quality = 0.3;
  double distance = 0.2;
};

struct RelayCandidate {
  NodeId node = 0;
  double trust = 0.5;         // E[T] held by the forwarder
  double link_quality = 1.0;  // [0,1]
  double distance_m = 0.0;
};

double relay_cost(const RelayCandidate& c, double diagonal_m, const RouteWeights& u);

/// Minimum-cost relay; ties go to the lower id. Empty when no candidate.
std::optional<NodeId> next_hop(const std::vector<RelayCandidate>& candidates, double diagonal_m,
                               const RouteWeights& u = {});

}  // namespace swarmnet::clustering
