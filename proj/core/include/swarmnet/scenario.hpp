#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmnet/adversary.hpp"
#include "swarmnet/channel.hpp"
#include "swarmnet/clustering.hpp"
#include "swarmnet/energy.hpp"
#include "swarmnet/mac.hpp"
#include "swarmnet/mobility.hpp"
#include "swarmnet/security.hpp"
#include "swarmnet/trust.hpp"

namespace swarmnet {

struct MobilityConfig {
  mobility::Range speed{5.0, 15.0};  // m/s
  mobility::Range pause{0.0, 2.0};   // s
};

struct TrustConfig {
  bool enabled = true;
  trust::TrustParams params;
  double quorum = 0.5;
};

struct ClusteringConfig {
  clustering::Weights weights;
  clustering::RouteWeights route;
  double neighbor_margin_db = 6.0;  // cluster locality: mean rx >= sensitivity + margin
  double overlay_margin_db = 3.0;   // head-to-head links
  double election_interval_s = 5.0;
  double min_election_gap_s = 1.0;
  int beacon_loss_limit = 3;
  double abdication_fraction = 0.7;
  std::size_t max_members = 15;
};

struct SecurityConfig {
  security::BackendKind backend = security::BackendKind::kModeled;
  security::CryptoTiming timing;
};

struct TrafficConfig {
  std::size_t packet_bytes = 256;
  int packets_per_superframe = 1;
  double inter_cluster_fraction = 0.02;
  std::size_t queue_limit = 16;
  int watchdog_timeout_superframes = 5;
};

struct AdversaryGroup {
  adversary::AdversaryProfile profile;
  double fraction = 0.0;       // share of the fleet, used when `nodes` is empty
  std::vector<NodeId> nodes;   // explicit roster
};

enum class StopRule { kFixedHorizon, kHalfDead };

struct MetricsConfig {
  double sample_interval_s = 1.0;
  std::optional<double> detection_horizon_s;  // default: half the duration
};

struct Scenario {
  std::string name = "unnamed";
  std::size_t node_count = 100;
  mobility::Box area;
  double duration_s = 300.0;
  std::vector<std::uint64_t> seeds{1};
  MobilityConfig mobility;
  channel::ChannelParams channel;
  energy::EnergyParams energy;
  TrustConfig trust;
  ClusteringConfig clustering;
  mac::MacConfig mac;
  SecurityConfig security;
  TrafficConfig traffic;
  std::vector<AdversaryGroup> adversaries;
  MetricsConfig metrics;
  StopRule stop_rule = StopRule::kFixedHorizon;

  double detection_horizon() const { return metrics.detection_horizon_s.value_or(duration_s / 2.0); }
};

/// Itemized validation failure; each entry starts with a JSON-pointer path.
struct ConfigError {
  std::vector<std::string> errors;
  std::string summary() const;
};

using LoadResult = std::variant<Scenario, ConfigError>;

LoadResult parse_scenario(const nlohmann::json& doc);
LoadResult load_scenario(const std::filesystem::path& path);

/// Cross-field checks on a scenario assembled in code.
std::vector<std::string> validate(const Scenario& s);

/// Canonical effective configuration (all defaults materialized).
nlohmann::json to_json(const Scenario& s);

/// SHA-256 hex of the canonical configuration dump.
std::string config_digest(const Scenario& s);

std::string to_string(StopRule r);

}  // namespace swarmnet
