#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmnet/metrics.hpp"

namespace swarmnet {

struct EnergySummary {
  double mean_residual_j = 0.0;
  double min_residual_j = 0.0;
  double max_residual_j = 0.0;
  double total_consumed_j = 0.0;
  std::array<double, 4> consumed_by_state_j{};  // tx, rx, idle, sleep
  double max_drift_j = 0.0;  // |initial - residual - consumed|, worst node
  std::size_t alive_at_end = 0;
};

struct MacSummary {
  std::uint64_t superframes = 0;
  std::uint64_t tiling_failures = 0;
  std::uint64_t scheduled_transmissions = 0;
  std::uint64_t compliant_collisions = 0;
  std::uint64_t contention_transmissions = 0;
  std::uint64_t contention_collisions = 0;
  std::uint64_t violations_suppressed = 0;
  std::uint64_t fading_losses = 0;
};

struct TrustSummary {
  std::uint64_t positive_observations = 0;
  std::uint64_t negative_observations = 0;
  std::uint64_t trust_update_frames = 0;
  std::uint64_t auth_failures = 0;
};

struct ClusterSummary {
  std::uint64_t elections = 0;
  double mean_heads = 0.0;
  double mean_cluster_size = 0.0;
  std::uint64_t evictions = 0;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::string scenario;
  std::string config_digest;
  nlohmann::json config;
  bool trust_enabled = true;
  std::string crypto_backend;
  double simulated_s = 0.0;
  std::string outcome;

  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  std::map<std::string, std::uint64_t> drops_by_reason;
  bool conservation_ok = false;

  std::optional<double> pdr;
  std::optional<metrics::DelayStats> delay;
  metrics::DetectionSummary detection;  // at the detection horizon
  double detection_horizon_s = 0.0;
  metrics::DetectionSummary detection_at_end;

  double overhead_fraction = 0.0;
  metrics::OverheadCounters overhead;
  metrics::FrameTally tally;
  bool overhead_cross_check = false;

  metrics::Lifetime lifetime;
  EnergySummary energy;
  MacSummary mac;
  TrustSummary trust;
  ClusterSummary clusters;
};

struct TimeseriesRow {
  double t_s = 0.0;
  std::size_t alive = 0;
  std::size_t heads = 0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  double mean_residual_j = 0.0;
  std::size_t flagged_malicious = 0;
  std::size_t flagged_benign = 0;
  double overhead_fraction = 0.0;
};

nlohmann::json to_json(const RunReport& r);

/// Flat key,value rendering of the JSON report (dotted keys).
std::string to_csv(const RunReport& r);

void write_timeseries_csv(std::ostream& os, const std::vector<TimeseriesRow>& rows);
void write_packets_csv(std::ostream& os, const metrics::PacketLedger& ledger);

}  // namespace swarmnet
