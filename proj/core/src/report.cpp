#include "swarmnet/report.hpp"

#include <iomanip>
#include <sstream>

namespace swarmnet {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(); }

json detection_json(const metrics::DetectionSummary& d) {
  return {{"malicious", d.malicious},
          {"flagged_malicious", d.flagged_malicious},
          {"benign", d.benign},
          {"flagged_benign", d.flagged_benign},
          {"detection_rate", opt(d.detection_rate)},
          {"false_positive_rate", opt(d.false_positive_rate)}};
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    os << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

json to_json(const RunReport& r) {
  json j;
  j["seed"] = r.seed;
  j["scenario"] = r.scenario;
  j["config_digest"] = r.config_digest;
  j["config"] = r.config;
  j["trust_enabled"] = r.trust_enabled;
  j["crypto_backend"] = r.crypto_backend;
  j["simulated_s"] = r.simulated_s;
  j["outcome"] = r.outcome;

  j["packets"] = {{"sent", r.sent},
                  {"delivered", r.delivered},
                  {"dropped", r.dropped},
                  {"in_flight", r.in_flight},
                  {"drops_by_reason", r.drops_by_reason},
                  {"conservation_ok", r.conservation_ok}};
  j["pdr"] = opt(r.pdr);
  if (r.delay)
    j["delay_ms"] = {{"mean", r.delay->mean_ms}, {"median", r.delay->median_ms}, {"p95", r.delay->p95_ms}};
  else
    j["delay_ms"] = {{"mean", nullptr}, {"median", nullptr}, {"p95", nullptr}};

  j["detection"] = detection_json(r.detection);
  j["detection"]["horizon_s"] = r.detection_horizon_s;
  j["detection_at_end"] = detection_json(r.detection_at_end);
  j["detection_rate"] = opt(r.detection.detection_rate);
  j["false_positive_rate"] = opt(r.detection.false_positive_rate);

  j["overhead_fraction"] = r.overhead_fraction;
  j["overhead_bytes"] = {{"beacon", r.overhead.beacon},
                         {"schedule", r.overhead.schedule},
                         {"trust_update", r.overhead.trust_update},
                         {"security_trailer", r.overhead.security_trailer},
                         {"data", r.overhead.data},
                         {"frames", r.overhead.frames},
                         {"overhead_total", r.overhead.overhead()},
                         {"all_total", r.overhead.total()},
                         {"per_frame_overhead_total", r.tally.overhead},
                         {"per_frame_all_total", r.tally.total},
                         {"cross_check_ok", r.overhead_cross_check}};

  j["lifetime_s"] = {{"first_death", opt(r.lifetime.first_death_s)},
                     {"half_death", opt(r.lifetime.half_death_s)}};
  j["energy"] = {{"mean_residual_j", r.energy.mean_residual_j},
                 {"min_residual_j", r.energy.min_residual_j},
                 {"max_residual_j", r.energy.max_residual_j},
                 {"total_consumed_j", r.energy.total_consumed_j},
                 {"consumed_by_state_j",
                  {{"tx", r.energy.consumed_by_state_j[0]},
                   {"rx", r.energy.consumed_by_state_j[1]},
                   {"idle", r.energy.consumed_by_state_j[2]},
                   {"sleep", r.energy.consumed_by_state_j[3]}}},
                 {"max_drift_j", r.energy.max_drift_j},
                 {"alive_at_end", r.energy.alive_at_end}};
  j["mac"] = {{"superframes", r.mac.superframes},
              {"tiling_failures", r.mac.tiling_failures},
              {"scheduled_transmissions", r.mac.scheduled_transmissions},
              {"compliant_collisions", r.mac.compliant_collisions},
              {"contention_transmissions", r.mac.contention_transmissions},
              {"contention_collisions", r.mac.contention_collisions},
              {"violations_suppressed", r.mac.violations_suppressed},
              {"fading_losses", r.mac.fading_losses}};
  j["trust"] = {{"positive_observations", r.trust.positive_observations},
                {"negative_observations", r.trust.negative_observations},
                {"trust_update_frames", r.trust.trust_update_frames},
                {"auth_failures", r.trust.auth_failures}};
  j["clusters"] = {{"elections", r.clusters.elections},
                   {"mean_heads", r.clusters.mean_heads},
                   {"mean_cluster_size", r.clusters.mean_cluster_size},
                   {"evictions", r.clusters.evictions}};
  return j;
}

std::string to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "key,value\n";
  json j = to_json(r);
  j.erase("config");
  flatten(j, "", os);
  return os.str();
}

void write_timeseries_csv(std::ostream& os, const std::vector<TimeseriesRow>& rows) {
  os << "t_s,alive,heads,sent,delivered,dropped,pdr,mean_residual_j,flagged_malicious,flagged_benign,"
        "overhead_fraction\n";
  for (const auto& r : rows) {
    const double pdr = r.sent ? static_cast<double>(r.delivered) / static_cast<double>(r.sent) : 0.0;
    os << r.t_s << ',' << r.alive << ',' << r.heads << ',' << r.sent << ',' << r.delivered << ','
       << r.dropped << ',' << std::setprecision(6) << pdr << ',' << r.mean_residual_j << ','
       << r.flagged_malicious << ',' << r.flagged_benign << ',' << r.overhead_fraction << '\n';
  }
}

void write_packets_csv(std::ostream& os, const metrics::PacketLedger& ledger) {
  os << "id,origin,destination,sent_us,delivered_us,drop_reason,bytes,hops\n";
  for (const auto& p : ledger.records()) {
    os << p.id << ',' << p.origin << ',' << p.destination << ',' << p.sent_at.us() << ',';
    if (p.delivered_at) os << p.delivered_at->us();
    os << ',';
    if (p.drop_reason) os << metrics::to_string(*p.drop_reason);
    os << ',' << p.bytes << ',' << p.hops << '\n';
  }
}

}  // namespace swarmnet
