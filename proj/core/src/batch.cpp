#include "swarmnet/batch.hpp"

namespace swarmnet {

std::map<std::string, double> scalar_metrics(const RunReport& r) {
  std::map<std::string, double> m;
  if (r.pdr) m["pdr"] = *r.pdr;
  if (r.delay) {
    m["delay_mean_ms"] = r.delay->mean_ms;
    m["delay_median_ms"] = r.delay->median_ms;
    m["delay_p95_ms"] = r.delay->p95_ms;
  }
  if (r.detection.detection_rate) m["detection_rate"] = *r.detection.detection_rate;
  if (r.detection.false_positive_rate) m["false_positive_rate"] = *r.detection.false_positive_rate;
  m["overhead_fraction"] = r.overhead_fraction;
  m["sent"] = static_cast<double>(r.sent);
  m["delivered"] = static_cast<double>(r.delivered);
  m["mean_residual_j"] = r.energy.mean_residual_j;
  m["alive_at_end"] = static_cast<double>(r.energy.alive_at_end);
  if (r.lifetime.first_death_s) m["first_death_s"] = *r.lifetime.first_death_s;
  if (r.lifetime.half_death_s) m["half_death_s"] = *r.lifetime.half_death_s;
  m["mean_heads"] = r.clusters.mean_heads;
  m["compliant_collisions"] = static_cast<double>(r.mac.compliant_collisions);
  return m;
}

std::map<std::string, metrics::MeanStd> aggregate(const std::vector<RunReport>& reports) {
  std::map<std::string, std::vector<double>> columns;
  for (const auto& r : reports) {
    for (const auto& [k, v] : scalar_metrics(r)) columns[k].push_back(v);
  }
  std::map<std::string, metrics::MeanStd> out;
  for (const auto& [k, xs] : columns) out[k] = metrics::mean_std(xs);
  return out;
}

BatchResult run_batch(const Scenario& s, const std::vector<std::uint64_t>& seeds,
                      const RunOptions& opts, const std::function<void(const RunOutput&)>& on_run) {
  BatchResult b;
  std::vector<RunReport> reports;
  for (auto seed : seeds) {
    auto out = run_simulation(s, seed, opts);
    const auto& r = out.report;
    if (!r.conservation_ok || r.sent != r.delivered + r.dropped + r.in_flight)
      throw HardFault("seed " + std::to_string(seed) + ": packet conservation violated");
    if (on_run) on_run(out);
    reports.push_back(r);
    b.runs.push_back(std::move(out));
  }
  b.aggregate = aggregate(reports);
  return b;
}

nlohmann::json to_json(const std::map<std::string, metrics::MeanStd>& agg,
                       const std::vector<std::uint64_t>& seeds, const std::string& scenario,
                       const std::string& config_digest) {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["config_digest"] = config_digest;
  j["seeds"] = seeds;
  auto& m = j["metrics"];
  m = nlohmann::json::object();
  for (const auto& [k, v] : agg) m[k] = {{"mean", v.mean}, {"stddev", v.stddev}, {"n", v.n}};
  return j;
}

}  // namespace swarmnet
