#pragma once

// Multi-seed runs and their aggregate (mean and sample stddev per metric).

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swarmnet/metrics.hpp"
#include "swarmnet/network.hpp"

namespace swarmnet {

struct BatchResult {
  std::vector<RunOutput> runs;
  std::map<std::string, metrics::MeanStd> aggregate;  // metric name -> over seeds
};

/// Scalar metrics pulled from one report for aggregation. Absent values
/// (e.g. detection rate without adversaries) are left out.
std::map<std::string, double> scalar_metrics(const RunReport& r);

std::map<std::string, metrics::MeanStd> aggregate(const std::vector<RunReport>& reports);

/// Runs every seed in order. `on_run` (optional) sees each output as soon as
/// it is ready. Throws HardFault if any run breaks packet conservation.
BatchResult run_batch(const Scenario& s, const std::vector<std::uint64_t>& seeds,
                      const RunOptions& opts = {},
                      const std::function<void(const RunOutput&)>& on_run = {});

nlohmann::json to_json(const std::map<std::string, metrics::MeanStd>& agg,
                       const std::vector<std::uint64_t>& seeds, const std::string& scenario,
                       const std::string& config_digest);

}  // namespace swarmnet
