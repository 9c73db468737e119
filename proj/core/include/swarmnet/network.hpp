#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "swarmnet/metrics.hpp"
#include "swarmnet/report.hpp"
#include "swarmnet/scenario.hpp"

namespace swarmnet {

struct RunOptions {
  std::ostream* trace = nullptr;  // JSON lines, one event per line
  bool keep_ledger = false;       // copy the packet ledger into the output
};

struct RunOutput {
  RunReport report;
  std::vector<TimeseriesRow> timeseries;
  metrics::PacketLedger ledger;  // filled when keep_ledger is set
};

/// Which nodes are malicious and with which profile (index into
/// s.adversaries), or -1 for benign. Explicit rosters are honoured first;
/// fractional groups draw from the remaining ids with a seeded shuffle.
std::vector<int> assign_adversaries(const Scenario& s, std::uint64_t seed);

/// Runs one seed of a scenario to its horizon (or stop rule). Throws
/// HardFault when a runtime invariant breaks.
RunOutput run_simulation(const Scenario& s, std::uint64_t seed, const RunOptions& opts = {});

}  // namespace swarmnet
