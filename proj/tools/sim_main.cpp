// sim: command line front end for scenario runs.
//
//   sim run --scenario <path> [--seed N | --seeds N..M] [--duration S]
//           [--out <dir>] [--format json|csv] [--trace]
//           [--crypto real|modeled] [--trust on|off] [--expect metric>=x ...]
//
// Exit codes: 0 ok, 1 config error, 2 runtime assertion, 3 expectation failed.

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include "swarmnet/batch.hpp"
#include "swarmnet/scenario.hpp"

namespace fs = std::filesystem;
using namespace swarmnet;

namespace {

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2, kExpectation = 3 };

struct Args {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::optional<double> duration;
  std::string out = "out";
  std::string format = "json";
  bool trace = false;
  std::string crypto;
  std::string trust;
  std::vector<std::string> expect;
};

void init_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("SIM_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
  spdlog::set_pattern("[%l] %v");
}

std::optional<std::vector<std::uint64_t>> parse_seed_range(const std::string& text) {
  static const std::regex re(R"((\d+)\.\.(\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  const auto lo = std::stoull(m[1]);
  const auto hi = std::stoull(m[2]);
  if (hi < lo) return std::nullopt;
  std::vector<std::uint64_t> out;
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

struct Expectation {
  std::string metric;
  bool at_least = true;
  double bound = 0.0;
};

std::optional<Expectation> parse_expectation(const std::string& text) {
  static const std::regex re(R"(([a-z_0-9]+)(>=|<=)([-+0-9.eE]+))");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  return Expectation{m[1], m[2] == ">=", std::stod(m[3])};
}

int run(const Args& a) {
  auto loaded = load_scenario(a.scenario);
  if (auto* err = std::get_if<ConfigError>(&loaded)) {
    std::cerr << "config error in " << a.scenario << ":\n" << err->summary() << '\n';
    return kConfig;
  }
  Scenario s = std::get<Scenario>(std::move(loaded));
  if (a.duration) s.duration_s = *a.duration;
  if (!a.crypto.empty()) s.security.backend = *security::parse_backend(a.crypto);
  if (!a.trust.empty()) s.trust.enabled = a.trust == "on";

  std::vector<std::uint64_t> seeds = s.seeds;
  if (a.seed) seeds = {*a.seed};
  if (!a.seeds.empty()) {
    auto r = parse_seed_range(a.seeds);
    if (!r) {
      std::cerr << "config error: --seeds expects N..M with N <= M\n";
      return kConfig;
    }
    seeds = *r;
  }
  std::vector<Expectation> expectations;
  for (const auto& e : a.expect) {
    auto x = parse_expectation(e);
    if (!x) {
      std::cerr << "config error: bad --expect '" << e << "' (use metric>=x or metric<=x)\n";
      return kConfig;
    }
    expectations.push_back(*x);
  }
  if (auto errs = validate(s); !errs.empty()) {
    std::cerr << "config error:\n" << ConfigError{errs}.summary() << '\n';
    return kConfig;
  }

  fs::create_directories(a.out);
  const fs::path out(a.out);
  BatchResult batch;
  for (auto seed : seeds) {
    RunOptions opts;
    std::ofstream trace;
    if (a.trace) {
      trace.open(out / ("trace-" + std::to_string(seed) + ".jsonl"));
      opts.trace = &trace;
    }
    opts.keep_ledger = true;
    auto part = run_batch(s, {seed}, opts, [&](const RunOutput& o) {
      const auto& r = o.report;
      if (a.format == "csv") {
        std::ofstream(out / ("report-" + std::to_string(seed) + ".csv")) << to_csv(r);
      } else {
        std::ofstream(out / ("report-" + std::to_string(seed) + ".json")) << to_json(r).dump(2) << '\n';
      }
      std::ofstream ts(out / ("timeseries-" + std::to_string(seed) + ".csv"));
      write_timeseries_csv(ts, o.timeseries);
      std::ofstream pk(out / ("packets-" + std::to_string(seed) + ".csv"));
      write_packets_csv(pk, o.ledger);
      spdlog::info("seed {} done: pdr {:.4f}, overhead {:.4f}", seed, r.pdr.value_or(0.0),
                   r.overhead_fraction);
    });
    for (auto& run : part.runs) {
      run.ledger = {};
      run.timeseries.clear();
      batch.runs.push_back(std::move(run));
    }
  }
  std::vector<RunReport> reports;
  for (const auto& r : batch.runs) reports.push_back(r.report);
  const auto agg = aggregate(reports);
  std::ofstream(out / "aggregate.json") << to_json(agg, seeds, s.name, config_digest(s)).dump(2) << '\n';

  for (const auto& [k, v] : agg) std::cout << k << ": " << v.mean << " +- " << v.stddev << '\n';

  int rc = kOk;
  for (const auto& e : expectations) {
    auto it = agg.find(e.metric);
    const bool ok = it != agg.end() && (e.at_least ? it->second.mean >= e.bound : it->second.mean <= e.bound);
    if (!ok) {
      std::cerr << "expectation failed: " << e.metric << (e.at_least ? " >= " : " <= ") << e.bound
                << " (got " << (it == agg.end() ? std::string("n/a") : std::to_string(it->second.mean))
                << ")\n";
      rc = kExpectation;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"UAV swarm network simulator"};
  app.require_subcommand(1);
  Args a;
  auto* run_cmd = app.add_subcommand("run", "run a scenario for one or more seeds");
  run_cmd->add_option("--scenario", a.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run_cmd->add_option("--seed", a.seed, "single seed");
  run_cmd->add_option("--seeds", a.seeds, "inclusive seed range N..M")->excludes(seed_opt);
  run_cmd->add_option("--duration", a.duration, "override duration (s)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", a.out, "output directory");
  run_cmd->add_option("--format", a.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_flag("--trace", a.trace, "write a JSON-lines event trace per seed");
  run_cmd->add_option("--crypto", a.crypto, "crypto backend")->check(CLI::IsMember({"real", "modeled"}));
  run_cmd->add_option("--trust", a.trust, "trust layer")->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--expect", a.expect, "aggregate check, e.g. pdr>=0.85 (exit 3 on failure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  try {
    return run(a);
  } catch (const HardFault& e) {
    std::cerr << "runtime assertion: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
