#include <benchmark/benchmark.h>

#include <filesystem>

#include <spdlog/spdlog.h>

#include "swarmnet/channel.hpp"
#include "swarmnet/clustering.hpp"
#include "swarmnet/engine.hpp"
#include "swarmnet/network.hpp"
#include "swarmnet/security.hpp"

using namespace swarmnet;

static void BM_EventQueue(benchmark::State& state) {
  const auto n = state.range(0);
  RngStream rng(1, "bench-queue");
  std::vector<std::int64_t> times(static_cast<std::size_t>(n));
  for (auto& t : times) t = rng.uniform_int(0, 1'000'000);
  for (auto _ : state) {
    EventQueue<std::uint32_t> q;
    for (std::int64_t i = 0; i < n; ++i) q.schedule(SimTime::from_us(times[static_cast<std::size_t>(i)]), 0);
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueue)->Arg(1 << 10)->Arg(1 << 16);

static void BM_FadingDraw(benchmark::State& state) {
  channel::ChannelParams p;
  RngStream rng(1, "bench-fading");
  for (auto _ : state) benchmark::DoNotOptimize(channel::fading_gain(rng, 120.0, p));
}
BENCHMARK(BM_FadingDraw);

static void BM_SealOpen(benchmark::State& state) {
  const auto kind = static_cast<security::BackendKind>(state.range(0));
  auto b = security::make_backend(kind, 2, 1);
  const auto key = *b->derive_session_key(0, 1);
  const security::Bytes plain(245, 0x42);
  std::uint64_t counter = 0;
  for (auto _ : state) {
    const auto env = b->seal(key, security::make_nonce(0, counter++), plain, {});
    benchmark::DoNotOptimize(b->open(key, env, {}));
  }
  state.SetLabel(security::to_string(kind));
}
BENCHMARK(BM_SealOpen)
    ->Arg(static_cast<int>(security::BackendKind::kModeled))
    ->Arg(static_cast<int>(security::BackendKind::kReal));

static void BM_SignVerify(benchmark::State& state) {
  const auto kind = static_cast<security::BackendKind>(state.range(0));
  auto b = security::make_backend(kind, 2, 1);
  const security::Bytes msg(41, 0x17);
  for (auto _ : state) {
    const auto sig = b->sign(0, msg);
    benchmark::DoNotOptimize(b->verify(0, msg, sig));
  }
  state.SetLabel(security::to_string(kind));
}
BENCHMARK(BM_SignVerify)
    ->Arg(static_cast<int>(security::BackendKind::kModeled))
    ->Arg(static_cast<int>(security::BackendKind::kReal));

static void BM_Election(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(2, "bench-election");
  clustering::NeighborGraph g(n);
  std::vector<clustering::CandidacyScore> cands;
  for (std::size_t a = 0; a < n; ++a) {
    cands.push_back(clustering::make_score(static_cast<NodeId>(a), rng.uniform(), rng.uniform(),
                                           rng.uniform(), clustering::Weights{}));
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.bernoulli(0.3)) g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  for (auto _ : state) benchmark::DoNotOptimize(clustering::elect_heads(cands, g, nullptr, 15));
}
BENCHMARK(BM_Election)->Arg(100)->Arg(1000);

static void BM_Simulation(benchmark::State& state) {
  auto s = std::get<Scenario>(
      load_scenario(std::filesystem::path(SWARMNET_SCENARIO_DIR) / "attack-100.json"));
  s.duration_s = 10.0;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(s, seed++).report.delivered);
  state.SetLabel("100 nodes, 10 s simulated");
}
BENCHMARK(BM_Simulation)->Unit(benchmark::kMillisecond);
int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
