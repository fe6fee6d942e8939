#include <benchmark/benchmark.h>

#include <optional>
#include <random>
#include <vector>

#include "vrsim/channel.hpp"
#include "vrsim/engine.hpp"
#include "vrsim/matching.hpp"
#include "vrsim/rng.hpp"

namespace {

using namespace vrsim;

void BM_DeferredAcceptance(benchmark::State& state) {
  const int aps = static_cast<int>(state.range(0));
  const int players = static_cast<int>(state.range(1));
  auto rng = make_rng(1, 0);
  std::uniform_real_distribution<double> gain(0.0, 1.0);
  std::uniform_real_distribution<double> util(-0.2, 1.0);
  std::vector<double> gains(static_cast<std::size_t>(aps) * players);
  std::vector<double> utils(gains.size());
  for (auto& g : gains) g = gain(rng);
  for (auto& p : utils) p = util(rng);
  const auto profile = build_preferences(aps, players, gains, utils);
  MatchingParams mp;
  mp.allow_splitting = true;
  mp.sinr_threshold_linear = 1.5;
  auto sinr = [](int player, const ServiceMap& sm) {
    int n = 0;
    for (int s : sm.served)
      if (s == player) ++n;
    return static_cast<double>(n);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(deferred_acceptance(profile, mp, sinr));
  }
}
BENCHMARK(BM_DeferredAcceptance)->Args({16, 64})->Args({8, 32});

void BM_SinrEvaluation(benchmark::State& state) {
  ChannelParams p;
  const int aps = 16;
  std::vector<MmApState> ap_states(aps);
  std::vector<LinkState> links(aps);
  ServiceMap sm;
  sm.served.assign(aps, -1);
  auto rng = make_rng(2, 0);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int a = 0; a < aps; ++a) {
    ap_states[a].tx_power_w = 0.01;
    links[a].ap = a;
    links[a].player = 0;
    links[a].pathloss = unit(rng) * 1e-9;
    links[a].fading = unit(rng);
    links[a].tx_gain = unit(rng) * 10.0;
    links[a].rx_gain = unit(rng) * 10.0;
    sm.served[a] = a % 3 == 0 ? 0 : 1;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(sinr_linear(0, sm, links, ap_states, p));
  }
}
BENCHMARK(BM_SinrEvaluation);

void BM_SimulationEpoch(benchmark::State& state) {
  RunConfig cfg;
  cfg.workload.mean_hd_bits = 5e7;
  cfg.total_slots = 10000;
  std::optional<Simulation> sim;
  sim.emplace(cfg);
  for (auto _ : state) {
    if (sim->slot() + 100 > cfg.total_slots) {
      state.PauseTiming();
      sim.emplace(cfg);
      state.ResumeTiming();
    }
    for (int i = 0; i < 100; ++i) sim->step();  // one matching interval
  }
}
BENCHMARK(BM_SimulationEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
