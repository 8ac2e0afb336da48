#include <benchmark/benchmark.h>

#include "capital/agents.hpp"
#include "capital/entropy.hpp"
#include "capital/groundings.hpp"
#include "capital/policy.hpp"
#include "capital/propcheck.hpp"
#include "capital/random.hpp"
#include "capital/realizable.hpp"
#include "capital/simulation.hpp"

using namespace capital;

static void BM_PhiloxDraws(benchmark::State& state) {
  RandomStream rng(1, StreamPurpose::kTest);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxDraws);

static void BM_EnumerateStatic(benchmark::State& state) {
  const auto g = make_static_full_support();
  const UniformPolicy policy(g.env);
  const auto depth = static_cast<std::size_t>(state.range(0));
  std::size_t count = 0;
  for (auto _ : state) {
    count = enumerate_realizable_histories(policy, g.env, History(g.initial_observation), depth).size();
    benchmark::DoNotOptimize(count);
  }
  state.counters["histories"] = static_cast<double>(count);
}
BENCHMARK(BM_EnumerateStatic)->DenseRange(2, 6, 2);

static void BM_SupportGraph(benchmark::State& state) {
  const auto g = make_history_keyed();
  for (auto _ : state) {
    benchmark::DoNotOptimize(SupportGraph::build(g.env, History(g.initial_observation), state.range(0)).layers());
  }
}
BENCHMARK(BM_SupportGraph)->Arg(10)->Arg(20);

static DecisionContext market_context(const EnvironmentModel& env, std::vector<History>& hs) {
  DecisionContext ctx;
  for (std::uint32_t i = 0; i < hs.size(); ++i) {
    ctx.units.push_back(UnitId(i));
    ctx.histories.push_back(&hs[i]);
    ctx.available.push_back(env.available_actions(hs[i]));
  }
  return ctx;
}

static void BM_JointEntropyExact(benchmark::State& state) {
  const auto g = make_market_grid(6, 6, 1);
  std::vector<History> hs;
  for (std::int64_t i = 0; i < state.range(0); ++i) hs.emplace_back(ObservationId(static_cast<std::uint32_t>(7 * i % 36)));
  const auto ctx = market_context(g.env, hs);
  const RandomAgent agent;
  for (auto _ : state) benchmark::DoNotOptimize(joint_entropy_exact(agent, g.env, ctx).joint);
}
BENCHMARK(BM_JointEntropyExact)->DenseRange(1, 5);

static void BM_JointEntropyMonteCarlo(benchmark::State& state) {
  const auto g = make_market_grid(6, 6, 1);
  std::vector<History> hs;
  for (std::uint32_t i = 0; i < 4; ++i) hs.emplace_back(ObservationId(7 * i % 36));
  const auto ctx = market_context(g.env, hs);
  const RandomAgent agent;
  RandomStream rng(3, StreamPurpose::kEstimator);
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_entropy_mc(agent, g.env, ctx, static_cast<std::size_t>(state.range(0)), rng).estimate);
  }
}
BENCHMARK(BM_JointEntropyMonteCarlo)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_EpisodeMarketGrid(benchmark::State& state) {
  const auto g = make_market_grid(8, 8, 0);
  RandomAgent agent;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(g, agent, SimulationConfig{seed++, 0, state.range(0)}).ledger.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EpisodeMarketGrid)->Arg(100)->Arg(1000);

static void BM_QEpisodeMarketGrid(benchmark::State& state) {
  const auto g = make_market_grid(4, 4, 0);
  QAgent agent(QLearningParams{});
  std::uint32_t episode = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(g, agent, SimulationConfig{1, episode++, 200}).ledger.size());
  }
}
BENCHMARK(BM_QEpisodeMarketGrid);

static void BM_CheckAllTrapdoor(benchmark::State& state) {
  const auto g = make_trapdoor();
  const RandomAgent agent;
  CheckConfig config;
  config.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(check_all(g, agent, config).reports.size());
}
BENCHMARK(BM_CheckAllTrapdoor)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
