#include <map>
#include <sstream>

#include "capital/agents.hpp"
#include "capital/error.hpp"
#include "capital/groundings.hpp"
#include "capital/simulation.hpp"
#include "doctest.h"

using namespace capital;

namespace {

std::string ledger_text(const RolloutLog& log) {
  std::ostringstream out;
  write_ledger_jsonl(out, log.ledger);
  return out.str();
}

std::set<UnitId> alive_set(const UnitRegistry& r) {
  const auto ids = r.alive_ids();
  return {ids.begin(), ids.end()};
}

}  // namespace

TEST_CASE("trapdoor ledger has one line per unit per step alive") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  const auto log = run_episode(g, agent, SimulationConfig{11, 0, 10});
  std::map<UnitId, int> lines;
  for (const auto& e : log.ledger.entries()) ++lines[e.unit];
  CHECK(lines[UnitId(0)] == 10);
  for (const auto& u : log.registry.units()) CHECK(lines[u.id] == 10 - u.birth_time);
  CHECK(log.steps.size() == 10);
  CHECK(log.alive_after.size() == 10);
  CHECK(log.alive_after.back() == log.registry.alive_count());
}

TEST_CASE("simulation is deterministic in the seed") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  const auto a = run_episode(g, agent, SimulationConfig{5, 0, 12});
  const auto b = run_episode(g, agent, SimulationConfig{5, 0, 12});
  CHECK(ledger_text(a) == ledger_text(b));
  int differing = 0;
  for (std::uint64_t seed = 6; seed < 16; ++seed) {
    differing += ledger_text(run_episode(g, agent, SimulationConfig{seed, 0, 12})) != ledger_text(a);
  }
  CHECK(differing > 0);
  const auto other_episode = run_episode(g, agent, SimulationConfig{5, 1, 12});
  CHECK(other_episode.episode == 1);
}

TEST_CASE("spawned units follow the spawn law and join the parent's partition") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  std::size_t spawns = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Simulation sim(g, agent, SimulationConfig{seed, 0, 8});
    while (!sim.done()) {
      const auto before = sim.ledger().size();
      sim.step();
      const auto& entries = sim.ledger().entries();
      for (std::size_t i = before; i < entries.size(); ++i) {
        const auto& e = entries[i];
        for (UnitId child : e.spawned) {
          ++spawns;
          const auto& c = sim.registry().at(child);
          CHECK(c.history.origin() == e.next_obs);
          CHECK(c.birth_time == e.t + 1);
          CHECK(c.parent == e.unit);
          CHECK(c.history.events().empty() == (sim.now() == c.birth_time));
          CHECK(sim.partitioning().owner_of(child) == sim.partitioning().owner_of(e.unit));
        }
      }
      CHECK(check_partitioning(sim.partitioning(), alive_set(sim.registry())).valid());
    }
  }
  CHECK(spawns > 0);
}

TEST_CASE("unit ids are monotone across the simulation") {
  const auto g = make_market_grid(4, 4, 1);
  GreedyAgent agent(std::make_shared<const EnvironmentModel>(g.env));
  const auto log = run_episode(g, agent, SimulationConfig{1, 0, 5});
  const auto& units = log.registry.units();
  for (std::size_t i = 0; i < units.size(); ++i) {
    CHECK(units[i].id == UnitId(static_cast<std::uint32_t>(i)));
    if (units[i].parent) CHECK(units[i].parent->value < units[i].id.value);
  }
}

TEST_CASE("always-harvest population doubles") {
  // Every unit sits on the resource start cell and harvests, so each step
  // spawns one child per unit: m_t = 2^(t+1) after step t.
  const auto g = make_market_grid(4, 4, 1);
  GreedyAgent agent(std::make_shared<const EnvironmentModel>(g.env));
  const auto log = run_episode(g, agent, SimulationConfig{3, 0, 8});
  std::size_t expected = 1;
  for (std::size_t t = 0; t < 8; ++t) {
    expected *= 2;
    CHECK(log.alive_after[t] == expected);
  }
  const auto summary = summarize(log);
  CHECK(summary.final_population == 256);
  CHECK(summary.undiscounted_k == 3 * 255);
}

TEST_CASE("enlarged history projects onto each member's history") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  Simulation sim(g, agent, SimulationConfig{2, 0, 9});
  sim.run();
  const auto& part = sim.partitioning().partitions.front();
  const auto ctx = sim.context(part.id);
  REQUIRE(ctx.enlarged != nullptr);
  for (UnitId u : part.members) CHECK(ctx.enlarged->project(u) == sim.registry().at(u).history.events());
  for (std::size_t i = 0; i < ctx.size(); ++i) CHECK(ctx.histories[i] == &sim.registry().at(ctx.units[i]).history);
}

TEST_CASE("singleton scheme starts with one partition per unit") {
  const auto g = make_coupled_pair();
  RandomAgent agent;
  SimulationConfig config{4, 0, 10};
  config.scheme = PartitionScheme::kSingletons;
  Simulation sim(g, agent, config);
  CHECK(sim.partitioning().partitions.size() == 2);
  for (const auto& p : sim.partitioning().partitions) CHECK(agency(p) == 1);
  sim.run();
  for (const auto& e : sim.ledger().entries()) CHECK(sim.partitioning().owner_of(e.unit)->id == e.partition);
  std::set<PartitionId> acting;
  for (const auto& e : sim.ledger().entries()) acting.insert(e.partition);
  CHECK(acting.size() == 2);
}

TEST_CASE("death removes units from the partition") {
  auto g = make_trapdoor();
  g.env.add_death_observation(ObservationId(2));
  RandomAgent agent;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Simulation sim(g, agent, SimulationConfig{seed, 0, 6});
    sim.run();
    for (const auto& u : sim.registry().units()) {
      const bool trapped = !u.history.empty() && u.history.current_observation() == ObservationId(2);
      CHECK(u.alive == !trapped);
      if (trapped) CHECK(sim.partitioning().owner_of(u.id) == nullptr);
    }
    CHECK(check_partitioning(sim.partitioning(), alive_set(sim.registry())).valid());
  }
}

TEST_CASE("unit cap stops runaway growth") {
  const auto g = make_market_grid(4, 4, 1);
  GreedyAgent agent(std::make_shared<const EnvironmentModel>(g.env));
  SimulationConfig config{3, 0, 50};
  config.max_units = 1000;
  try {
    run_episode(g, agent, config);
    FAIL("expected the unit cap to trip");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
  config.horizon = 9;
  CHECK(run_episode(g, agent, config).registry.units().size() == 512);
}
