#include "capital/agents.hpp"
#include "capital/groundings.hpp"
#include "capital/propcheck.hpp"
#include "capital/realizable.hpp"
#include "capital/simulation.hpp"
#include "doctest.h"

using namespace capital;

namespace {

Verdict verdict(const CheckRun& run, Proposition p) {
  const auto* r = run.find(p);
  REQUIRE(r != nullptr);
  return r->status;
}

CheckConfig config(std::uint64_t seed, std::size_t t_max = 10) {
  CheckConfig c;
  c.seed = seed;
  c.t_max = t_max;
  c.horizon = 10;
  return c;
}

}  // namespace

TEST_CASE("trapdoor suite witnesses its declared propositions") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  const auto run = check_all(g, agent, config(1));
  CHECK(run.errors.empty());
  REQUIRE(run.reports.size() == 9);
  for (auto p : g.witnesses) {
    CAPTURE(to_string(p));
    CHECK(verdict(run, p) == Verdict::kWitnessed);
  }
  const auto* p7 = run.find(Proposition::P7);
  CHECK(p7->exact);
  // The walk back from o_gate is lost once o_trap is entered.
  CHECK(p7->witness["o_prime"] == 2);
  for (const auto& r : run.reports) CHECK(replay_witness(g, agent, config(1), r));
}

TEST_CASE("epoch suite witnesses time dependence") {
  const auto g = make_epoch();
  RandomAgent agent;
  const auto run = check_all(g, agent, config(1));
  CHECK(run.errors.empty());
  const auto* p4 = run.find(Proposition::P4);
  CHECK(p4->status == Verdict::kWitnessed);
  CHECK(p4->witness["action"] == 2);
  CHECK(p4->witness["t"] == 4);
  CHECK(p4->witness["tau"] == 5);
  const auto* p9 = run.find(Proposition::P9);
  CHECK(p9->status == Verdict::kWitnessed);
  CHECK(p9->witness["observation"] == 2);
  CHECK(p9->witness["tau"] == 5);
  for (const auto& r : run.reports) CHECK(replay_witness(g, agent, config(1), r));
}

TEST_CASE("static grounding refutes within depth") {
  const auto g = make_static_full_support();
  RandomAgent agent;
  const auto run = check_all(g, agent, config(3));
  CHECK(run.errors.empty());
  for (auto p : {Proposition::P4, Proposition::P9}) {
    const auto* r = run.find(p);
    CHECK(r->status == Verdict::kRefuted);
    CHECK(r->depth == std::optional<std::size_t>(10));
  }
  CHECK(verdict(run, Proposition::P5) == Verdict::kRefuted);
  CHECK(verdict(run, Proposition::P7) == Verdict::kRefuted);
  CHECK(run.find(Proposition::P7)->exact);
  CHECK(verdict(run, Proposition::P6) == Verdict::kInconclusive);
  for (const auto& r : run.reports) CHECK(replay_witness(g, agent, config(3), r));
}

TEST_CASE("empty search is inconclusive") {
  for (const auto& g : {make_epoch(), make_static_full_support()}) {
    CHECK(check_action_time_dependence(g, 0).status == Verdict::kInconclusive);
    CHECK(check_observation_time_dependence(g, 0).status == Verdict::kInconclusive);
  }
}

TEST_CASE("observation dependence from availability tables") {
  CHECK(check_action_observation_dependence(make_market_grid(4, 4, 1)).status == Verdict::kWitnessed);
  CHECK(check_action_observation_dependence(make_static_full_support()).status == Verdict::kRefuted);
  // Single observation: no o' exists.
  CHECK(check_action_observation_dependence(make_proportional()).status == Verdict::kRefuted);
}

TEST_CASE("history-keyed non-ergodicity is depth bounded") {
  const auto r = check_nonergodicity(make_history_keyed(), 4);
  CHECK(r.status == Verdict::kInconclusive);
  CHECK(r.depth == std::optional<std::size_t>(4));
  CHECK(check_nonergodicity(make_trapdoor(), 4).status == Verdict::kWitnessed);
}

TEST_CASE("generation law on rollouts") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  auto log = run_episode(g, agent, SimulationConfig{1, 0, 10});
  REQUIRE(check_generation(log).status == Verdict::kWitnessed);

  UnitId child;
  for (const auto& e : log.ledger.entries()) {
    if (!e.spawned.empty()) {
      child = e.spawned.front();
      break;
    }
  }
  auto& unit = log.registry.at(child);
  unit.history = History(ObservationId(0), unit.birth_time);
  const auto corrupted = check_generation(log);
  CHECK(corrupted.status == Verdict::kRefuted);
  REQUIRE(corrupted.witness["violations"].size() >= 1);
  CHECK(corrupted.witness["violations"][0]["child"] == child.value);

  const auto none = run_episode(make_static_full_support(), agent, SimulationConfig{1, 0, 10});
  CHECK(check_generation(none).status == Verdict::kInconclusive);
}

TEST_CASE("rollout conformance checks") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  auto log = run_episode(g, agent, SimulationConfig{1, 0, 10});
  CHECK(check_historical(log).status == Verdict::kWitnessed);
  CHECK(check_partitioned(log).status == Verdict::kWitnessed);
  CHECK(check_units_afford(g, log).status == Verdict::kWitnessed);

  auto tampered = log;
  auto& unit = tampered.registry.at(UnitId(0));
  unit.history = unit.history.prefix(unit.history.length() - 1);
  CHECK(check_historical(tampered).status == Verdict::kRefuted);

  auto split = log;
  split.partitioning.partitions.push_back(Partition{PartitionId(99), {UnitId(0)}});
  CHECK(check_partitioned(split).status == Verdict::kRefuted);

  auto lost = log;
  lost.steps.front().joint_action.pop_back();
  CHECK(check_units_afford(g, lost).status == Verdict::kRefuted);
}

TEST_CASE("proportional grounding keeps m = k G") {
  for (std::uint64_t k : {1, 2, 3}) {
    const auto g = make_proportional(k);
    RandomAgent agent;
    const auto log = run_episode(g, agent, SimulationConfig{4, 0, 6});
    const auto r = check_units_afford(g, log);
    CHECK(r.status == Verdict::kWitnessed);
    CHECK(r.witness["m"].size() == 6);
  }
}

TEST_CASE("malformed grounding yields structured errors") {
  GroundingSpec g;
  g.name = "broken";
  g.env.add_observation(ObservationId(0));
  g.env.add_action(ActionId(0));
  g.initial_observation = ObservationId(7);
  RandomAgent agent;
  CheckRun run;
  CHECK_NOTHROW(run = check_all(g, agent, config(1)));
  CHECK_FALSE(run.errors.empty());
  CHECK(run.errors.front().stage == "validate");
  CHECK(run.reports.size() == 9);
}

TEST_CASE("json document") {
  const auto g = make_trapdoor();
  RandomAgent agent;
  const auto run = check_all(g, agent, config(1));
  const auto doc = to_json(run);
  CHECK(doc["schema"] == kPropsSchema);
  CHECK(doc["grounding"] == "trapdoor");
  CHECK(doc["agent"] == "random");
  CHECK(doc["config"]["seed"] == 1);
  REQUIRE(doc["reports"].size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(doc["reports"][i]["prop"] == "P" + std::to_string(i + 1));
    const std::string status = doc["reports"][i]["status"];
    CHECK((status == "witnessed" || status == "refuted" || status == "inconclusive"));
  }

  auto forged = *run.find(Proposition::P4);
  forged.witness["tau"] = 7;
  CHECK_FALSE(replay_witness(g, agent, config(1), forged));
}
