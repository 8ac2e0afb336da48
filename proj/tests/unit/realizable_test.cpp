#include <set>

#include "capital/error.hpp"
#include "capital/groundings.hpp"
#include "capital/policy.hpp"
#include "capital/realizable.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capital;

TEST_CASE("2x2 full-support grounding has 21 histories up to depth 2") {
  const auto g = make_static_full_support();
  const UniformPolicy policy(g.env);
  const History root(g.initial_observation);
  const auto hs = enumerate_realizable_histories(policy, g.env, root, 2);
  CHECK(hs.size() == 21);
  CHECK(count_by_length(hs) == std::vector<std::size_t>{1, 4, 16});
  CHECK(enumerate_realizable_histories(policy, g.env, root, 0).size() == 1);
}

TEST_CASE("enumeration equals brute force on small fixtures") {
  for (const auto& g : {make_trapdoor(), make_epoch(), make_static_full_support(), make_history_keyed(),
                        make_coupled_pair()}) {
    CAPTURE(g.name);
    const History root(g.initial_observation);
    const auto listed = enumerate_realizable_histories(UniformPolicy(g.env), g.env, root, 3);
    const std::set<History> got(listed.begin(), listed.end());
    CHECK(got.size() == listed.size());
    CHECK(got == oracle::brute_force_realizable(g.env, root, 3));
  }
}

TEST_CASE("policy support restricts the realizable set") {
  const auto g = make_trapdoor();
  // Never jump: the trap is unreachable.
  const FunctionPolicy walker([](const History&) { return ActionDistribution::point(ActionId(0)); });
  const auto hs = enumerate_realizable_histories(walker, g.env, History(g.initial_observation), 4);
  for (const auto& h : hs) {
    for (const auto& e : h.events()) CHECK(e.observation != ObservationId(2));
  }
  // free -a_walk-> {free, gate}; gate -a_walk-> free: 1 + 2 + 3 + 5 + 8
  CHECK(hs.size() == 19);
}

TEST_CASE("realizable suffixes are anchored at the prefix") {
  const auto g = make_trapdoor();
  const UniformPolicy policy(g.env);
  const History prefix = History(ObservationId(0)).append(ActionId(0), ObservationId(1));
  const auto suffixes = realizable_suffixes(policy, g.env, prefix, 2);
  REQUIRE_FALSE(suffixes.empty());
  for (const auto& s : suffixes) {
    CHECK(s.origin() == ObservationId(1));
    CHECK(s.birth_time() == 1);
    CHECK(is_realizable(policy, g.env, prefix.concat(s)));
  }
  // gate: walk -> free, jump -> trap. Then free has 3 continuations, trap 1.
  CHECK(count_by_length(suffixes) == std::vector<std::size_t>{1, 2, 4});

  const History impossible = History(ObservationId(0)).append(ActionId(2), ObservationId(2));
  CHECK_THROWS_AS(realizable_suffixes(policy, g.env, impossible, 2), Error);
}

TEST_CASE("node cap raises BudgetExceeded") {
  const auto g = make_static_full_support();
  try {
    enumerate_realizable_histories(UniformPolicy(g.env), g.env, History(g.initial_observation), 6, 100);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
}

TEST_CASE("seeded rollouts stay inside the enumerated set") {
  const auto g = make_epoch();
  const UniformPolicy policy(g.env);
  const History root(g.initial_observation);
  const auto listed = enumerate_realizable_histories(policy, g.env, root, 6);
  const std::set<History> known(listed.begin(), listed.end());
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const History h = rollout(policy, g.env, root, 6, seed);
    CHECK(h.length() == 6);
    CHECK(known.contains(h));
  }
  CHECK(rollout(policy, g.env, root, 6, 11) == rollout(policy, g.env, root, 6, 11));
}

TEST_CASE("support graph layers match enumerated keys") {
  const auto g = make_history_keyed();
  const History root(g.initial_observation);
  const auto graph = SupportGraph::build(g.env, root, 4);
  const auto listed = enumerate_realizable_histories(UniformPolicy(g.env), g.env, root, 4);
  for (std::size_t layer = 0; layer < graph.layers(); ++layer) {
    std::set<HistoryKey> expected;
    for (const auto& h : listed) {
      if (h.length() == layer) expected.insert(make_key(h, g.env.key_depth()));
    }
    const auto& states = graph.states(layer);
    CHECK(std::set<HistoryKey>(states.begin(), states.end()) == expected);
    for (std::size_t s = 0; s < states.size(); ++s) {
      const History w = graph.witness_history(layer, s);
      CHECK(w.length() == layer);
      CHECK(make_key(w, g.env.key_depth()) == states[s]);
      CHECK(oracle::uniform_path_mass(g.env, w) > 0);
    }
  }
}
