#include "capital/environment.hpp"
#include "capital/error.hpp"
#include "capital/groundings.hpp"
#include "capital/history.hpp"
#include "capital/rational.hpp"
#include "doctest.h"

using namespace capital;

namespace {

ObservationId O(std::uint32_t v) { return ObservationId(v); }
ActionId A(std::uint32_t v) { return ActionId(v); }

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2") == -2);
  CHECK(parse_rational("2/6") == Rational(1, 3));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(pow(Rational(1, 2), 0) == 1);
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
}

TEST_CASE("history append, prefix, suffix, concat") {
  const History h = History(O(0), 2).append(A(1), O(1)).append(A(0), O(0)).append(A(1), O(2));
  CHECK(h.length() == 3);
  CHECK(h.now() == 5);
  CHECK(h.current_observation() == O(2));
  CHECK(h.prefix(1) == History(O(0), 2).append(A(1), O(1)));

  const History tail = h.suffix_from(1);
  CHECK(tail.origin() == O(1));
  CHECK(tail.birth_time() == 3);
  CHECK(tail.length() == 2);
  CHECK(h.prefix(1).concat(tail) == h);
  CHECK_THROWS_AS(h.prefix(2).concat(tail), Error);
  CHECK_THROWS_AS(h.prefix(4), Error);
  CHECK(to_string(h.prefix(1)) == "o0@2 | a1>o1");
}

TEST_CASE("history keys by depth") {
  const History h = History(O(3)).append(A(1), O(1)).append(A(0), O(2));
  CHECK(to_string(make_key(h, KeyDepth::markov()), KeyDepth::markov()) == "2");
  CHECK(to_string(make_key(h, KeyDepth::last(1)), KeyDepth::last(1)) == "0.2");
  CHECK(to_string(make_key(h, KeyDepth::last(3)), KeyDepth::last(3)) == "^3|1.1|0.2");
  CHECK(to_string(make_key(h, KeyDepth::full()), KeyDepth::full()) == "^3|1.1|0.2");
  CHECK(to_string(make_key(History(O(3)), KeyDepth::last(1)), KeyDepth::last(1)) == "^3");
  for (const char* text : {"^3", "^3|1.1", "1.1|0.2"}) {
    CHECK(to_string(parse_history_key(text, KeyDepth::last(2)), KeyDepth::last(2)) == text);
  }
  CHECK_THROWS_AS(parse_history_key("1.1|0.2|0.0", KeyDepth::last(2)), Error);
  CHECK_THROWS_AS(parse_history_key("1.1", KeyDepth::full()), Error);
}

TEST_CASE("epochs gate observations, actions and rows") {
  const auto g = make_epoch();
  const auto& env = g.env;
  CHECK_FALSE(env.observation_active(O(2), 4));
  CHECK(env.observation_active(O(2), 5));
  CHECK(env.available_actions(O(0), 4) == std::vector<ActionId>{A(0), A(1)});
  CHECK(env.available_actions(O(0), 5) == std::vector<ActionId>{A(0), A(1), A(2)});
  CHECK_THROWS_AS(env.available_actions(O(2), 3), Error);

  const auto& row = env.dynamics(History(O(0), 4), A(0));
  CHECK(row.prob(O(2)) == Rational(1, 3));
  CHECK(env.dynamics(History(O(0), 3), A(0)).prob(O(2)) == 0);
  CHECK_THROWS_AS(env.dynamics(History(O(0), 3), A(2)), Error);
  CHECK_FALSE(env.time_invariant());
  CHECK(make_trapdoor().env.time_invariant());
}

TEST_CASE("environment rejects malformed tables") {
  EnvironmentModel env;
  env.add_observation(O(0));
  env.add_action(A(0));
  CHECK_THROWS_AS(env.add_observation(O(0)), Error);
  env.add_dynamics(O(0), A(0), Epoch{0, 4}, ObservationDistribution::point(O(0)));
  CHECK_THROWS_AS(env.add_dynamics(O(0), A(0), Epoch{3, 9}, ObservationDistribution::point(O(0))), Error);
  CHECK_THROWS_AS(env.set_key_depth(KeyDepth::last(1)), Error);
  CHECK_THROWS_AS(env.set_reward(O(0), A(0), -1), Error);
  env.add_dynamics(O(0), A(0), Epoch{5, kTimeInfinity}, ObservationDistribution::point(O(0)));
  CHECK(env.validation_issues().empty());

  env.add_dynamics(O(0), A(1), Epoch{}, ObservationDistribution::point(O(7)));
  CHECK_FALSE(env.validation_issues().empty());
  CHECK_THROWS_AS(env.validate(), Error);
}

TEST_CASE("env_step checks availability and pays reward") {
  const auto g = make_trapdoor();
  RandomStream rng(1, StreamPurpose::kEnvironment);
  const auto out = env_step(g.env, History(O(0)), A(1), rng);
  CHECK(out.next == O(2));
  CHECK(out.reward_k == 5);
  CHECK(out.spawned == 1);
  CHECK_THROWS_AS(env_step(g.env, History(O(2)), A(0), rng), Error);
  try {
    env_step(g.env, History(O(2)), A(0), rng);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnavailableAction);
  }
}
