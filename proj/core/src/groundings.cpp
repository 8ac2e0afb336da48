#include "capital/groundings.hpp"

#include <string>

#include "capital/error.hpp"
#include "capital/realizable.hpp"

namespace capital {

namespace {

ObservationDistribution point(std::uint32_t o) { return ObservationDistribution::point(ObservationId(o)); }

ObservationDistribution mix(std::initializer_list<std::pair<std::uint32_t, Rational>> masses) {
  std::vector<ObservationDistribution::Outcome> outcomes;
  for (const auto& [o, p] : masses) outcomes.push_back({ObservationId(o), p});
  return ObservationDistribution::from(std::move(outcomes));
}

ObservationId obs(std::uint32_t v) { return ObservationId(v); }
ActionId act(std::uint32_t v) { return ActionId(v); }

}  // namespace

std::string to_string(Proposition p) { return "P" + std::to_string(static_cast<int>(p)); }

Proposition parse_proposition(std::string_view text) {
  if (text.size() == 2 && (text[0] == 'P' || text[0] == 'p') && text[1] >= '1' && text[1] <= '9') {
    return static_cast<Proposition>(text[1] - '0');
  }
  throw Error(ErrorCode::kParseError, "unknown proposition '" + std::string(text) + "'");
}

std::vector<Proposition> all_propositions() {
  std::vector<Proposition> out;
  for (int i = 1; i <= 9; ++i) out.push_back(static_cast<Proposition>(i));
  return out;
}

GroundingSpec make_trapdoor() {
  GroundingSpec g;
  g.name = "trapdoor";
  auto& env = g.env;
  env.add_observation(obs(0), {}, "o_free");
  env.add_observation(obs(1), {}, "o_gate");
  env.add_observation(obs(2), {}, "o_trap");
  env.add_action(act(0), {}, "a_walk");
  env.add_action(act(1), {}, "a_jump");
  env.add_action(act(2), {}, "a_stay");
  env.add_dynamics(obs(0), act(0), {}, mix({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  env.add_dynamics(obs(0), act(1), {}, point(2));
  env.add_dynamics(obs(1), act(0), {}, point(0));
  env.add_dynamics(obs(1), act(1), {}, point(2));
  env.add_dynamics(obs(2), act(2), {}, point(2));
  env.set_reward(obs(0), act(1), 5);
  env.set_reward(obs(1), act(1), 5);
  env.set_reward(obs(2), act(2), 1);
  env.set_spawn(obs(0), act(1), 1);
  env.set_spawn(obs(1), act(1), 1);
  g.initial_units = 1;
  g.initial_observation = obs(0);
  g.witnesses = {Proposition::P2, Proposition::P3, Proposition::P5, Proposition::P6, Proposition::P7};
  return g;
}

GroundingSpec make_epoch() {
  GroundingSpec g;
  g.name = "epoch";
  auto& env = g.env;
  const Epoch late{5, kTimeInfinity};
  env.add_observation(obs(0), {}, "o0");
  env.add_observation(obs(1), {}, "o1");
  env.add_observation(obs(2), late, "o_new");
  env.add_action(act(0), {}, "a0");
  env.add_action(act(1), {}, "a1");
  env.add_action(act(2), late, "a_new");
  // o_new can first be observed at t = 5, i.e. after an action taken at t = 4.
  env.add_dynamics(obs(0), act(0), {0, 3}, mix({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  env.add_dynamics(obs(0), act(0), {4, kTimeInfinity}, mix({{0, Rational(1, 3)}, {1, Rational(1, 3)}, {2, Rational(1, 3)}}));
  env.add_dynamics(obs(0), act(1), {}, point(1));
  env.add_dynamics(obs(1), act(0), {}, point(0));
  env.add_dynamics(obs(1), act(1), {0, 3}, mix({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  env.add_dynamics(obs(1), act(1), {4, kTimeInfinity}, mix({{1, Rational(1, 2)}, {2, Rational(1, 2)}}));
  env.add_dynamics(obs(0), act(2), late, point(2));
  env.add_dynamics(obs(1), act(2), late, point(2));
  env.add_dynamics(obs(2), act(0), late, point(0));
  env.add_dynamics(obs(2), act(2), late, point(2));
  env.set_reward(obs(2), act(2), 2);
  env.set_reward(obs(0), act(1), 1);
  g.initial_units = 1;
  g.initial_observation = obs(0);
  g.witnesses = {Proposition::P4, Proposition::P9};
  return g;
}

GroundingSpec make_market_grid(std::uint32_t width, std::uint32_t height, std::uint64_t spawn_yield,
                               std::int64_t harvest_k) {
  if (width == 0 || height == 0) throw Error(ErrorCode::kInvalidArgument, "grid dimensions must be positive");
  if (static_cast<std::uint64_t>(width) * height > 10'000) {
    throw Error(ErrorCode::kInvalidArgument, "grid larger than 10^4 cells");
  }
  if (harvest_k <= 0) throw Error(ErrorCode::kInvalidArgument, "harvest reward must be positive");
  GroundingSpec g;
  g.name = "market_grid";
  auto& env = g.env;
  auto cell = [width](std::uint32_t x, std::uint32_t y) { return ObservationId(y * width + x); };
  const char* names[] = {"up", "down", "left", "right", "harvest"};
  for (std::uint32_t a = 0; a < 5; ++a) env.add_action(act(a), {}, names[a]);
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      env.add_observation(cell(x, y), {}, "c" + std::to_string(x) + "_" + std::to_string(y));
    }
  }
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      const ObservationId here = cell(x, y);
      // Moving into a wall leaves the unit where it is.
      env.add_dynamics(here, act(0), {}, ObservationDistribution::point(cell(x, y == 0 ? y : y - 1)));
      env.add_dynamics(here, act(1), {}, ObservationDistribution::point(cell(x, y + 1 == height ? y : y + 1)));
      env.add_dynamics(here, act(2), {}, ObservationDistribution::point(cell(x == 0 ? x : x - 1, y)));
      env.add_dynamics(here, act(3), {}, ObservationDistribution::point(cell(x + 1 == width ? x : x + 1, y)));
      if ((x + y) % 3 == 0) {
        env.add_dynamics(here, act(4), {}, ObservationDistribution::point(here));
        env.set_reward(here, act(4), harvest_k);
        if (spawn_yield > 0) env.set_spawn(here, act(4), spawn_yield);
      }
    }
  }
  g.initial_units = 1;
  g.initial_observation = cell(0, 0);
  g.witnesses = {Proposition::P3, Proposition::P5, Proposition::P6};
  return g;
}

GroundingSpec make_coupled_pair() {
  GroundingSpec g;
  g.name = "coupled_pair";
  auto& env = g.env;
  env.add_observation(obs(0), {}, "saw_a0");
  env.add_observation(obs(1), {}, "saw_a1");
  env.add_action(act(0), {}, "a0");
  env.add_action(act(1), {}, "a1");
  for (std::uint32_t o = 0; o < 2; ++o) {
    for (std::uint32_t a = 0; a < 2; ++a) env.add_dynamics(obs(o), act(a), {}, point(a));
  }
  g.initial_units = 2;
  g.initial_observation = obs(0);
  g.witnesses = {Proposition::P3, Proposition::P8};
  return g;
}

GroundingSpec make_static_full_support() {
  GroundingSpec g;
  g.name = "static";
  auto& env = g.env;
  env.add_observation(obs(0), {}, "o0");
  env.add_observation(obs(1), {}, "o1");
  env.add_action(act(0), {}, "a0");
  env.add_action(act(1), {}, "a1");
  for (std::uint32_t o = 0; o < 2; ++o) {
    for (std::uint32_t a = 0; a < 2; ++a) {
      env.add_dynamics(obs(o), act(a), {}, mix({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
    }
    env.set_reward(obs(o), act(1), 1);
  }
  g.initial_units = 1;
  g.initial_observation = obs(0);
  g.witnesses = {Proposition::P1, Proposition::P3};
  return g;
}

GroundingSpec make_history_keyed() {
  GroundingSpec g;
  g.name = "history_keyed";
  auto& env = g.env;
  const KeyDepth depth = KeyDepth::last(1);
  env.set_key_depth(depth);
  env.add_observation(obs(0), {}, "o0");
  env.add_observation(obs(1), {}, "o1");
  env.add_action(act(0), {}, "a0");
  env.add_action(act(1), {}, "a1");
  auto key = [depth](const char* text) { return parse_history_key(text, depth); };
  for (const char* k : {"^0", "0.0", "1.0", "0.1"}) {
    env.add_dynamics(key(k), act(0), {}, point(0));
    env.add_dynamics(key(k), act(1), {}, point(1));
  }
  // Entered o1 through a1: the first a0 only clears the latch.
  env.add_dynamics(key("1.1"), act(0), {}, point(1));
  env.add_dynamics(key("1.1"), act(1), {}, point(1));
  env.set_reward(obs(1), act(1), 1);
  g.initial_units = 1;
  g.initial_observation = obs(0);
  g.witnesses = {Proposition::P1};
  return g;
}

GroundingSpec make_proportional(std::uint64_t units_per_cent) {
  if (units_per_cent == 0) throw Error(ErrorCode::kInvalidArgument, "units_per_cent must be positive");
  GroundingSpec g;
  g.name = "proportional";
  auto& env = g.env;
  env.add_observation(obs(0), {}, "market");
  env.add_action(act(0), {}, "invest");
  env.add_action(act(1), {}, "hold");
  env.add_dynamics(obs(0), act(0), {}, point(0));
  env.add_dynamics(obs(0), act(1), {}, point(0));
  env.set_reward(obs(0), act(0), 1);
  env.set_spawn(obs(0), act(0), units_per_cent);
  g.units_per_cent = units_per_cent;
  g.initial_capital_k = 1;
  g.initial_units = static_cast<std::size_t>(units_per_cent);
  g.initial_observation = obs(0);
  g.witnesses = {Proposition::P2, Proposition::P3};
  return g;
}

std::vector<std::string> builtin_grounding_names() {
  return {"trapdoor", "epoch", "market_grid", "coupled_pair", "static", "history_keyed", "proportional"};
}

std::optional<GroundingSpec> builtin_grounding(std::string_view name) {
  if (name == "trapdoor") return make_trapdoor();
  if (name == "epoch") return make_epoch();
  if (name == "market_grid") return make_market_grid(4, 4, 1);
  if (name == "coupled_pair") return make_coupled_pair();
  if (name == "static") return make_static_full_support();
  if (name == "history_keyed") return make_history_keyed();
  if (name == "proportional") return make_proportional(1);
  return std::nullopt;
}

std::vector<GroundingSpec> shipped_groundings() {
  std::vector<GroundingSpec> out;
  for (const auto& name : builtin_grounding_names()) out.push_back(*builtin_grounding(name));
  return out;
}

std::vector<std::string> validate_grounding(const GroundingSpec& g, std::size_t t_max) {
  std::vector<std::string> issues = g.env.validation_issues();
  if (g.initial_units == 0) issues.emplace_back("no initial units");
  if (g.witnesses.empty()) issues.emplace_back("declares no proposition it witnesses");
  if (!g.env.observation_active(g.initial_observation, 0)) {
    issues.emplace_back("initial observation " + std::to_string(g.initial_observation.value) + " not active at t=0");
    return issues;
  }
  if (g.units_per_cent) {
    if (g.initial_units != *g.units_per_cent * static_cast<std::uint64_t>(g.initial_capital_k)) {
      issues.emplace_back("proportional grounding: initial units != units_per_cent * initial capital");
    }
    for (const auto& [oa, k] : g.env.rewards()) {
      if (g.env.spawn(oa.first, oa.second) != *g.units_per_cent * static_cast<std::uint64_t>(k)) {
        issues.emplace_back("proportional grounding: spawn != units_per_cent * reward for (" +
                            std::to_string(oa.first.value) + ", " + std::to_string(oa.second.value) + ")");
      }
    }
    for (const auto& [oa, n] : g.env.spawns()) {
      if (!g.env.rewards().contains(oa) && n != 0) issues.emplace_back("proportional grounding: spawn without reward");
    }
  }
  if (!issues.empty()) return issues;
  try {
    const auto graph = SupportGraph::build(g.env, History(g.initial_observation, 0), t_max);
    for (std::size_t layer = 0; layer < graph.layers(); ++layer) {
      const Time t = graph.time_of(layer);
      for (const auto& key : graph.states(layer)) {
        if (available_for_key(g.env, key, t).empty()) {
          issues.push_back("reachable key " + to_string(key, g.env.key_depth()) + " has no available action at t=" +
                           std::to_string(t));
        }
      }
    }
  } catch (const Error& e) {
    issues.emplace_back(e.what());
  }
  return issues;
}

}  // namespace capital
