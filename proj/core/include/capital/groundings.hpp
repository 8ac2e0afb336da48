#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capital/environment.hpp"
#include "capital/units.hpp"

namespace capital {

enum class Proposition : std::uint8_t { P1 = 1, P2, P3, P4, P5, P6, P7, P8, P9 };

std::string to_string(Proposition p);
Proposition parse_proposition(std::string_view text);
std::vector<Proposition> all_propositions();

// A concrete environment plus its initial population and the propositions
// it is designed to witness.
struct GroundingSpec {
  std::string name;
  EnvironmentModel env;
  std::size_t initial_units{1};
  ObservationId initial_observation{};
  std::set<Proposition> witnesses;
  CentQuantum cent{};
  // Proportional family: m_t = units_per_cent * G_t, where G_t includes an
  // initial endowment of `initial_capital_k` cents.
  std::optional<std::uint64_t> units_per_cent;
  std::int64_t initial_capital_k{0};

  friend bool operator==(const GroundingSpec&, const GroundingSpec&) = default;
};

// Free / gate / trap. a_jump from free or gate lands in the trap with
// certainty, paying 5 and spawning one unit; the trap only offers a_stay.
GroundingSpec make_trapdoor();

// o_new and a_new exist only from t = 5 on.
GroundingSpec make_epoch();

// width x height cells; four moves plus harvest. Harvest exists only on
// resource cells, pays harvest_k and spawns spawn_yield units on the same
// cell. Cell (x, y) is a resource iff (x + y) % 3 == 0. Units start at (0, 0).
GroundingSpec make_market_grid(std::uint32_t width, std::uint32_t height, std::uint64_t spawn_yield,
                               std::int64_t harvest_k = 3);

// Two units, two actions; each unit's next observation copies its action.
GroundingSpec make_coupled_pair();

// Two observations, two actions, every transition uniform over both
// observations. No time, observation or action structure to witness.
GroundingSpec make_static_full_support();

// Depth-1 history-keyed dynamics: after a1 into o1 the way back to o0
// takes two a0 steps.
GroundingSpec make_history_keyed();

// Single observation; "invest" pays 1 and spawns `units_per_cent` units,
// so that the population tracks units_per_cent * G_t.
GroundingSpec make_proportional(std::uint64_t units_per_cent = 1);

// Builtin fixtures by name: trapdoor, epoch, market_grid, coupled_pair,
// static, history_keyed, proportional.
std::vector<std::string> builtin_grounding_names();
std::optional<GroundingSpec> builtin_grounding(std::string_view name);
std::vector<GroundingSpec> shipped_groundings();

// Structural issues plus reachability checks up to t_max: every reachable
// key-state's rows only emit active observations, and proportional
// groundings spawn exactly units_per_cent per cent of reward.
std::vector<std::string> validate_grounding(const GroundingSpec& g, std::size_t t_max = 10);

}  // namespace capital
