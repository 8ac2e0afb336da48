#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capital/distribution.hpp"
#include "capital/history.hpp"
#include "capital/ids.hpp"
#include "capital/random.hpp"

namespace capital {

// Closed interval of global time; end == kTimeInfinity means open-ended.
struct Epoch {
  Time start{0};
  Time end{kTimeInfinity};

  bool contains(Time t) const { return t >= start && t <= end; }
  bool unbounded() const { return start == 0 && end == kTimeInfinity; }

  friend auto operator<=>(const Epoch&, const Epoch&) = default;
};

template <typename Id>
struct CatalogEntry {
  Id id;
  Epoch epoch;
  std::string name;

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

// How many trailing events condition the dynamics. depth 0 is Markov on
// the current observation; nullopt is the full history.
struct KeyDepth {
  std::optional<std::uint32_t> depth{0};

  static KeyDepth markov() { return KeyDepth{0}; }
  static KeyDepth last(std::uint32_t d) { return KeyDepth{d}; }
  static KeyDepth full() { return KeyDepth{std::nullopt}; }

  bool is_markov() const { return depth.has_value() && *depth == 0; }
  bool is_full() const { return !depth.has_value(); }

  friend bool operator==(const KeyDepth&, const KeyDepth&) = default;
};

std::string to_string(KeyDepth depth);

// Finite conditioning key derived from a history. `origin` is present when
// the key reaches back to the start of the history (history shorter than
// the depth, or full keys).
struct HistoryKey {
  std::optional<ObservationId> origin;
  std::vector<HistoryEvent> tail;
  ObservationId current;

  friend auto operator<=>(const HistoryKey&, const HistoryKey&) = default;
};

HistoryKey make_key(const History& h, KeyDepth depth);

// Markov keys render as the bare observation id ("3"); history keys as
// "^origin|a.o|a.o" with the origin part omitted when absent.
std::string to_string(const HistoryKey& key, KeyDepth depth);
HistoryKey parse_history_key(std::string_view text, KeyDepth depth);

struct DynamicsRow {
  Epoch window;  // global times at which the action may be taken
  ObservationDistribution next;

  friend bool operator==(const DynamicsRow&, const DynamicsRow&) = default;
};

struct DynamicsEntry {
  HistoryKey key;
  ActionId action;
  DynamicsRow row;
};

// Tabular e(o' | h, a) with time-indexed catalogs, integer reward counts
// and spawn counts.
class EnvironmentModel {
 public:
  void add_observation(ObservationId id, Epoch epoch = {}, std::string name = {});
  void add_action(ActionId id, Epoch epoch = {}, std::string name = {});
  void set_key_depth(KeyDepth depth);
  void add_dynamics(HistoryKey key, ActionId action, Epoch window, ObservationDistribution next);
  // Markov convenience form.
  void add_dynamics(ObservationId from, ActionId action, Epoch window, ObservationDistribution next);
  void set_reward(ObservationId o, ActionId a, std::int64_t k);
  void set_spawn(ObservationId o, ActionId a, std::uint64_t n);
  void add_death_observation(ObservationId o);

  // Structural problems (empty means well-formed). Reachability-dependent
  // checks live with the groundings.
  std::vector<std::string> validation_issues() const;
  void validate() const;

  const std::vector<CatalogEntry<ObservationId>>& observations() const { return observations_; }
  const std::vector<CatalogEntry<ActionId>>& actions() const { return actions_; }
  KeyDepth key_depth() const { return key_depth_; }
  std::vector<DynamicsEntry> dynamics_entries() const;
  const std::map<std::pair<ObservationId, ActionId>, std::int64_t>& rewards() const { return rewards_; }
  const std::map<std::pair<ObservationId, ActionId>, std::uint64_t>& spawns() const { return spawns_; }
  const std::set<ObservationId>& death_observations() const { return deaths_; }

  const CatalogEntry<ObservationId>* find_observation(ObservationId o) const;
  const CatalogEntry<ActionId>* find_action(ActionId a) const;
  std::optional<ObservationId> observation_named(std::string_view name) const;
  std::optional<ActionId> action_named(std::string_view name) const;

  bool observation_active(ObservationId o, Time t) const;
  bool action_active(ActionId a, Time t) const;

  // Actions with a dynamics row for some key whose current observation is
  // `o`, active at t. Throws UnknownObservation / InactiveObservation.
  std::vector<ActionId> available_actions(ObservationId o, Time t) const;
  // Actions with a row for exactly this history's key at its now().
  std::vector<ActionId> available_actions(const History& h) const;

  const ObservationDistribution* find_dynamics(const HistoryKey& key, ActionId a, Time t) const;
  // Throws MissingDynamics when no row matches.
  const ObservationDistribution& dynamics(const History& h, ActionId a) const;

  std::int64_t reward(ObservationId o, ActionId a) const;
  std::uint64_t spawn(ObservationId o, ActionId a) const;
  bool is_death(ObservationId o) const { return deaths_.contains(o); }

  // Every catalog epoch and dynamics window is [0, inf).
  bool time_invariant() const;

  friend bool operator==(const EnvironmentModel&, const EnvironmentModel&) = default;

 private:
  std::vector<CatalogEntry<ObservationId>> observations_;
  std::vector<CatalogEntry<ActionId>> actions_;
  KeyDepth key_depth_{};
  std::map<std::pair<HistoryKey, ActionId>, std::vector<DynamicsRow>> dynamics_;
  std::map<std::pair<ObservationId, ActionId>, std::int64_t> rewards_;
  std::map<std::pair<ObservationId, ActionId>, std::uint64_t> spawns_;
  std::set<ObservationId> deaths_;
};

struct StepOutcome {
  ObservationId next;
  std::int64_t reward_k{0};
  std::uint64_t spawned{0};

  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

// One environment transition for a unit with history h taking action a at
// global time h.now(). Throws UnavailableAction / MissingDynamics.
StepOutcome env_step(const EnvironmentModel& env, const History& h, ActionId a, RandomStream& rng);

}  // namespace capital
