#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "capital/environment.hpp"
#include "capital/history.hpp"
#include "capital/ids.hpp"
#include "capital/rational.hpp"

namespace capital {

// The smallest unit of value. Fixed for a simulation's lifetime.
class CentQuantum {
 public:
  CentQuantum() = default;
  explicit CentQuantum(Rational value);

  const Rational& value() const { return value_; }

  friend bool operator==(const CentQuantum&, const CentQuantum&) = default;

 private:
  Rational value_{Rational(1, 100)};
};

// raw = k * cent exactly, or NotAMultiple. Never rounds.
std::int64_t quantize_reward(const Rational& raw, const CentQuantum& cent);

struct CapitalUnit {
  UnitId id;
  Time birth_time{0};
  std::optional<UnitId> parent;
  History history;
  bool alive{true};
};

// The (o, a, r, o') tuple of one unit's step at time t.
struct Transition {
  Time t{0};
  ObservationId obs;
  ActionId action;
  std::int64_t reward_k{0};
  ObservationId next_obs;
};

// Owns every unit ever created in one simulation. Ids are handed out by a
// monotone counter and never reused, including after death.
class UnitRegistry {
 public:
  UnitId create(ObservationId origin, Time birth_time, std::optional<UnitId> parent = std::nullopt);

  const CapitalUnit& at(UnitId id) const;
  CapitalUnit& at(UnitId id);
  bool contains(UnitId id) const { return id.value < units_.size(); }

  const std::vector<CapitalUnit>& units() const { return units_; }
  std::vector<UnitId> alive_ids() const;
  std::size_t alive_count() const;
  void kill(UnitId id);

  UnitId next_id() const { return UnitId(static_cast<std::uint32_t>(units_.size())); }

 private:
  std::vector<CapitalUnit> units_;
};

// Creates n children of `parent`, born at transition.t + 1 with an empty
// history anchored at the transition's next observation.
std::vector<UnitId> spawn_units(UnitRegistry& registry, UnitId parent, const Transition& transition,
                                std::uint64_t n_spawn);

// One slot per alive unit, ordered by unit id.
std::vector<ObservationId> joint_observation(const UnitRegistry& registry);

}  // namespace capital
