#include "capital/units.hpp"

#include <string>

#include "capital/error.hpp"

namespace capital {

CentQuantum::CentQuantum(Rational value) : value_(std::move(value)) {
  if (!(value_ > 0)) throw Error(ErrorCode::kInvalidArgument, "cent must be strictly positive");
}

std::int64_t quantize_reward(const Rational& raw, const CentQuantum& cent) {
  if (raw < 0) throw Error(ErrorCode::kNegativeReward, to_string(raw));
  const Rational k = raw / cent.value();
  if (boost::multiprecision::denominator(k) != 1) {
    throw Error(ErrorCode::kNotAMultiple, to_string(raw) + " is not a multiple of " + to_string(cent.value()));
  }
  return boost::multiprecision::numerator(k).convert_to<std::int64_t>();
}

UnitId UnitRegistry::create(ObservationId origin, Time birth_time, std::optional<UnitId> parent) {
  const UnitId id = next_id();
  if (parent && !(*parent < id)) throw Error(ErrorCode::kInvalidArgument, "parent id must precede child id");
  units_.push_back(CapitalUnit{id, birth_time, parent, History(origin, birth_time), true});
  return id;
}

const CapitalUnit& UnitRegistry::at(UnitId id) const {
  if (!contains(id)) throw Error(ErrorCode::kInvalidArgument, "unknown unit " + std::to_string(id.value));
  return units_[id.value];
}

CapitalUnit& UnitRegistry::at(UnitId id) {
  if (!contains(id)) throw Error(ErrorCode::kInvalidArgument, "unknown unit " + std::to_string(id.value));
  return units_[id.value];
}

std::vector<UnitId> UnitRegistry::alive_ids() const {
  std::vector<UnitId> ids;
  for (const auto& u : units_) {
    if (u.alive) ids.push_back(u.id);
  }
  return ids;
}

std::size_t UnitRegistry::alive_count() const {
  std::size_t n = 0;
  for (const auto& u : units_) n += u.alive ? 1 : 0;
  return n;
}

void UnitRegistry::kill(UnitId id) { at(id).alive = false; }

std::vector<UnitId> spawn_units(UnitRegistry& registry, UnitId parent, const Transition& transition,
                                std::uint64_t n_spawn) {
  if (!registry.at(parent).alive) throw Error(ErrorCode::kInvalidArgument, "dead units cannot spawn");
  std::vector<UnitId> children;
  children.reserve(n_spawn);
  for (std::uint64_t i = 0; i < n_spawn; ++i) {
    children.push_back(registry.create(transition.next_obs, transition.t + 1, parent));
  }
  return children;
}

std::vector<ObservationId> joint_observation(const UnitRegistry& registry) {
  std::vector<ObservationId> out;
  for (const auto& u : registry.units()) {
    if (u.alive) out.push_back(u.history.current_observation());
  }
  return out;
}

}  // namespace capital
