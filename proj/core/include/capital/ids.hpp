#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>

namespace capital {

// Global simulation time: steps since epoch 0.
using Time = std::int64_t;
inline constexpr Time kTimeInfinity = std::numeric_limits<Time>::max();

template <typename Tag>
struct StrongId {
  std::uint32_t value{0};

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(const StrongId&, const StrongId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) { return os << id.value; }
};

struct ObservationTag {};
struct ActionTag {};
struct UnitTag {};
struct PartitionTag {};

using ObservationId = StrongId<ObservationTag>;
using ActionId = StrongId<ActionTag>;
using UnitId = StrongId<UnitTag>;
using PartitionId = StrongId<PartitionTag>;

}  // namespace capital

template <typename Tag>
struct std::hash<capital::StrongId<Tag>> {
  std::size_t operator()(const capital::StrongId<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
