#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "capital/ids.hpp"

namespace capital {

struct HistoryEvent {
  ActionId action;
  ObservationId observation;

  friend auto operator<=>(const HistoryEvent&, const HistoryEvent&) = default;
};

// An immutable sequence of (action, observation) events anchored at the
// unit's birth observation and birth time. Local time is length(); global
// time is birth_time() + length().
class History {
 public:
  History() = default;
  explicit History(ObservationId origin, Time birth_time = 0) : origin_(origin), birth_time_(birth_time) {}

  History append(ActionId action, ObservationId observation) const;

  // hh': `suffix` must start where this history ends (its origin is our
  // current observation and its birth time is our now()).
  History concat(const History& suffix) const;

  History prefix(std::size_t length) const;
  // Events [from, end) as a history anchored at the observation current at `from`.
  History suffix_from(std::size_t from) const;

  const std::vector<HistoryEvent>& events() const { return events_; }
  std::size_t length() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  ObservationId origin() const { return origin_; }
  Time birth_time() const { return birth_time_; }
  Time now() const { return birth_time_ + static_cast<Time>(events_.size()); }
  ObservationId current_observation() const { return events_.empty() ? origin_ : events_.back().observation; }

  friend auto operator<=>(const History&, const History&) = default;

 private:
  ObservationId origin_{};
  Time birth_time_{0};
  std::vector<HistoryEvent> events_;
};

inline History history_append(const History& h, ActionId a, ObservationId o) { return h.append(a, o); }

// "o0 | a1>o2 a0>o1" style rendering for diagnostics and listings.
std::string to_string(const History& h);

}  // namespace capital
