#include "capital/history.hpp"

#include <sstream>

#include "capital/error.hpp"

namespace capital {

History History::append(ActionId action, ObservationId observation) const {
  History next = *this;
  next.events_.push_back(HistoryEvent{action, observation});
  return next;
}

History History::concat(const History& suffix) const {
  if (suffix.origin_ != current_observation() || suffix.birth_time_ != now()) {
    throw Error(ErrorCode::kInvalidArgument, "suffix does not start where the prefix ends");
  }
  History joined = *this;
  joined.events_.insert(joined.events_.end(), suffix.events_.begin(), suffix.events_.end());
  return joined;
}

History History::prefix(std::size_t length) const {
  if (length > events_.size()) throw Error(ErrorCode::kInvalidArgument, "prefix longer than history");
  History p(origin_, birth_time_);
  p.events_.assign(events_.begin(), events_.begin() + static_cast<std::ptrdiff_t>(length));
  return p;
}

History History::suffix_from(std::size_t from) const {
  if (from > events_.size()) throw Error(ErrorCode::kInvalidArgument, "suffix start past end of history");
  const ObservationId anchor = from == 0 ? origin_ : events_[from - 1].observation;
  History s(anchor, birth_time_ + static_cast<Time>(from));
  s.events_.assign(events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end());
  return s;
}

std::string to_string(const History& h) {
  std::ostringstream out;
  out << 'o' << h.origin().value << "@" << h.birth_time() << " |";
  for (const auto& e : h.events()) out << " a" << e.action.value << ">o" << e.observation.value;
  return out.str();
}

}  // namespace capital
