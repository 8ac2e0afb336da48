#include "capital/environment.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "capital/error.hpp"

namespace capital {

namespace {

std::uint32_t parse_id(std::string_view text, std::string_view whole) {
  std::uint32_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::kParseError, "malformed history key '" + std::string(whole) + "'");
  }
  return value;
}

std::string epoch_text(const Epoch& e) {
  std::ostringstream out;
  out << '[' << e.start << ", ";
  if (e.end == kTimeInfinity) {
    out << "inf";
  } else {
    out << e.end;
  }
  out << ']';
  return out.str();
}

}  // namespace

std::string to_string(KeyDepth depth) { return depth.is_full() ? "full" : std::to_string(*depth.depth); }

HistoryKey make_key(const History& h, KeyDepth depth) {
  HistoryKey key;
  key.current = h.current_observation();
  if (depth.is_markov()) return key;
  const auto& events = h.events();
  if (depth.is_full() || events.size() < *depth.depth) {
    key.origin = h.origin();
    key.tail = events;
  } else {
    key.tail.assign(events.end() - static_cast<std::ptrdiff_t>(*depth.depth), events.end());
  }
  return key;
}

std::string to_string(const HistoryKey& key, KeyDepth depth) {
  if (depth.is_markov()) return std::to_string(key.current.value);
  std::ostringstream out;
  bool first = true;
  if (key.origin) {
    out << '^' << key.origin->value;
    first = false;
  }
  for (const auto& e : key.tail) {
    if (!first) out << '|';
    out << e.action.value << '.' << e.observation.value;
    first = false;
  }
  return out.str();
}

HistoryKey parse_history_key(std::string_view text, KeyDepth depth) {
  HistoryKey key;
  if (depth.is_markov()) {
    key.current = ObservationId(parse_id(text, text));
    return key;
  }
  const std::string_view whole = text;
  bool first = true;
  while (!text.empty() || first) {
    const auto bar = text.find('|');
    const std::string_view item = text.substr(0, bar);
    if (item.empty()) throw Error(ErrorCode::kParseError, "malformed history key '" + std::string(whole) + "'");
    if (item.front() == '^') {
      if (!first) throw Error(ErrorCode::kParseError, "origin must lead history key '" + std::string(whole) + "'");
      key.origin = ObservationId(parse_id(item.substr(1), whole));
    } else {
      const auto dot = item.find('.');
      if (dot == std::string_view::npos) {
        throw Error(ErrorCode::kParseError, "malformed history key '" + std::string(whole) + "'");
      }
      key.tail.push_back(HistoryEvent{ActionId(parse_id(item.substr(0, dot), whole)),
                                      ObservationId(parse_id(item.substr(dot + 1), whole))});
    }
    first = false;
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  if (!key.tail.empty()) {
    key.current = key.tail.back().observation;
  } else if (key.origin) {
    key.current = *key.origin;
  } else {
    throw Error(ErrorCode::kParseError, "empty history key '" + std::string(whole) + "'");
  }
  if (!depth.is_full()) {
    const std::size_t d = *depth.depth;
    if (key.tail.size() > d || (!key.origin && key.tail.size() != d)) {
      throw Error(ErrorCode::kParseError, "history key '" + std::string(whole) + "' does not match depth " +
                                              std::to_string(d));
    }
  } else if (!key.origin) {
    throw Error(ErrorCode::kParseError, "full-history key '" + std::string(whole) + "' needs an origin");
  }
  return key;
}

void EnvironmentModel::add_observation(ObservationId id, Epoch epoch, std::string name) {
  if (find_observation(id)) throw Error(ErrorCode::kInvalidGrounding, "duplicate observation " + std::to_string(id.value));
  if (epoch.start > epoch.end || epoch.start < 0) throw Error(ErrorCode::kInvalidGrounding, "empty observation epoch");
  observations_.push_back({id, epoch, std::move(name)});
  std::sort(observations_.begin(), observations_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

void EnvironmentModel::add_action(ActionId id, Epoch epoch, std::string name) {
  if (find_action(id)) throw Error(ErrorCode::kInvalidGrounding, "duplicate action " + std::to_string(id.value));
  if (epoch.start > epoch.end || epoch.start < 0) throw Error(ErrorCode::kInvalidGrounding, "empty action epoch");
  actions_.push_back({id, epoch, std::move(name)});
  std::sort(actions_.begin(), actions_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

void EnvironmentModel::set_key_depth(KeyDepth depth) {
  if (!dynamics_.empty()) throw Error(ErrorCode::kInvalidGrounding, "key depth must be set before dynamics");
  key_depth_ = depth;
}

void EnvironmentModel::add_dynamics(HistoryKey key, ActionId action, Epoch window, ObservationDistribution next) {
  if (window.start > window.end || window.start < 0) throw Error(ErrorCode::kInvalidGrounding, "empty dynamics window");
  auto& rows = dynamics_[{std::move(key), action}];
  for (const auto& row : rows) {
    if (row.window.start <= window.end && window.start <= row.window.end) {
      throw Error(ErrorCode::kInvalidGrounding, "overlapping dynamics windows for action " + std::to_string(action.value));
    }
  }
  rows.push_back(DynamicsRow{window, std::move(next)});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.window.start < b.window.start; });
}

void EnvironmentModel::add_dynamics(ObservationId from, ActionId action, Epoch window, ObservationDistribution next) {
  if (!key_depth_.is_markov()) throw Error(ErrorCode::kInvalidGrounding, "observation-keyed dynamics need depth 0");
  HistoryKey key;
  key.current = from;
  add_dynamics(std::move(key), action, window, std::move(next));
}

void EnvironmentModel::set_reward(ObservationId o, ActionId a, std::int64_t k) {
  if (k < 0) throw Error(ErrorCode::kNegativeReward, "reward for (" + std::to_string(o.value) + ", " + std::to_string(a.value) + ")");
  rewards_[{o, a}] = k;
}

void EnvironmentModel::set_spawn(ObservationId o, ActionId a, std::uint64_t n) { spawns_[{o, a}] = n; }

void EnvironmentModel::add_death_observation(ObservationId o) { deaths_.insert(o); }

std::vector<std::string> EnvironmentModel::validation_issues() const {
  std::vector<std::string> issues;
  if (observations_.empty()) issues.emplace_back("observation catalog is empty");
  if (actions_.empty()) issues.emplace_back("action catalog is empty");
  for (const auto& [ka, rows] : dynamics_) {
    const auto& [key, action] = ka;
    const std::string where = "dynamics (" + to_string(key, key_depth_) + ", a" + std::to_string(action.value) + ")";
    const auto* act = find_action(action);
    if (!act) {
      issues.push_back(where + ": unknown action");
      continue;
    }
    if (!find_observation(key.current)) issues.push_back(where + ": unknown observation in key");
    if (key.origin && !find_observation(*key.origin)) issues.push_back(where + ": unknown origin in key");
    for (const auto& e : key.tail) {
      if (!find_action(e.action) || !find_observation(e.observation)) issues.push_back(where + ": unknown id in key");
    }
    if (!key_depth_.is_full() && !key_depth_.is_markov()) {
      const std::size_t d = *key_depth_.depth;
      if (key.tail.size() > d || (!key.origin && key.tail.size() != d)) issues.push_back(where + ": key length does not match depth");
    }
    for (const auto& row : rows) {
      if (row.next.empty()) issues.push_back(where + ": empty distribution");
      if (row.window.start < act->epoch.start || row.window.end > act->epoch.end) {
        issues.push_back(where + ": window " + epoch_text(row.window) + " outside action epoch " + epoch_text(act->epoch));
      }
      for (const auto& outcome : row.next.outcomes()) {
        const auto* obs = find_observation(outcome.id);
        if (!obs) {
          issues.push_back(where + ": unknown next observation " + std::to_string(outcome.id.value));
          continue;
        }
        // Taken at t, observed at t + 1.
        const Time first = row.window.start + 1;
        const Time last = row.window.end == kTimeInfinity ? kTimeInfinity : row.window.end + 1;
        if (first < obs->epoch.start || last > obs->epoch.end) {
          issues.push_back(where + ": next observation " + std::to_string(outcome.id.value) + " inactive during " +
                           epoch_text(row.window));
        }
      }
    }
  }
  for (const auto& [oa, k] : rewards_) {
    if (!find_observation(oa.first) || !find_action(oa.second)) issues.push_back("reward entry refers to unknown ids");
    if (k < 0) issues.push_back("negative reward");
  }
  for (const auto& [oa, n] : spawns_) {
    if (!find_observation(oa.first) || !find_action(oa.second)) issues.push_back("spawn entry refers to unknown ids");
  }
  for (auto o : deaths_) {
    if (!find_observation(o)) issues.push_back("death observation " + std::to_string(o.value) + " unknown");
  }
  return issues;
}

void EnvironmentModel::validate() const {
  const auto issues = validation_issues();
  if (issues.empty()) return;
  std::string message;
  for (const auto& issue : issues) message += (message.empty() ? "" : "; ") + issue;
  throw Error(ErrorCode::kInvalidGrounding, message);
}

std::vector<DynamicsEntry> EnvironmentModel::dynamics_entries() const {
  std::vector<DynamicsEntry> out;
  for (const auto& [ka, rows] : dynamics_) {
    for (const auto& row : rows) out.push_back(DynamicsEntry{ka.first, ka.second, row});
  }
  return out;
}

const CatalogEntry<ObservationId>* EnvironmentModel::find_observation(ObservationId o) const {
  auto it = std::lower_bound(observations_.begin(), observations_.end(), o,
                             [](const auto& entry, ObservationId id) { return entry.id < id; });
  return it != observations_.end() && it->id == o ? &*it : nullptr;
}

const CatalogEntry<ActionId>* EnvironmentModel::find_action(ActionId a) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), a,
                             [](const auto& entry, ActionId id) { return entry.id < id; });
  return it != actions_.end() && it->id == a ? &*it : nullptr;
}

std::optional<ObservationId> EnvironmentModel::observation_named(std::string_view name) const {
  for (const auto& o : observations_) {
    if (o.name == name) return o.id;
  }
  return std::nullopt;
}

std::optional<ActionId> EnvironmentModel::action_named(std::string_view name) const {
  for (const auto& a : actions_) {
    if (a.name == name) return a.id;
  }
  return std::nullopt;
}

bool EnvironmentModel::observation_active(ObservationId o, Time t) const {
  const auto* entry = find_observation(o);
  return entry && entry->epoch.contains(t);
}

bool EnvironmentModel::action_active(ActionId a, Time t) const {
  const auto* entry = find_action(a);
  return entry && entry->epoch.contains(t);
}

std::vector<ActionId> EnvironmentModel::available_actions(ObservationId o, Time t) const {
  const auto* entry = find_observation(o);
  if (!entry) throw Error(ErrorCode::kUnknownObservation, "observation " + std::to_string(o.value));
  if (!entry->epoch.contains(t)) {
    throw Error(ErrorCode::kInactiveObservation, "observation " + std::to_string(o.value) + " at t=" + std::to_string(t));
  }
  std::vector<ActionId> out;
  for (const auto& [ka, rows] : dynamics_) {
    if (ka.first.current != o || !action_active(ka.second, t)) continue;
    for (const auto& row : rows) {
      if (row.window.contains(t)) {
        out.push_back(ka.second);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ActionId> EnvironmentModel::available_actions(const History& h) const {
  const Time t = h.now();
  const ObservationId o = h.current_observation();
  const auto* entry = find_observation(o);
  if (!entry) throw Error(ErrorCode::kUnknownObservation, "observation " + std::to_string(o.value));
  if (!entry->epoch.contains(t)) {
    throw Error(ErrorCode::kInactiveObservation, "observation " + std::to_string(o.value) + " at t=" + std::to_string(t));
  }
  const HistoryKey key = make_key(h, key_depth_);
  std::vector<ActionId> out;
  for (const auto& act : actions_) {
    if (act.epoch.contains(t) && find_dynamics(key, act.id, t)) out.push_back(act.id);
  }
  return out;
}

const ObservationDistribution* EnvironmentModel::find_dynamics(const HistoryKey& key, ActionId a, Time t) const {
  auto it = dynamics_.find({key, a});
  if (it == dynamics_.end()) return nullptr;
  for (const auto& row : it->second) {
    if (row.window.contains(t)) return &row.next;
  }
  return nullptr;
}

const ObservationDistribution& EnvironmentModel::dynamics(const History& h, ActionId a) const {
  const HistoryKey key = make_key(h, key_depth_);
  const auto* row = find_dynamics(key, a, h.now());
  if (!row) {
    throw Error(ErrorCode::kMissingDynamics, "no row for key " + to_string(key, key_depth_) + ", action " +
                                                 std::to_string(a.value) + " at t=" + std::to_string(h.now()));
  }
  return *row;
}

std::int64_t EnvironmentModel::reward(ObservationId o, ActionId a) const {
  auto it = rewards_.find({o, a});
  return it == rewards_.end() ? 0 : it->second;
}

std::uint64_t EnvironmentModel::spawn(ObservationId o, ActionId a) const {
  auto it = spawns_.find({o, a});
  return it == spawns_.end() ? 0 : it->second;
}

bool EnvironmentModel::time_invariant() const {
  for (const auto& o : observations_) {
    if (!o.epoch.unbounded()) return false;
  }
  for (const auto& a : actions_) {
    if (!a.epoch.unbounded()) return false;
  }
  for (const auto& [ka, rows] : dynamics_) {
    for (const auto& row : rows) {
      if (!row.window.unbounded()) return false;
    }
  }
  return true;
}

StepOutcome env_step(const EnvironmentModel& env, const History& h, ActionId a, RandomStream& rng) {
  const Time t = h.now();
  const ObservationId o = h.current_observation();
  const auto available = env.available_actions(o, t);
  if (!std::binary_search(available.begin(), available.end(), a)) {
    throw Error(ErrorCode::kUnavailableAction, "action " + std::to_string(a.value) + " at observation " +
                                                   std::to_string(o.value) + ", t=" + std::to_string(t));
  }
  const auto& row = env.dynamics(h, a);
  return StepOutcome{row.sample(rng), env.reward(o, a), env.spawn(o, a)};
}

}  // namespace capital
