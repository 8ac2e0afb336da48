#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "capital/environment.hpp"
#include "capital/history.hpp"
#include "capital/policy.hpp"

namespace capital {

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;

// All histories of length <= t_max starting at `root` whose every step has
// lambda(a|h) > 0 and e(o|h,a) > 0, by exact breadth-first expansion. The
// result is in BFS order (shorter first, then lexicographic by event).
// Throws BudgetExceeded if more than `node_cap` histories are produced.
std::vector<History> enumerate_realizable_histories(const Policy& policy, const EnvironmentModel& env,
                                                    const History& root, std::size_t t_max,
                                                    std::size_t node_cap = kDefaultNodeCap);

// {h' : hh' realizable, length(h') <= t_max}, with each h' anchored at the
// prefix's current observation and time. Throws UnrealizablePrefix when
// the prefix itself is not realizable from its own origin.
std::vector<History> realizable_suffixes(const Policy& policy, const EnvironmentModel& env, const History& prefix,
                                         std::size_t t_max, std::size_t node_cap = kDefaultNodeCap);

// Whether every step of h has positive policy and dynamics mass.
bool is_realizable(const Policy& policy, const EnvironmentModel& env, const History& h);

// counts[d] = number of histories with length d.
std::vector<std::size_t> count_by_length(const std::vector<History>& histories);

// Seeded single-unit rollout; step t draws from the policy substream
// (seed, entity, t) and the environment substream (seed, entity, t).
History rollout(const Policy& policy, const EnvironmentModel& env, const History& root, std::size_t depth,
                std::uint64_t seed, std::uint32_t entity = 0);

}  // namespace capital

namespace capital {

// The key that results from appending (a, o) to a history with key `key`.
HistoryKey extend_key(const HistoryKey& key, ActionId a, ObservationId o, KeyDepth depth);

// Actions available to a history with this key at time t (key-exact).
std::vector<ActionId> available_for_key(const EnvironmentModel& env, const HistoryKey& key, Time t);

// Layered quotient of the realizable set under the full-support policy:
// layer i holds every distinct dynamics key reachable at time root.now() + i.
// Because availability and dynamics depend only on (key, t), a key-state
// is in layer i iff some realizable history of length i ends in it.
class SupportGraph {
 public:
  struct Edge {
    std::size_t from;  // index in layer i
    ActionId action;
    ObservationId next;
    std::size_t to;  // index in layer i + 1
  };

  // Throws BudgetExceeded when the total number of key-states exceeds node_cap.
  static SupportGraph build(const EnvironmentModel& env, const History& root, std::size_t t_max,
                            std::size_t node_cap = kDefaultNodeCap);

  std::size_t layers() const { return states_.size(); }
  Time time_of(std::size_t layer) const { return root_.now() + static_cast<Time>(layer); }
  const std::vector<HistoryKey>& states(std::size_t layer) const { return states_[layer]; }
  // Edges leaving layer `layer`, in (state, action, observation) order.
  const std::vector<Edge>& edges(std::size_t layer) const { return edges_[layer]; }
  // A realizable history of length `layer` ending in the given state.
  History witness_history(std::size_t layer, std::size_t state) const;
  const History& root() const { return root_; }

 private:
  struct Parent {
    std::size_t state;
    ActionId action;
    ObservationId next;
  };

  History root_;
  std::vector<std::vector<HistoryKey>> states_;
  std::vector<std::vector<Parent>> parents_;
  std::vector<std::vector<Edge>> edges_;
};

}  // namespace capital
