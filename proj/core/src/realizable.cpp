#include "capital/realizable.hpp"

#include <map>
#include <string>

#include "capital/error.hpp"

namespace capital {

namespace {

// Positive-mass one-step extensions of h, in (action, observation) order.
// A policy with empty support at h ends the history there.
std::vector<History> extensions(const Policy& policy, const EnvironmentModel& env, const History& h) {
  std::vector<History> out;
  const ActionDistribution lambda = policy.distribution(h);
  for (const auto& act : lambda.outcomes()) {
    if (!(act.prob > 0)) continue;
    const auto& row = env.dynamics(h, act.id);
    for (const auto& next : row.outcomes()) {
      if (next.prob > 0) out.push_back(h.append(act.id, next.id));
    }
  }
  return out;
}

std::vector<History> expand(const Policy& policy, const EnvironmentModel& env, const History& start,
                            std::size_t t_max, std::size_t node_cap) {
  std::vector<History> all{start};
  std::size_t layer_begin = 0;
  for (std::size_t depth = 0; depth < t_max; ++depth) {
    const std::size_t layer_end = all.size();
    if (layer_begin == layer_end) break;
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (auto& next : extensions(policy, env, all[i])) {
        if (all.size() >= node_cap) {
          throw Error(ErrorCode::kBudgetExceeded,
                      "realizable set exceeds node cap " + std::to_string(node_cap) + " at depth " +
                          std::to_string(depth + 1));
        }
        all.push_back(std::move(next));
      }
    }
    layer_begin = layer_end;
  }
  return all;
}

}  // namespace

std::vector<History> enumerate_realizable_histories(const Policy& policy, const EnvironmentModel& env,
                                                    const History& root, std::size_t t_max, std::size_t node_cap) {
  return expand(policy, env, root, t_max, node_cap);
}

bool is_realizable(const Policy& policy, const EnvironmentModel& env, const History& h) {
  History prefix(h.origin(), h.birth_time());
  for (const auto& e : h.events()) {
    const ActionDistribution lambda = policy.distribution(prefix);
    if (!(lambda.prob(e.action) > 0)) return false;
    const auto* row = env.find_dynamics(make_key(prefix, env.key_depth()), e.action, prefix.now());
    if (!row || !(row->prob(e.observation) > 0)) return false;
    prefix = prefix.append(e.action, e.observation);
  }
  return true;
}

std::vector<History> realizable_suffixes(const Policy& policy, const EnvironmentModel& env, const History& prefix,
                                         std::size_t t_max, std::size_t node_cap) {
  if (!is_realizable(policy, env, prefix)) {
    throw Error(ErrorCode::kUnrealizablePrefix, to_string(prefix));
  }
  auto full = expand(policy, env, prefix, t_max, node_cap);
  std::vector<History> suffixes;
  suffixes.reserve(full.size());
  for (const auto& h : full) suffixes.push_back(h.suffix_from(prefix.length()));
  return suffixes;
}

std::vector<std::size_t> count_by_length(const std::vector<History>& histories) {
  std::vector<std::size_t> counts;
  for (const auto& h : histories) {
    if (counts.size() <= h.length()) counts.resize(h.length() + 1, 0);
    ++counts[h.length()];
  }
  return counts;
}

History rollout(const Policy& policy, const EnvironmentModel& env, const History& root, std::size_t depth,
                std::uint64_t seed, std::uint32_t entity) {
  History h = root;
  for (std::size_t step = 0; step < depth; ++step) {
    const auto t = static_cast<std::uint32_t>(h.now());
    const ActionDistribution lambda = policy.distribution(h);
    if (lambda.empty()) break;
    RandomStream policy_rng(seed, StreamPurpose::kPolicy, entity, t);
    RandomStream env_rng(seed, StreamPurpose::kEnvironment, entity, t);
    const ActionId a = lambda.sample(policy_rng);
    const StepOutcome outcome = env_step(env, h, a, env_rng);
    h = h.append(a, outcome.next);
  }
  return h;
}

}  // namespace capital

namespace capital {

HistoryKey extend_key(const HistoryKey& key, ActionId a, ObservationId o, KeyDepth depth) {
  HistoryKey next;
  next.current = o;
  if (depth.is_markov()) return next;
  next.origin = key.origin;
  next.tail = key.tail;
  next.tail.push_back(HistoryEvent{a, o});
  if (!depth.is_full() && next.tail.size() >= *depth.depth) {
    if (next.tail.size() > *depth.depth) next.tail.erase(next.tail.begin());
    next.origin.reset();
  }
  return next;
}

std::vector<ActionId> available_for_key(const EnvironmentModel& env, const HistoryKey& key, Time t) {
  std::vector<ActionId> out;
  if (!env.observation_active(key.current, t)) return out;
  for (const auto& act : env.actions()) {
    if (act.epoch.contains(t) && env.find_dynamics(key, act.id, t)) out.push_back(act.id);
  }
  return out;
}

SupportGraph SupportGraph::build(const EnvironmentModel& env, const History& root, std::size_t t_max,
                                 std::size_t node_cap) {
  SupportGraph g;
  g.root_ = root;
  const KeyDepth depth = env.key_depth();
  g.states_.push_back({make_key(root, depth)});
  g.parents_.push_back({Parent{0, ActionId{}, ObservationId{}}});
  std::size_t total = 1;
  for (std::size_t layer = 0; layer < t_max; ++layer) {
    const Time t = g.time_of(layer);
    std::vector<HistoryKey> next_states;
    std::vector<Parent> next_parents;
    std::map<HistoryKey, std::size_t> index;
    std::vector<Edge> edges;
    const auto& states = g.states_[layer];
    for (std::size_t s = 0; s < states.size(); ++s) {
      for (auto a : available_for_key(env, states[s], t)) {
        const auto* row = env.find_dynamics(states[s], a, t);
        for (const auto& outcome : row->outcomes()) {
          HistoryKey to = extend_key(states[s], a, outcome.id, depth);
          auto [it, inserted] = index.emplace(std::move(to), next_states.size());
          if (inserted) {
            if (++total > node_cap) {
              throw Error(ErrorCode::kBudgetExceeded, "support graph exceeds node cap " + std::to_string(node_cap));
            }
            next_states.push_back(it->first);
            next_parents.push_back(Parent{s, a, outcome.id});
          }
          edges.push_back(Edge{s, a, outcome.id, it->second});
        }
      }
    }
    g.edges_.push_back(std::move(edges));
    if (next_states.empty()) break;
    g.states_.push_back(std::move(next_states));
    g.parents_.push_back(std::move(next_parents));
  }
  if (g.edges_.size() < g.states_.size()) g.edges_.emplace_back();
  return g;
}

History SupportGraph::witness_history(std::size_t layer, std::size_t state) const {
  std::vector<HistoryEvent> reversed;
  for (std::size_t l = layer; l > 0; --l) {
    const Parent& p = parents_[l][state];
    reversed.push_back(HistoryEvent{p.action, p.next});
    state = p.state;
  }
  History h = root_;
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) h = h.append(it->action, it->observation);
  return h;
}

}  // namespace capital
