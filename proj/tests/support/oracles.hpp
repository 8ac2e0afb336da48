#pragma once

// Brute-force reference computations used by the unit and acceptance tests.
// They share only catalogue lookups with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "capital/agents.hpp"
#include "capital/environment.hpp"
#include "capital/history.hpp"
#include "capital/ledger.hpp"
#include "capital/rational.hpp"

namespace oracle {

using namespace capital;

// Mass of h under the uniform-over-available policy, step by step.
inline Rational uniform_path_mass(const EnvironmentModel& env, const History& h) {
  Rational mass = 1;
  History walk(h.origin(), h.birth_time());
  for (const auto& e : h.events()) {
    const Time t = walk.now();
    const HistoryKey key = make_key(walk, env.key_depth());
    std::vector<ActionId> options;
    for (const auto& a : env.actions()) {
      if (a.epoch.contains(t) && env.find_dynamics(key, a.id, t)) options.push_back(a.id);
    }
    if (!env.observation_active(walk.current_observation(), t)) return 0;
    if (std::find(options.begin(), options.end(), e.action) == options.end()) return 0;
    const auto* row = env.find_dynamics(key, e.action, t);
    mass *= Rational(1, static_cast<long long>(options.size())) * row->prob(e.observation);
    if (mass == 0) return 0;
    walk = walk.append(e.action, e.observation);
  }
  return mass;
}

// Every (a, o)^d sequence for d <= t_max, kept when its mass is positive.
inline std::set<History> brute_force_realizable(const EnvironmentModel& env, const History& root, std::size_t t_max) {
  std::set<History> out;
  std::vector<History> frontier{root};
  out.insert(root);
  for (std::size_t d = 0; d < t_max; ++d) {
    std::vector<History> next;
    for (const auto& h : frontier) {
      for (const auto& a : env.actions()) {
        for (const auto& o : env.observations()) {
          History candidate = h.append(a.id, o.id);
          next.push_back(candidate);
        }
      }
    }
    frontier.clear();
    for (auto& h : next) {
      if (uniform_path_mass(env, h) > 0) {
        out.insert(h);
        frontier.push_back(std::move(h));
      }
    }
  }
  return out;
}

// sum over t in [tau, last] of gamma^t * sum of k over units, times cent,
// accumulated entry by entry.
inline Rational discounted_return(const std::vector<LedgerEntry>& entries, const std::set<UnitId>& units,
                                  const Rational& gamma, Time tau, Time last, const Rational& cent) {
  Rational total = 0;
  for (const auto& e : entries) {
    if (e.t < tau || e.t > last || !units.contains(e.unit)) continue;
    Rational weight = 1;
    for (Time i = 0; i < e.t; ++i) weight *= gamma;
    total += weight * Rational(e.reward_k) * cent;
  }
  return total;
}

// Lexicographically smallest joint action maximising the summed one-step
// reward, by enumerating the cartesian product.
inline JointAction greedy_exhaustive(const EnvironmentModel& env, const DecisionContext& ctx) {
  JointAction best;
  std::int64_t best_value = -1;
  JointAction current(ctx.size());
  std::vector<std::size_t> idx(ctx.size(), 0);
  while (true) {
    std::int64_t value = 0;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      current[i] = ctx.available[i][idx[i]];
      value += env.reward(ctx.observation(i), current[i]);
    }
    if (value > best_value || (value == best_value && current < best)) {
      best_value = value;
      best = current;
    }
    std::size_t i = ctx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < ctx.available[i].size()) break;
      idx[i] = 0;
      if (i == 0) return best;
    }
    if (ctx.size() == 0) return best;
  }
}

}  // namespace oracle
