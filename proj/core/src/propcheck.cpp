#include "capital/propcheck.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "capital/error.hpp"
#include "capital/policy.hpp"
#include "capital/realizable.hpp"

namespace capital {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kWitnessed:
      return "witnessed";
    case Verdict::kRefuted:
      return "refuted";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

json history_json(const History& h) {
  json events = json::array();
  for (const auto& e : h.events()) events.push_back({e.action.value, e.observation.value});
  return {{"origin", h.origin().value}, {"birth", h.birth_time()}, {"events", std::move(events)}};
}

History history_from_json(const json& j) {
  History h(ObservationId(j.at("origin").get<std::uint32_t>()), j.at("birth").get<Time>());
  for (const auto& e : j.at("events")) {
    h = h.append(ActionId(e.at(0).get<std::uint32_t>()), ObservationId(e.at(1).get<std::uint32_t>()));
  }
  return h;
}

json rollout_json(const RolloutLog& log) {
  return {{"seed", log.seed}, {"episode", log.episode}, {"horizon", log.horizon}};
}

PropositionReport make_report(Proposition p, Verdict v) {
  PropositionReport r;
  r.prop = p;
  r.status = v;
  return r;
}

std::size_t alive_before(const GroundingSpec* g, const RolloutLog& log, std::size_t step) {
  if (step > 0) return log.alive_after[step - 1];
  return g ? g->initial_units : log.steps.empty() ? 0 : log.steps[0].units.size();
}

History root_of(const GroundingSpec& g) { return History(g.initial_observation, 0); }

enum class Item { kAction, kObservation };

// First time an item appears in the realizable set, with baseline the first
// searchable time. A witness is an item whose first appearance is later.
PropositionReport check_time_dependence(Proposition prop, Item item, const GroundingSpec& g, std::size_t t_max,
                                        std::size_t node_cap) {
  PropositionReport r = make_report(prop, Verdict::kInconclusive);
  r.depth = t_max;
  const auto graph = SupportGraph::build(g.env, root_of(g), t_max, node_cap);
  // Actions are taken at times 0 .. t_max-1; observations are emitted at 1 .. t_max.
  const Time first_time = item == Item::kAction ? 0 : 1;
  std::size_t searched = 0;
  std::map<std::uint32_t, Time> first_seen;
  std::optional<std::tuple<std::uint32_t, Time, std::size_t, std::size_t>> found;
  for (std::size_t layer = 0; layer < graph.layers(); ++layer) {
    const auto& edges = graph.edges(layer);
    if (edges.empty()) continue;
    ++searched;
    const Time at = graph.time_of(layer) + (item == Item::kAction ? 0 : 1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = edges[e];
      const std::uint32_t id = item == Item::kAction ? edge.action.value : edge.next.value;
      if (first_seen.emplace(id, at).second && at > first_time && !found) found.emplace(id, at, layer, e);
    }
  }
  if (found) {
    const auto [id, tau, layer, e] = *found;
    const auto& edge = graph.edges(layer)[e];
    History h = graph.witness_history(layer, edge.from);
    r.status = Verdict::kWitnessed;
    r.witness = {{"t", tau - 1},
                 {"tau", tau},
                 {item == Item::kAction ? "action" : "observation", id},
                 {"history", history_json(h.append(edge.action, edge.next))}};
    return r;
  }
  if (searched < 2) {
    r.note = "fewer than two time steps within depth";
    return r;
  }
  r.status = Verdict::kRefuted;
  json seen = json::array();
  for (const auto& [id, at] : first_seen) seen.push_back({id, at});
  r.witness = {{"first_seen", std::move(seen)}};
  r.note = "refuted within depth";
  return r;
}

}  // namespace

PropositionReport check_historical(const RolloutLog& log) {
  PropositionReport r = make_report(Proposition::P1, Verdict::kInconclusive);
  r.note = "conformance check";
  std::map<UnitId, std::vector<const LedgerEntry*>> per_unit;
  for (const auto& e : log.ledger.entries()) per_unit[e.unit].push_back(&e);
  json violations = json::array();
  for (const auto& unit : log.registry.units()) {
    const auto& entries = per_unit[unit.id];
    const auto& events = unit.history.events();
    bool ok = events.size() == entries.size() && unit.history.birth_time() == unit.birth_time;
    ObservationId current = unit.history.origin();
    for (std::size_t i = 0; ok && i < entries.size(); ++i) {
      const auto& e = *entries[i];
      ok = e.t == unit.birth_time + static_cast<Time>(i) && e.obs == current && e.action == events[i].action &&
           e.next_obs == events[i].observation;
      current = e.next_obs;
    }
    if (!ok) violations.push_back(unit.id.value);
  }
  if (!violations.empty()) {
    r.status = Verdict::kRefuted;
    r.witness = {{"rollout", rollout_json(log)}, {"units", std::move(violations)}};
    return r;
  }
  if (log.ledger.empty()) return r;
  r.status = Verdict::kWitnessed;
  r.witness = {{"rollout", rollout_json(log)},
               {"units", log.registry.units().size()},
               {"entries", log.ledger.size()}};
  return r;
}

PropositionReport check_discreteness(const RolloutLog& log) {
  PropositionReport r = make_report(Proposition::P2, Verdict::kInconclusive);
  const LedgerEntry* first = nullptr;
  for (const auto& e : log.ledger.entries()) {
    if (e.reward_k < 0) {
      r.status = Verdict::kRefuted;
      r.witness = {{"rollout", rollout_json(log)}, {"t", e.t}, {"unit", e.unit.value}, {"reward_k", e.reward_k}};
      return r;
    }
    if (!first && e.reward_k > 0) first = &e;
  }
  if (!first) {
    r.note = "no positive reward in rollout";
    return r;
  }
  r.status = Verdict::kWitnessed;
  r.witness = {{"rollout", rollout_json(log)},
               {"t", first->t},
               {"unit", first->unit.value},
               {"reward_k", first->reward_k},
               {"entries", log.ledger.size()}};
  return r;
}

PropositionReport check_units_afford(const GroundingSpec& g, const RolloutLog& log) {
  PropositionReport r = make_report(Proposition::P3, Verdict::kInconclusive);
  if (log.steps.empty()) return r;
  json m = json::array();
  json capital = json::array();
  std::int64_t g_prev = g.initial_capital_k;
  std::size_t entry = 0;
  const auto& entries = log.ledger.entries();
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& step = log.steps[i];
    const std::size_t alive = alive_before(&g, log, i);
    m.push_back(alive);
    bool ok = step.joint_observation.size() == alive && step.joint_action.size() == alive;
    if (ok && g.units_per_cent) {
      capital.push_back(g_prev);
      ok = static_cast<std::int64_t>(alive) == static_cast<std::int64_t>(*g.units_per_cent) * g_prev;
    }
    if (!ok) {
      r.status = Verdict::kRefuted;
      r.witness = {{"rollout", rollout_json(log)},
                   {"t", step.t},
                   {"m", alive},
                   {"observations", step.joint_observation.size()},
                   {"actions", step.joint_action.size()}};
      if (g.units_per_cent) r.witness["G"] = g_prev;
      return r;
    }
    while (entry < entries.size() && entries[entry].t == step.t) g_prev += entries[entry++].reward_k;
  }
  r.status = Verdict::kWitnessed;
  r.witness = {{"rollout", rollout_json(log)}, {"m", std::move(m)}};
  if (g.units_per_cent) {
    r.witness["G"] = std::move(capital);
    r.witness["k"] = *g.units_per_cent;
  }
  return r;
}

PropositionReport check_generation(const RolloutLog& log) {
  PropositionReport r = make_report(Proposition::P6, Verdict::kInconclusive);
  json first;
  json violations = json::array();
  for (const auto& e : log.ledger.entries()) {
    for (auto child : e.spawned) {
      const json item = {{"t", e.t}, {"parent", e.unit.value}, {"child", child.value}, {"next_obs", e.next_obs.value}};
      if (!log.registry.contains(child)) {
        violations.push_back(item);
        continue;
      }
      const auto& c = log.registry.at(child);
      if (c.history.origin() != e.next_obs || c.birth_time != e.t + 1 || c.parent != e.unit) {
        json bad = item;
        bad["origin"] = c.history.origin().value;
        violations.push_back(std::move(bad));
      } else if (first.is_null()) {
        first = item;
      }
    }
  }
  if (!violations.empty()) {
    r.status = Verdict::kRefuted;
    r.witness = {{"rollout", rollout_json(log)}, {"violations", std::move(violations)}};
    return r;
  }
  if (first.is_null()) {
    r.note = "no spawn in rollout";
    return r;
  }
  r.status = Verdict::kWitnessed;
  r.witness = {{"rollout", rollout_json(log)}, {"spawn", std::move(first)}};
  return r;
}

PropositionReport check_partitioned(const RolloutLog& log) {
  PropositionReport r = make_report(Proposition::P8, Verdict::kInconclusive);
  if (log.steps.empty()) return r;
  const auto& entries = log.ledger.entries();
  std::size_t entry = 0;
  json first;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& step = log.steps[i];
    std::map<UnitId, PartitionId> owner;
    std::map<PartitionId, std::set<UnitId>> members;
    std::optional<UnitId> duplicate;
    for (; entry < entries.size() && entries[entry].t == step.t; ++entry) {
      const auto& e = entries[entry];
      if (!owner.emplace(e.unit, e.partition).second) duplicate = e.unit;
      members[e.partition].insert(e.unit);
    }
    const bool covered = owner.size() == alive_before(nullptr, log, i) && owner.size() == step.units.size();
    if (duplicate || !covered) {
      r.status = Verdict::kRefuted;
      r.witness = {{"rollout", rollout_json(log)}, {"t", step.t}, {"acting", owner.size()}};
      if (duplicate) r.witness["unit"] = duplicate->value;
      return r;
    }
    if (first.is_null()) {
      json parts = json::array();
      for (const auto& [pid, set] : members) {
        json ids = json::array();
        for (auto u : set) ids.push_back(u.value);
        parts.push_back({{"partition", pid.value}, {"members", std::move(ids)}});
      }
      first = {{"t", step.t}, {"partitions", std::move(parts)}};
    }
  }
  std::set<UnitId> alive;
  for (auto id : log.registry.alive_ids()) alive.insert(id);
  const auto final_report = check_partitioning(log.partitioning, alive);
  if (!final_report.valid()) {
    const auto& v = final_report.violations.front();
    r.status = Verdict::kRefuted;
    r.witness = {{"rollout", rollout_json(log)},
                 {"final", true},
                 {"kind", to_string(v.kind)},
                 {"partition", v.partition.value},
                 {"unit", v.unit.value}};
    return r;
  }
  r.status = Verdict::kWitnessed;
  r.witness = {{"rollout", rollout_json(log)}, {"first", std::move(first)}};
  return r;
}

PropositionReport check_action_time_dependence(const GroundingSpec& g, std::size_t t_max, std::size_t node_cap) {
  return check_time_dependence(Proposition::P4, Item::kAction, g, t_max, node_cap);
}

PropositionReport check_observation_time_dependence(const GroundingSpec& g, std::size_t t_max,
                                                    std::size_t node_cap) {
  return check_time_dependence(Proposition::P9, Item::kObservation, g, t_max, node_cap);
}

PropositionReport check_action_observation_dependence(const GroundingSpec& g) {
  PropositionReport r = make_report(Proposition::P5, Verdict::kRefuted);
  r.exact = true;
  const auto& env = g.env;
  // Availability is piecewise constant between epoch and window boundaries.
  std::set<Time> times{0};
  auto add_epoch = [&](const Epoch& e) {
    times.insert(e.start);
    if (e.end != kTimeInfinity) times.insert(e.end + 1);
  };
  for (const auto& o : env.observations()) add_epoch(o.epoch);
  for (const auto& a : env.actions()) add_epoch(a.epoch);
  for (const auto& d : env.dynamics_entries()) add_epoch(d.row.window);
  for (Time t : times) {
    std::vector<std::pair<ObservationId, std::vector<ActionId>>> table;
    for (const auto& o : env.observations()) {
      if (env.observation_active(o.id, t)) table.emplace_back(o.id, env.available_actions(o.id, t));
    }
    for (const auto& [o, acts] : table) {
      for (const auto& [o2, acts2] : table) {
        if (o == o2) continue;
        for (auto a : acts) {
          if (std::find(acts2.begin(), acts2.end(), a) == acts2.end()) {
            r.status = Verdict::kWitnessed;
            r.witness = {{"t", t}, {"o", o.value}, {"o_prime", o2.value}, {"action", a.value}};
            return r;
          }
        }
      }
    }
  }
  r.note = times.size() == 1 && env.observations().size() < 2 ? "single observation" : "";
  return r;
}

namespace {

PropositionReport nonergodicity_exact(const GroundingSpec& g) {
  PropositionReport r = make_report(Proposition::P7, Verdict::kRefuted);
  r.exact = true;
  const auto& env = g.env;
  std::map<ObservationId, std::set<ObservationId>> succ;
  std::map<ObservationId, std::pair<ObservationId, ActionId>> parent;
  std::vector<ObservationId> order{g.initial_observation};
  std::set<ObservationId> seen{g.initial_observation};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const ObservationId o = order[i];
    auto& out = succ[o];
    for (auto a : env.available_actions(o, 0)) {
      for (const auto& n : env.dynamics(History(o, 0), a).outcomes()) {
        out.insert(n.id);
        if (seen.insert(n.id).second) {
          parent[n.id] = {o, a};
          order.push_back(n.id);
        }
      }
    }
  }
  // Observations reachable in one or more steps.
  auto reach_plus = [&](ObservationId from) {
    std::set<ObservationId> reached;
    std::vector<ObservationId> stack(succ[from].begin(), succ[from].end());
    while (!stack.empty()) {
      const ObservationId x = stack.back();
      stack.pop_back();
      if (!reached.insert(x).second) continue;
      for (auto y : succ[x]) stack.push_back(y);
    }
    return reached;
  };
  for (auto o : order) {
    for (auto a : env.available_actions(o, 0)) {
      for (const auto& n : env.dynamics(History(o, 0), a).outcomes()) {
        if (reach_plus(n.id).contains(o)) continue;
        std::vector<HistoryEvent> path;
        for (ObservationId x = o; x != g.initial_observation;) {
          const auto& [prev, act] = parent.at(x);
          path.push_back({act, x});
          x = prev;
        }
        History h = root_of(g);
        for (auto it = path.rbegin(); it != path.rend(); ++it) h = h.append(it->action, it->observation);
        r.status = Verdict::kWitnessed;
        r.witness = {{"o", o.value},
                     {"action", a.value},
                     {"o_prime", n.id.value},
                     {"history", history_json(h.append(a, n.id))}};
        return r;
      }
    }
  }
  return r;
}

PropositionReport nonergodicity_bounded(const GroundingSpec& g, std::size_t t_max, std::size_t node_cap) {
  PropositionReport r = make_report(Proposition::P7, Verdict::kInconclusive);
  r.depth = t_max;
  const auto graph = SupportGraph::build(g.env, root_of(g), t_max, node_cap);
  const std::size_t layers = graph.layers();
  // future[l][s]: observations emitted after state s; open[l][s]: some path
  // from s reaches the search depth.
  std::vector<std::vector<std::set<ObservationId>>> future(layers);
  std::vector<std::vector<bool>> open(layers);
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t n = graph.states(l).size();
    future[l].assign(n, {});
    open[l].assign(n, l == t_max);
    for (const auto& e : graph.edges(l)) {
      future[l][e.from].insert(e.next);
      future[l][e.from].insert(future[l + 1][e.to].begin(), future[l + 1][e.to].end());
      if (open[l + 1][e.to]) open[l][e.from] = true;
    }
  }
  bool unresolved = false;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    for (const auto& e : graph.edges(l)) {
      const ObservationId o = graph.states(l)[e.from].current;
      if (future[l + 1][e.to].contains(o)) continue;
      if (open[l + 1][e.to]) {
        unresolved = true;
        continue;
      }
      const History h = graph.witness_history(l, e.from);
      r.status = Verdict::kWitnessed;
      r.witness = {{"o", o.value},
                   {"action", e.action.value},
                   {"o_prime", e.next.value},
                   {"history", history_json(h.append(e.action, e.next))}};
      r.note = "every continuation ends without returning";
      return r;
    }
  }
  if (!unresolved) {
    r.status = Verdict::kRefuted;
    r.note = "refuted within depth";
  } else {
    r.note = "no return within depth for some transition";
  }
  return r;
}

}  // namespace

PropositionReport check_nonergodicity(const GroundingSpec& g, std::size_t t_max, std::size_t node_cap) {
  if (g.env.key_depth().is_markov() && g.env.time_invariant()) return nonergodicity_exact(g);
  return nonergodicity_bounded(g, t_max, node_cap);
}

const PropositionReport* CheckRun::find(Proposition p) const {
  for (const auto& r : reports) {
    if (r.prop == p) return &r;
  }
  return nullptr;
}

namespace {

RolloutLog checker_rollout(const GroundingSpec& g, const PartitionAgent& agent, const CheckConfig& config) {
  auto copy = agent.clone();
  SimulationConfig sim;
  sim.seed = config.seed;
  sim.horizon = config.horizon;
  sim.max_units = config.node_cap;
  return run_episode(g, *copy, sim);
}

PropositionReport run_one(Proposition p, const GroundingSpec& g, const CheckConfig& config, const RolloutLog* log) {
  switch (p) {
    case Proposition::P1:
      return check_historical(*log);
    case Proposition::P2:
      return check_discreteness(*log);
    case Proposition::P3:
      return check_units_afford(g, *log);
    case Proposition::P4:
      return check_action_time_dependence(g, config.t_max, config.node_cap);
    case Proposition::P5:
      return check_action_observation_dependence(g);
    case Proposition::P6:
      return check_generation(*log);
    case Proposition::P7:
      return check_nonergodicity(g, config.t_max, config.node_cap);
    case Proposition::P8:
      return check_partitioned(*log);
    case Proposition::P9:
      return check_observation_time_dependence(g, config.t_max, config.node_cap);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown proposition");
}

bool needs_rollout(Proposition p) {
  return p == Proposition::P1 || p == Proposition::P2 || p == Proposition::P3 || p == Proposition::P6 ||
         p == Proposition::P8;
}

CheckFailure failure(std::string stage, const std::exception& e) {
  CheckFailure f{std::move(stage), e.what()};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    f.budget = err->code() == ErrorCode::kBudgetExceeded || err->code() == ErrorCode::kEnumerationCapExceeded;
  }
  return f;
}

}  // namespace

CheckRun check_all(const GroundingSpec& g, const PartitionAgent& agent, const CheckConfig& config) {
  CheckRun run;
  run.grounding = g.name;
  run.agent = agent.name();
  run.config = config;
  try {
    for (auto& issue : validate_grounding(g, config.t_max)) run.errors.push_back({"validate", std::move(issue), false});
  } catch (const std::exception& e) {
    run.errors.push_back(failure("validate", e));
  }
  std::optional<RolloutLog> log;
  try {
    log = checker_rollout(g, agent, config);
  } catch (const std::exception& e) {
    run.errors.push_back(failure("rollout", e));
  }
  for (auto p : all_propositions()) {
    if (needs_rollout(p) && !log) {
      PropositionReport r = make_report(p, Verdict::kInconclusive);
      r.note = "rollout failed";
      run.reports.push_back(std::move(r));
      continue;
    }
    try {
      run.reports.push_back(run_one(p, g, config, log ? &*log : nullptr));
    } catch (const std::exception& e) {
      run.errors.push_back(failure(to_string(p), e));
      PropositionReport r = make_report(p, Verdict::kInconclusive);
      r.note = e.what();
      run.reports.push_back(std::move(r));
    }
  }
  return run;
}

bool replay_witness(const GroundingSpec& g, const PartitionAgent& agent, const CheckConfig& config,
                    const PropositionReport& report) {
  std::optional<RolloutLog> log;
  if (needs_rollout(report.prop)) {
    const auto& w = report.witness;
    if (w.contains("rollout")) {
      CheckConfig replay = config;
      replay.seed = w["rollout"].at("seed").get<std::uint64_t>();
      replay.horizon = w["rollout"].at("horizon").get<Time>();
      log = checker_rollout(g, agent, replay);
    } else {
      log = checker_rollout(g, agent, config);
    }
  }
  const PropositionReport again = run_one(report.prop, g, config, log ? &*log : nullptr);
  if (to_json(again) != to_json(report)) return false;
  if (report.witness.contains("history")) {
    const History h = history_from_json(report.witness["history"]);
    if (!is_realizable(UniformPolicy(g.env), g.env, h)) return false;
  }
  return true;
}

json to_json(const PropositionReport& r) {
  json j = {{"prop", to_string(r.prop)},
            {"status", to_string(r.status)},
            {"depth", r.depth ? json(*r.depth) : json(nullptr)},
            {"exact", r.exact},
            {"witness", r.witness}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const CheckRun& run) {
  json reports = json::array();
  for (const auto& r : run.reports) reports.push_back(to_json(r));
  json errors = json::array();
  for (const auto& e : run.errors) errors.push_back({{"stage", e.stage}, {"message", e.message}});
  return {{"schema", kPropsSchema},
          {"grounding", run.grounding},
          {"agent", run.agent},
          {"config",
           {{"t_max", run.config.t_max},
            {"horizon", run.config.horizon},
            {"seed", run.config.seed},
            {"node_cap", run.config.node_cap}}},
          {"reports", std::move(reports)},
          {"errors", std::move(errors)}};
}

}  // namespace capital
