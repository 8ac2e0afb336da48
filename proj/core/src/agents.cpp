#include "capital/agents.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

#include "capital/error.hpp"

namespace capital {

namespace {

std::uint64_t probability_threshold(const Rational& p) {
  if (!(p > 0)) return 0;
  return detail::scaled_threshold(p);
}

std::vector<ActionId> action_union(const DecisionContext& ctx) {
  std::vector<ActionId> all;
  for (const auto& avail : ctx.available) all.insert(all.end(), avail.begin(), avail.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

JointAction correlated_choice(const DecisionContext& ctx, ActionId common) {
  JointAction joint;
  joint.reserve(ctx.size());
  for (const auto& avail : ctx.available) {
    joint.push_back(std::binary_search(avail.begin(), avail.end(), common) ? common : avail.front());
  }
  return joint;
}

ActionDistribution marginal_of(const JointActionDistribution& joint, std::size_t i) {
  std::map<ActionId, Rational> masses;
  for (const auto& o : joint.outcomes()) masses[o.id[i]] += o.prob;
  std::vector<ActionDistribution::Outcome> outcomes;
  for (auto& [a, p] : masses) outcomes.push_back({a, std::move(p)});
  return ActionDistribution::from(std::move(outcomes));
}

}  // namespace

std::string to_string(ProcessKind kind) {
  return kind == ProcessKind::kQuantitative ? "quantitative" : "qualitative";
}

std::vector<HistoryEvent> EnlargedHistory::project(UnitId unit) const {
  std::vector<HistoryEvent> events;
  for (const auto& step : steps_) {
    for (const auto& slot : step.slots) {
      if (slot.unit == unit) events.push_back(HistoryEvent{slot.action, slot.observation});
    }
  }
  return events;
}

PartitionAgent::PartitionAgent(Rational gamma) : gamma_(std::move(gamma)) {
  if (gamma_ < 0 || gamma_ > 1) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0, 1]");
}

void PartitionAgent::require_available(const DecisionContext& ctx) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx.available[i].empty()) {
      throw Error(ErrorCode::kNoAvailableAction, "unit " + std::to_string(ctx.units[i].value) + " at t=" +
                                                     std::to_string(ctx.t));
    }
  }
}

JointActionDistribution PartitionAgent::joint_distribution(const DecisionContext& ctx, std::size_t cap) const {
  require_available(ctx);
  if (!independent()) {
    throw Error(ErrorCode::kInvalidArgument, name() + " must provide its own joint distribution");
  }
  std::vector<ActionDistribution> marginals;
  std::size_t terms = 1;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    marginals.push_back(unit_marginal(ctx, i));
    terms *= marginals.back().size();
    if (terms > cap) throw Error(ErrorCode::kEnumerationCapExceeded, "joint action support exceeds cap");
  }
  std::vector<JointActionDistribution::Outcome> outcomes{{JointAction{}, Rational(1)}};
  for (const auto& m : marginals) {
    std::vector<JointActionDistribution::Outcome> next;
    next.reserve(outcomes.size() * m.size());
    for (const auto& prefix : outcomes) {
      for (const auto& o : m.outcomes()) {
        JointAction joint = prefix.id;
        joint.push_back(o.id);
        next.push_back({std::move(joint), prefix.prob * o.prob});
      }
    }
    outcomes = std::move(next);
  }
  return JointActionDistribution::from(std::move(outcomes));
}

JointAction PartitionAgent::act(const DecisionContext& ctx, RandomStream& rng) const {
  require_available(ctx);
  JointAction joint;
  joint.reserve(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) joint.push_back(unit_marginal(ctx, i).sample(rng));
  return joint;
}

// ---- RandomAgent ----

ActionDistribution RandomAgent::unit_marginal(const DecisionContext& ctx, std::size_t i) const {
  require_available(ctx);
  return ActionDistribution::uniform(ctx.available[i]);
}

JointAction RandomAgent::act(const DecisionContext& ctx, RandomStream& rng) const {
  require_available(ctx);
  JointAction joint;
  joint.reserve(ctx.size());
  for (const auto& avail : ctx.available) joint.push_back(avail[rng.next_index(avail.size())]);
  return joint;
}

// ---- CorrelatedAgent ----

JointActionDistribution CorrelatedAgent::joint_distribution(const DecisionContext& ctx, std::size_t cap) const {
  require_available(ctx);
  const auto options = action_union(ctx);
  if (options.size() > cap) throw Error(ErrorCode::kEnumerationCapExceeded, "joint action support exceeds cap");
  std::map<JointAction, Rational> masses;
  const Rational each(1, static_cast<long long>(options.size()));
  for (auto c : options) masses[correlated_choice(ctx, c)] += each;
  std::vector<JointActionDistribution::Outcome> outcomes;
  for (auto& [joint, p] : masses) outcomes.push_back({joint, std::move(p)});
  return JointActionDistribution::from(std::move(outcomes));
}

ActionDistribution CorrelatedAgent::unit_marginal(const DecisionContext& ctx, std::size_t i) const {
  return marginal_of(joint_distribution(ctx, std::numeric_limits<std::size_t>::max()), i);
}

JointAction CorrelatedAgent::act(const DecisionContext& ctx, RandomStream& rng) const {
  require_available(ctx);
  const auto options = action_union(ctx);
  return correlated_choice(ctx, options[rng.next_index(options.size())]);
}

// ---- FixedJointAgent ----

FixedJointAgent::FixedJointAgent(JointActionDistribution joint, Rational gamma)
    : PartitionAgent(std::move(gamma)), joint_(std::move(joint)) {}

JointActionDistribution FixedJointAgent::restricted(const DecisionContext& ctx) const {
  require_available(ctx);
  std::vector<JointActionDistribution::Outcome> kept;
  Rational total = 0;
  for (const auto& o : joint_.outcomes()) {
    if (o.id.size() != ctx.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < ctx.size() && ok; ++i) {
      ok = std::binary_search(ctx.available[i].begin(), ctx.available[i].end(), o.id[i]);
    }
    if (ok) {
      kept.push_back(o);
      total += o.prob;
    }
  }
  if (kept.empty()) throw Error(ErrorCode::kNoAvailableAction, "fixed joint law has no available joint action");
  for (auto& o : kept) o.prob /= total;
  return JointActionDistribution::from(std::move(kept));
}

JointActionDistribution FixedJointAgent::joint_distribution(const DecisionContext& ctx, std::size_t cap) const {
  auto joint = restricted(ctx);
  if (joint.size() > cap) throw Error(ErrorCode::kEnumerationCapExceeded, "joint action support exceeds cap");
  return joint;
}

ActionDistribution FixedJointAgent::unit_marginal(const DecisionContext& ctx, std::size_t i) const {
  return marginal_of(restricted(ctx), i);
}

JointAction FixedJointAgent::act(const DecisionContext& ctx, RandomStream& rng) const {
  return restricted(ctx).sample(rng);
}

// ---- RuleTableAgent ----

RuleTableAgent::RuleTableAgent(Rules rules, Rational gamma) : PartitionAgent(std::move(gamma)), rules_(std::move(rules)) {}

ActionId RuleTableAgent::choose(ObservationId observation, const std::vector<ActionId>& available) const {
  if (available.empty()) throw Error(ErrorCode::kNoAvailableAction, "rule table agent");
  if (auto it = rules_.find(observation); it != rules_.end()) {
    if (std::binary_search(available.begin(), available.end(), it->second)) return it->second;
  }
  return available.front();
}

ActionDistribution RuleTableAgent::unit_marginal(const DecisionContext& ctx, std::size_t i) const {
  return ActionDistribution::point(choose(ctx.observation(i), ctx.available[i]));
}

JointAction RuleTableAgent::act(const DecisionContext& ctx, RandomStream&) const {
  require_available(ctx);
  JointAction joint;
  for (std::size_t i = 0; i < ctx.size(); ++i) joint.push_back(choose(ctx.observation(i), ctx.available[i]));
  return joint;
}

RuleTableAgent::Rules parse_rule_table(std::string_view text) {
  RuleTableAgent::Rules rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string obs, arrow, action, extra;
    if (!(fields >> obs)) continue;
    if (!(fields >> arrow >> action) || arrow != "->" || (fields >> extra)) {
      throw Error(ErrorCode::kParseError, "rule line " + std::to_string(number) + ": expected 'obs_id -> action_id'");
    }
    auto parse = [number](const std::string& s) {
      std::uint32_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::kParseError, "rule line " + std::to_string(number) + ": bad id '" + s + "'");
      }
      return v;
    };
    const ObservationId o(parse(obs));
    if (rules.contains(o)) {
      throw Error(ErrorCode::kParseError, "rule line " + std::to_string(number) + ": duplicate observation");
    }
    rules.emplace(o, ActionId(parse(action)));
  }
  return rules;
}

// ---- Greedy ----

JointAction greedy_onestep(const EnvironmentModel& env, const DecisionContext& ctx) {
  JointAction joint;
  joint.reserve(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& avail = ctx.available[i];
    if (avail.empty()) {
      throw Error(ErrorCode::kNoAvailableAction, "unit " + std::to_string(ctx.units[i].value));
    }
    // Rewards are additive across units and fixed per (o, a), so the joint
    // argmax with lexicographic tie-breaking is the per-unit lowest argmax.
    const ObservationId o = ctx.observation(i);
    ActionId best = avail.front();
    std::int64_t best_k = env.reward(o, best);
    for (auto a : avail) {
      if (const auto k = env.reward(o, a); k > best_k) {
        best = a;
        best_k = k;
      }
    }
    joint.push_back(best);
  }
  return joint;
}

GreedyAgent::GreedyAgent(std::shared_ptr<const EnvironmentModel> env, Rational gamma)
    : PartitionAgent(std::move(gamma)), env_(std::move(env)) {
  if (!env_) throw Error(ErrorCode::kInvalidArgument, "greedy agent needs model access");
}

ActionDistribution GreedyAgent::unit_marginal(const DecisionContext& ctx, std::size_t i) const {
  return ActionDistribution::point(greedy_onestep(*env_, ctx)[i]);
}

JointAction GreedyAgent::act(const DecisionContext& ctx, RandomStream&) const { return greedy_onestep(*env_, ctx); }

// ---- Q-learning ----

double QTable::value(const HistoryKey& key, ActionId a) const {
  auto it = values_.find({key, a});
  return it == values_.end() ? 0.0 : it->second;
}

double QTable::max_value(const HistoryKey& key, const std::vector<ActionId>& actions) const {
  if (actions.empty()) return 0.0;
  double best = value(key, actions.front());
  for (auto a : actions) best = std::max(best, value(key, a));
  return best;
}

ActionId QTable::argmax(const HistoryKey& key, const std::vector<ActionId>& actions) const {
  if (actions.empty()) throw Error(ErrorCode::kNoAvailableAction, "argmax over no actions");
  ActionId best = actions.front();
  double best_v = value(key, best);
  for (auto a : actions) {
    if (const double v = value(key, a); v > best_v) {
      best = a;
      best_v = v;
    }
  }
  return best;
}

void QTable::set(const HistoryKey& key, ActionId a, double v) { values_[{key, a}] = v; }

void q_update(QTable& table, const QLearningParams& params, const HistoryKey& key, ActionId action,
              std::int64_t reward_k, const HistoryKey& next_key, const std::vector<ActionId>& next_actions) {
  const double q = table.value(key, action);
  const double reward = static_cast<double>(reward_k) * to_double(params.cent);
  const double bootstrap = next_actions.empty() ? 0.0 : to_double(params.gamma) * table.max_value(next_key, next_actions);
  table.set(key, action, q + params.alpha * (reward + bootstrap - q));
}

QAgent::QAgent(QLearningParams params) : PartitionAgent(params.gamma), params_(std::move(params)) {
  if (!(params_.alpha > 0.0 && params_.alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  if (params_.epsilon < 0 || params_.epsilon > 1) throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in [0, 1]");
  epsilon_threshold_ = probability_threshold(params_.epsilon);
}

HistoryKey QAgent::key_of(const History& h) const { return make_key(h, KeyDepth::last(params_.key_depth)); }

ActionDistribution QAgent::unit_marginal(const DecisionContext& ctx, std::size_t i) const {
  require_available(ctx);
  const auto& avail = ctx.available[i];
  const ActionId best = table_.argmax(key_of(*ctx.histories[i]), avail);
  if (!exploring_ || params_.epsilon == 0) return ActionDistribution::point(best);
  const Rational explore = params_.epsilon / static_cast<long long>(avail.size());
  std::vector<ActionDistribution::Outcome> outcomes;
  for (auto a : avail) outcomes.push_back({a, a == best ? explore + (1 - params_.epsilon) : explore});
  return ActionDistribution::from(std::move(outcomes));
}

JointAction QAgent::act(const DecisionContext& ctx, RandomStream& rng) const {
  require_available(ctx);
  JointAction joint;
  joint.reserve(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& avail = ctx.available[i];
    const std::uint64_t u = rng.next_u64();
    if (exploring_ && u < epsilon_threshold_) {
      joint.push_back(avail[rng.next_index(avail.size())]);
    } else {
      joint.push_back(table_.argmax(key_of(*ctx.histories[i]), avail));
    }
  }
  return joint;
}

void QAgent::learn(const std::vector<UnitTransition>& transitions) {
  for (const auto& tr : transitions) {
    q_update(table_, params_, key_of(*tr.before), tr.action, tr.reward_k, key_of(*tr.after), tr.next_available);
  }
}

void write_q_table_csv(std::ostream& out, const QTable& table, KeyDepth depth) {
  out << "key,action,value\n";
  std::ostringstream value;
  value.precision(17);
  for (const auto& [ka, v] : table.entries()) {
    value.str("");
    value << v;
    out << to_string(ka.first, depth) << ',' << ka.second.value << ',' << value.str() << '\n';
  }
}

DiscountedReturn episode_return(const PartitionAgent& agent, const Ledger& ledger, const std::set<UnitId>& units,
                                Time tau, Horizon horizon, const CentQuantum& cent) {
  return discounted_return(reward_stream(ledger), units, agent.gamma(), tau, horizon, cent);
}

std::unique_ptr<PartitionAgent> make_agent(const AgentSpec& spec, std::shared_ptr<const EnvironmentModel> env,
                                           const CentQuantum& cent) {
  if (spec.kind == "random") return std::make_unique<RandomAgent>(spec.gamma);
  if (spec.kind == "correlated") return std::make_unique<CorrelatedAgent>(spec.gamma);
  if (spec.kind == "greedy") return std::make_unique<GreedyAgent>(std::move(env), spec.gamma);
  if (spec.kind == "rules") return std::make_unique<RuleTableAgent>(parse_rule_table(spec.rules_text), spec.gamma);
  if (spec.kind == "q") {
    QLearningParams params;
    params.alpha = spec.alpha;
    params.gamma = spec.gamma;
    params.epsilon = spec.epsilon;
    params.key_depth = spec.depth;
    params.cent = cent.value();
    return std::make_unique<QAgent>(std::move(params));
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown agent kind '" + spec.kind + "'");
}

}  // namespace capital
