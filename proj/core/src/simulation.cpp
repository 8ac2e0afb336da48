#include "capital/simulation.hpp"

#include <algorithm>

#include "capital/error.hpp"

namespace capital {

Simulation::Simulation(const GroundingSpec& grounding, PartitionAgent& agent, SimulationConfig config)
    : grounding_(&grounding), agent_(&agent), config_(config) {
  if (config_.horizon < 0) throw Error(ErrorCode::kInvalidConfig, "horizon must be non-negative");
  log_.grounding = grounding.name;
  log_.seed = config.seed;
  log_.episode = config.episode;
  log_.horizon = config.horizon;
  std::vector<UnitId> initial;
  for (std::size_t i = 0; i < grounding.initial_units; ++i) {
    initial.push_back(log_.registry.create(grounding.initial_observation, 0));
  }
  log_.partitioning =
      config.scheme == PartitionScheme::kSingle ? single_partition(initial) : singleton_partitions(initial);
}

DecisionContext Simulation::context(PartitionId partition) const {
  const Partition* p = log_.partitioning.find(partition);
  if (!p) throw Error(ErrorCode::kInvalidArgument, "unknown partition " + std::to_string(partition.value));
  DecisionContext ctx;
  ctx.t = now_;
  auto it = enlarged_.find(partition);
  ctx.enlarged = it == enlarged_.end() ? nullptr : &it->second;
  for (auto unit : p->members) {
    const CapitalUnit& u = log_.registry.at(unit);
    if (!u.alive) continue;
    ctx.units.push_back(unit);
    ctx.histories.push_back(&u.history);
    ctx.available.push_back(grounding_->env.available_actions(u.history));
  }
  return ctx;
}

void Simulation::step() {
  if (done()) return;
  const Time t = now_;
  const auto& env = grounding_->env;
  const auto t32 = static_cast<std::uint32_t>(t);

  struct Decision {
    UnitId unit;
    PartitionId partition;
    ActionId action;
  };
  std::vector<Decision> decisions;
  for (const auto& p : log_.partitioning.partitions) {
    const DecisionContext ctx = context(p.id);
    if (ctx.size() == 0) continue;
    RandomStream rng(StreamAddress{config_.seed, config_.episode, p.id.value, t32, StreamPurpose::kPolicy});
    const JointAction joint = agent_->act(ctx, rng);
    for (std::size_t i = 0; i < ctx.size(); ++i) decisions.push_back({ctx.units[i], p.id, joint[i]});
  }
  std::sort(decisions.begin(), decisions.end(), [](const Decision& a, const Decision& b) { return a.unit < b.unit; });

  StepRecord record;
  record.t = t;
  std::map<PartitionId, EnlargedStep> enlarged_steps;
  std::vector<History> before;
  before.reserve(decisions.size());
  for (const auto& d : decisions) {
    const History history = log_.registry.at(d.unit).history;
    const ObservationId o = history.current_observation();
    RandomStream rng(StreamAddress{config_.seed, config_.episode, d.unit.value, t32, StreamPurpose::kEnvironment});
    const StepOutcome outcome = env_step(env, history, d.action, rng);

    const Transition transition{t, o, d.action, outcome.reward_k, outcome.next};
    std::vector<UnitId> children;
    if (outcome.spawned > 0) {
      if (outcome.spawned > config_.max_units - log_.registry.units().size()) {
        throw Error(ErrorCode::kBudgetExceeded, "more than " + std::to_string(config_.max_units) + " units at t=" +
                                                    std::to_string(t));
      }
      children = spawn_units(log_.registry, d.unit, transition, outcome.spawned);
    }

    Partition* partition = log_.partitioning.find(d.partition);
    for (auto child : children) partition->members.insert(child);

    log_.ledger.append(LedgerEntry{t, d.unit, d.partition, o, d.action, outcome.reward_k, outcome.next, children});

    CapitalUnit& unit = log_.registry.at(d.unit);
    unit.history = history.append(d.action, outcome.next);
    if (env.is_death(outcome.next)) {
      unit.alive = false;
      partition->members.erase(d.unit);
    }

    record.units.push_back(d.unit);
    record.joint_observation.push_back(o);
    record.joint_action.push_back(d.action);
    auto& es = enlarged_steps[d.partition];
    es.t = t;
    es.slots.push_back(UnitSlot{d.unit, outcome.next, d.action});
    before.push_back(history);
  }

  for (auto& [pid, es] : enlarged_steps) enlarged_[pid].append(std::move(es));
  std::erase_if(log_.partitioning.partitions, [](const Partition& p) { return p.members.empty(); });

  ++now_;

  if (config_.learning) {
    if (auto* learner = dynamic_cast<LearningAgent*>(agent_)) {
      std::vector<LearningAgent::UnitTransition> transitions;
      transitions.reserve(decisions.size());
      for (std::size_t i = 0; i < decisions.size(); ++i) {
        const CapitalUnit& unit = log_.registry.at(decisions[i].unit);
        std::vector<ActionId> next;
        if (unit.alive) next = env.available_actions(unit.history);
        const auto& entry = log_.ledger.entries()[log_.ledger.size() - decisions.size() + i];
        transitions.push_back({&before[i], decisions[i].action, entry.reward_k, &unit.history, std::move(next)});
      }
      learner->learn(transitions);
    }
  }

  log_.steps.push_back(std::move(record));
  log_.alive_after.push_back(log_.registry.alive_count());
}

void Simulation::run() {
  while (!done()) step();
}

RolloutLog Simulation::take_log() && { return std::move(log_); }

RolloutLog run_episode(const GroundingSpec& grounding, PartitionAgent& agent, const SimulationConfig& config) {
  Simulation sim(grounding, agent, config);
  sim.run();
  return std::move(sim).take_log();
}

EpisodeSummary summarize(const RolloutLog& log) {
  EpisodeSummary s;
  s.episode = log.episode;
  for (const auto& e : log.ledger.entries()) s.undiscounted_k += e.reward_k;
  s.final_population = log.registry.alive_count();
  return s;
}

}  // namespace capital
