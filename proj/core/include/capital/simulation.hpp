#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "capital/agents.hpp"
#include "capital/groundings.hpp"
#include "capital/ledger.hpp"
#include "capital/partition.hpp"
#include "capital/units.hpp"

namespace capital {

enum class PartitionScheme { kSingle, kSingletons };

struct SimulationConfig {
  std::uint64_t seed{0};
  std::uint32_t episode{0};
  Time horizon{10};  // number of steps; times 0 .. horizon-1 are played
  PartitionScheme scheme{PartitionScheme::kSingle};
  bool learning{true};
  // Registry size limit; a step that would exceed it throws BudgetExceeded.
  std::size_t max_units{std::numeric_limits<std::size_t>::max()};
};

struct StepRecord {
  Time t{0};
  std::vector<UnitId> units;  // alive units that acted, ascending
  std::vector<ObservationId> joint_observation;
  JointAction joint_action;
};

// Everything a checker needs to re-derive claims about one episode.
struct RolloutLog {
  std::string grounding;
  std::uint64_t seed{0};
  std::uint32_t episode{0};
  Time horizon{0};
  UnitRegistry registry;
  Partitioning partitioning;
  Ledger ledger;
  std::vector<StepRecord> steps;
  std::vector<std::size_t> alive_after;  // alive count after each step
};

// Discrete-time engine. Each step: every partition's agent picks a joint
// action from substream (seed, partition, t, policy); every acting unit,
// in id order, draws its transition from substream (seed, unit, t,
// environment); spawned units join the parent's partition at t + 1.
class Simulation {
 public:
  // The agent is shared by every partition (one lambda_U per partition,
  // same generating process). It must outlive the simulation.
  Simulation(const GroundingSpec& grounding, PartitionAgent& agent, SimulationConfig config);

  bool done() const { return now_ >= config_.horizon; }
  void step();
  void run();

  Time now() const { return now_; }
  const UnitRegistry& registry() const { return log_.registry; }
  const Partitioning& partitioning() const { return log_.partitioning; }
  const Ledger& ledger() const { return log_.ledger; }
  const GroundingSpec& grounding() const { return *grounding_; }
  const PartitionAgent& agent() const { return *agent_; }

  // Decision context for a partition at the current time.
  DecisionContext context(PartitionId partition) const;

  const RolloutLog& log() const { return log_; }
  RolloutLog take_log() &&;

 private:
  const GroundingSpec* grounding_;
  PartitionAgent* agent_;
  SimulationConfig config_;
  Time now_{0};
  RolloutLog log_;
  std::map<PartitionId, EnlargedHistory> enlarged_;
};

RolloutLog run_episode(const GroundingSpec& grounding, PartitionAgent& agent, const SimulationConfig& config);

struct EpisodeSummary {
  std::uint32_t episode{0};
  std::int64_t undiscounted_k{0};  // total cents earned over the episode
  std::size_t final_population{0};
};

// Undiscounted total across partitions.
EpisodeSummary summarize(const RolloutLog& log);

}  // namespace capital
