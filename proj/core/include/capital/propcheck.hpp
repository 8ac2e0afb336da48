#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "capital/agents.hpp"
#include "capital/groundings.hpp"
#include "capital/simulation.hpp"

namespace capital {

inline constexpr const char* kPropsSchema = "capital.props/1";

enum class Verdict { kWitnessed, kRefuted, kInconclusive };
std::string to_string(Verdict v);

struct PropositionReport {
  Proposition prop{Proposition::P1};
  Verdict status{Verdict::kInconclusive};
  // Search depth behind an existential verdict. A refutation with a depth
  // only covers histories up to that length.
  std::optional<std::size_t> depth;
  bool exact{false};
  nlohmann::json witness = nlohmann::json::object();
  std::string note;
};

struct CheckConfig {
  std::size_t t_max{10};
  Time horizon{10};
  std::uint64_t seed{0};
  std::size_t node_cap{1'000'000};  // also bounds the rollout's unit count
};

// Rollout-based checks. Each records the seed and horizon of the rollout so
// the evidence can be replayed.
PropositionReport check_historical(const RolloutLog& rollout);
PropositionReport check_discreteness(const RolloutLog& rollout);
PropositionReport check_units_afford(const GroundingSpec& grounding, const RolloutLog& rollout);
PropositionReport check_generation(const RolloutLog& rollout);
PropositionReport check_partitioned(const RolloutLog& rollout);

// Table and reachability checks. Realizability is taken under the policy
// that is uniform over available actions, which realizes every history any
// policy can.
PropositionReport check_action_time_dependence(const GroundingSpec& grounding, std::size_t t_max,
                                               std::size_t node_cap = 1'000'000);
PropositionReport check_action_observation_dependence(const GroundingSpec& grounding);
PropositionReport check_nonergodicity(const GroundingSpec& grounding, std::size_t t_max,
                                      std::size_t node_cap = 1'000'000);
PropositionReport check_observation_time_dependence(const GroundingSpec& grounding, std::size_t t_max,
                                                    std::size_t node_cap = 1'000'000);

struct CheckFailure {
  std::string stage;  // proposition id or "validate" / "rollout"
  std::string message;
  bool budget{false};  // a node, enumeration or unit cap was hit
};

struct CheckRun {
  std::string grounding;
  std::string agent;
  CheckConfig config;
  std::vector<PropositionReport> reports;
  std::vector<CheckFailure> errors;

  const PropositionReport* find(Proposition p) const;
};

// Runs every checker, P1 .. P9 in order. Never throws for grounding
// defects; they are recorded in `errors`.
CheckRun check_all(const GroundingSpec& grounding, const PartitionAgent& agent, const CheckConfig& config);

// Re-derives the report from its recorded seed/depth and checks the
// evidence matches exactly; history witnesses are also re-verified as
// realizable with exact arithmetic.
bool replay_witness(const GroundingSpec& grounding, const PartitionAgent& agent, const CheckConfig& config,
                    const PropositionReport& report);

nlohmann::json to_json(const PropositionReport& report);
nlohmann::json to_json(const CheckRun& run);

}  // namespace capital
