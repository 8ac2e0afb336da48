#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "capital/distribution.hpp"
#include "capital/environment.hpp"
#include "capital/history.hpp"
#include "capital/ledger.hpp"
#include "capital/objective.hpp"
#include "capital/units.hpp"

namespace capital {

enum class ProcessKind { kQuantitative, kQualitative };
std::string to_string(ProcessKind kind);

using JointAction = std::vector<ActionId>;
using JointActionDistribution = Distribution<JointAction>;

// A member's action at step t and the observation it produced.
struct UnitSlot {
  UnitId unit;
  ObservationId observation;
  ActionId action;
};

struct EnlargedStep {
  Time t{0};
  std::vector<UnitSlot> slots;
};

// h_U: per-step tuples of every member's (action, next observation).
class EnlargedHistory {
 public:
  void append(EnlargedStep step) { steps_.push_back(std::move(step)); }
  const std::vector<EnlargedStep>& steps() const { return steps_; }
  // The member's own events, in step order.
  std::vector<HistoryEvent> project(UnitId unit) const;

 private:
  std::vector<EnlargedStep> steps_;
};

// What an agent sees when choosing the partition's joint action at time t:
// member ids (ascending), their histories and their available actions.
// No rewards are exposed here.
struct DecisionContext {
  Time t{0};
  std::vector<UnitId> units;
  std::vector<const History*> histories;
  std::vector<std::vector<ActionId>> available;
  const EnlargedHistory* enlarged{nullptr};

  std::size_t size() const { return units.size(); }
  ObservationId observation(std::size_t i) const { return histories[i]->current_observation(); }
};

// lambda_U. Emits joint action distributions over the partition's units.
class PartitionAgent {
 public:
  explicit PartitionAgent(Rational gamma = Rational(0));
  virtual ~PartitionAgent() = default;

  virtual ProcessKind kind() const = 0;
  virtual std::string name() const = 0;
  // True when the joint distribution is the product of unit marginals.
  virtual bool independent() const { return true; }

  virtual ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const = 0;
  // Exact joint distribution. Throws EnumerationCapExceeded when the joint
  // support would exceed `cap` entries.
  virtual JointActionDistribution joint_distribution(const DecisionContext& ctx, std::size_t cap) const;
  // Throws NoAvailableAction if some unit has nothing available.
  virtual JointAction act(const DecisionContext& ctx, RandomStream& rng) const;

  virtual std::unique_ptr<PartitionAgent> clone() const = 0;

  const Rational& gamma() const { return gamma_; }

 protected:
  static void require_available(const DecisionContext& ctx);

 private:
  Rational gamma_;
};

// Agents that learn from rewards. Qualitative agents never derive from this.
class LearningAgent {
 public:
  virtual ~LearningAgent() = default;

  struct UnitTransition {
    const History* before;
    ActionId action;
    std::int64_t reward_k;
    const History* after;
    std::vector<ActionId> next_available;  // empty when the unit cannot act again
  };

  virtual void learn(const std::vector<UnitTransition>& transitions) = 0;
  virtual void set_exploring(bool exploring) = 0;
};

class RandomAgent final : public PartitionAgent {
 public:
  explicit RandomAgent(Rational gamma = Rational(0)) : PartitionAgent(std::move(gamma)) {}
  ProcessKind kind() const override { return ProcessKind::kQuantitative; }
  std::string name() const override { return "random"; }
  ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const override;
  JointAction act(const DecisionContext& ctx, RandomStream& rng) const override;
  std::unique_ptr<PartitionAgent> clone() const override { return std::make_unique<RandomAgent>(*this); }
};

// Draws one action c uniformly from the union of the members' available
// actions; each unit plays c if it can, otherwise its lowest available
// action. Perfectly correlated whenever the members share their options.
class CorrelatedAgent final : public PartitionAgent {
 public:
  explicit CorrelatedAgent(Rational gamma = Rational(0)) : PartitionAgent(std::move(gamma)) {}
  ProcessKind kind() const override { return ProcessKind::kQuantitative; }
  std::string name() const override { return "correlated"; }
  bool independent() const override { return false; }
  ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const override;
  JointActionDistribution joint_distribution(const DecisionContext& ctx, std::size_t cap) const override;
  JointAction act(const DecisionContext& ctx, RandomStream& rng) const override;
  std::unique_ptr<PartitionAgent> clone() const override { return std::make_unique<CorrelatedAgent>(*this); }
};

// A fixed joint distribution over the partition, for enumerable fixtures.
// Joint actions unavailable to some member are dropped and the rest
// renormalised.
class FixedJointAgent final : public PartitionAgent {
 public:
  explicit FixedJointAgent(JointActionDistribution joint, Rational gamma = Rational(0));
  ProcessKind kind() const override { return ProcessKind::kQuantitative; }
  std::string name() const override { return "fixed_joint"; }
  bool independent() const override { return false; }
  ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const override;
  JointActionDistribution joint_distribution(const DecisionContext& ctx, std::size_t cap) const override;
  JointAction act(const DecisionContext& ctx, RandomStream& rng) const override;
  std::unique_ptr<PartitionAgent> clone() const override { return std::make_unique<FixedJointAgent>(*this); }

 private:
  JointActionDistribution restricted(const DecisionContext& ctx) const;
  JointActionDistribution joint_;
};

// Qualitative generating process: an exogenous observation -> action table.
// Falls back to the lowest available action when the rule is missing or
// its action is unavailable.
class RuleTableAgent final : public PartitionAgent {
 public:
  using Rules = std::map<ObservationId, ActionId>;
  explicit RuleTableAgent(Rules rules, Rational gamma = Rational(0));

  ProcessKind kind() const override { return ProcessKind::kQualitative; }
  std::string name() const override { return "rules"; }
  ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const override;
  JointAction act(const DecisionContext& ctx, RandomStream& rng) const override;
  std::unique_ptr<PartitionAgent> clone() const override { return std::make_unique<RuleTableAgent>(*this); }

  // Depends only on the observation; this is the whole decision rule.
  ActionId choose(ObservationId observation, const std::vector<ActionId>& available) const;
  const Rules& rules() const { return rules_; }

 private:
  Rules rules_;
};

// Lines of "obs_id -> action_id"; '#' starts a comment.
RuleTableAgent::Rules parse_rule_table(std::string_view text);

// argmax over joint actions of sum_x E[k_x]; ties go to the
// lexicographically smallest joint action.
JointAction greedy_onestep(const EnvironmentModel& env, const DecisionContext& ctx);

// White-box one-step optimiser.
class GreedyAgent final : public PartitionAgent {
 public:
  explicit GreedyAgent(std::shared_ptr<const EnvironmentModel> env, Rational gamma = Rational(0));
  ProcessKind kind() const override { return ProcessKind::kQuantitative; }
  std::string name() const override { return "greedy"; }
  ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const override;
  JointAction act(const DecisionContext& ctx, RandomStream& rng) const override;
  std::unique_ptr<PartitionAgent> clone() const override { return std::make_unique<GreedyAgent>(*this); }

 private:
  std::shared_ptr<const EnvironmentModel> env_;
};

struct QLearningParams {
  double alpha{0.5};
  Rational gamma{Rational(9, 10)};
  Rational epsilon{Rational(1, 10)};
  std::uint32_t key_depth{1};
  Rational cent{1};
};

// Tabular Q over truncated history keys. One table is shared by every
// member of the partition; each member updates it with its own transition.
class QTable {
 public:
  double value(const HistoryKey& key, ActionId a) const;
  // Highest value over `actions` (0 for unseen entries); 0 when empty.
  double max_value(const HistoryKey& key, const std::vector<ActionId>& actions) const;
  // Lowest-index maximiser over `actions`.
  ActionId argmax(const HistoryKey& key, const std::vector<ActionId>& actions) const;
  void set(const HistoryKey& key, ActionId a, double v);
  std::size_t size() const { return values_.size(); }
  const std::map<std::pair<HistoryKey, ActionId>, double>& entries() const { return values_; }

 private:
  std::map<std::pair<HistoryKey, ActionId>, double> values_;
};

// Q(key, a) <- Q + alpha (k * cent + gamma * max_a' Q(key', a') - Q).
// `next_actions` empty means terminal (no bootstrap term).
void q_update(QTable& table, const QLearningParams& params, const HistoryKey& key, ActionId action,
              std::int64_t reward_k, const HistoryKey& next_key, const std::vector<ActionId>& next_actions);

class QAgent final : public PartitionAgent, public LearningAgent {
 public:
  explicit QAgent(QLearningParams params);

  ProcessKind kind() const override { return ProcessKind::kQuantitative; }
  std::string name() const override { return "q"; }
  ActionDistribution unit_marginal(const DecisionContext& ctx, std::size_t i) const override;
  JointAction act(const DecisionContext& ctx, RandomStream& rng) const override;
  std::unique_ptr<PartitionAgent> clone() const override { return std::make_unique<QAgent>(*this); }

  void learn(const std::vector<UnitTransition>& transitions) override;
  void set_exploring(bool exploring) override { exploring_ = exploring; }

  HistoryKey key_of(const History& h) const;
  const QTable& table() const { return table_; }
  QTable& table() { return table_; }
  const QLearningParams& params() const { return params_; }

 private:
  QLearningParams params_;
  QTable table_;
  bool exploring_{true};
  std::uint64_t epsilon_threshold_{0};
};

// CSV with header "key,action,value"; keys use the history-key text form.
void write_q_table_csv(std::ostream& out, const QTable& table, KeyDepth depth);

// pi_U for one episode, delegating to discounted_return with the agent's gamma.
DiscountedReturn episode_return(const PartitionAgent& agent, const Ledger& ledger, const std::set<UnitId>& units,
                                Time tau, Horizon horizon, const CentQuantum& cent);

struct AgentSpec {
  std::string kind{"random"};  // random | correlated | greedy | q | rules
  Rational gamma{Rational(9, 10)};
  double alpha{0.5};
  Rational epsilon{Rational(1, 10)};
  std::uint32_t depth{1};
  std::string rules_text;  // rule table contents for kind == rules
};

std::unique_ptr<PartitionAgent> make_agent(const AgentSpec& spec, std::shared_ptr<const EnvironmentModel> env,
                                           const CentQuantum& cent);

}  // namespace capital
