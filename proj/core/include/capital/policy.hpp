#pragma once

#include <functional>
#include <map>
#include <memory>

#include "capital/distribution.hpp"
#include "capital/environment.hpp"
#include "capital/history.hpp"

namespace capital {

// A single-unit agent: maps a history to a distribution over the actions
// available after it.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual ActionDistribution distribution(const History& h) const = 0;
};

// Uniform over env.available_actions(h). Realizability under this policy is
// the widest possible for a given environment.
class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(const EnvironmentModel& env) : env_(&env) {}
  ActionDistribution distribution(const History& h) const override;

 private:
  const EnvironmentModel* env_;
};

class FunctionPolicy final : public Policy {
 public:
  using Fn = std::function<ActionDistribution(const History&)>;
  explicit FunctionPolicy(Fn fn) : fn_(std::move(fn)) {}
  ActionDistribution distribution(const History& h) const override { return fn_(h); }

 private:
  Fn fn_;
};

}  // namespace capital
