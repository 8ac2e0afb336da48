#include "capital/policy.hpp"

namespace capital {

ActionDistribution UniformPolicy::distribution(const History& h) const {
  const auto available = env_->available_actions(h);
  if (available.empty()) return ActionDistribution{};
  return ActionDistribution::uniform(available);
}

}  // namespace capital
