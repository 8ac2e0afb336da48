#include "capital/objective.hpp"

#include <algorithm>

#include "capital/error.hpp"

namespace capital {

DiscountedReturn discounted_return(const RewardStream& rewards, const std::set<UnitId>& units, const Rational& gamma,
                                   Time tau, Horizon horizon, const CentQuantum& cent) {
  if (gamma < 0 || gamma > 1) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0, 1]");
  if (gamma == 1 && horizon.open_ended) {
    throw Error(ErrorCode::kDivergentObjective, "gamma = 1 needs a finite horizon");
  }
  if (tau < 0) throw Error(ErrorCode::kInvalidArgument, "tau must be non-negative");

  // Per-time partition totals first, then one power of gamma per time.
  std::map<Time, std::int64_t> per_step;
  for (const auto& [key, k] : rewards) {
    const auto& [t, unit] = key;
    if (t < tau || t > horizon.last || !units.contains(unit)) continue;
    per_step[t] += k;
  }

  DiscountedReturn result;
  result.value = 0;
  std::int64_t largest = 0;
  for (const auto& [t, k] : per_step) {
    result.value += pow(gamma, static_cast<std::uint64_t>(t)) * k;
    largest = std::max(largest, k);
  }
  result.value *= cent.value();
  if (horizon.open_ended) {
    result.tail_bound = pow(gamma, static_cast<std::uint64_t>(horizon.last + 1)) / (1 - gamma) * largest * cent.value();
  }
  return result;
}

}  // namespace capital
