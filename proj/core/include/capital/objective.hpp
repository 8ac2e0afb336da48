#pragma once

#include <optional>
#include <set>

#include "capital/ids.hpp"
#include "capital/ledger.hpp"
#include "capital/rational.hpp"
#include "capital/units.hpp"

namespace capital {

// Where summation stops. `open_ended` marks an infinite-intent objective
// that is truncated at `last` for reporting.
struct Horizon {
  Time last{0};
  bool open_ended{false};

  static Horizon finite(Time last) { return Horizon{last, false}; }
  static Horizon truncated(Time last) { return Horizon{last, true}; }
};

struct DiscountedReturn {
  Rational value;
  // For open-ended horizons with gamma < 1: gamma^(T+1) / (1 - gamma) times
  // the largest per-step partition reward seen in [tau, T], in value units.
  // Bounds the tail only if future per-step rewards stay below that maximum.
  std::optional<Rational> tail_bound;
};

// sum_{t=tau}^{T} sum_{x in U} gamma^t * k_x^t * cent, with the exponent on
// global time t. Throws DivergentObjective when gamma == 1 and the horizon
// is open-ended, InvalidArgument when gamma is outside [0, 1].
DiscountedReturn discounted_return(const RewardStream& rewards, const std::set<UnitId>& units, const Rational& gamma,
                                   Time tau, Horizon horizon, const CentQuantum& cent);

}  // namespace capital
