#pragma once

#include <vector>

#include "capital/agents.hpp"

namespace testing_support {

// Owns histories and exposes them as a decision context at their common time.
struct OwnedContext {
  std::vector<capital::History> histories;
  capital::DecisionContext ctx;

  OwnedContext(const capital::EnvironmentModel& env, std::vector<capital::History> hs) : histories(std::move(hs)) {
    for (std::size_t i = 0; i < histories.size(); ++i) {
      ctx.units.push_back(capital::UnitId(static_cast<std::uint32_t>(i)));
      ctx.available.push_back(env.available_actions(histories[i]));
    }
    for (const auto& h : histories) ctx.histories.push_back(&h);
    ctx.t = histories.empty() ? 0 : histories.front().now();
  }
  OwnedContext(const OwnedContext&) = delete;
  OwnedContext& operator=(const OwnedContext&) = delete;
};

}  // namespace testing_support
