#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capital/error.hpp"
#include "capital/ids.hpp"
#include "capital/random.hpp"
#include "capital/rational.hpp"

namespace capital {

namespace detail {
// floor(p * 2^64), saturating at 2^64 - 1.
std::uint64_t scaled_threshold(const Rational& cumulative);
}  // namespace detail

// Finite distribution with exact rational masses. Outcomes are kept sorted
// by id with zero-mass entries dropped, so two equal distributions compare
// equal structurally. Sampling goes through a precomputed table of 64-bit
// cumulative thresholds; the exact masses are never rounded for any other
// purpose.
template <typename Id>
class Distribution {
 public:
  struct Outcome {
    Id id;
    Rational prob;

    friend bool operator==(const Outcome&, const Outcome&) = default;
  };

  Distribution() = default;

  static Distribution from(std::vector<Outcome> outcomes) {
    Distribution d;
    Rational total = 0;
    for (const auto& o : outcomes) {
      if (o.prob < 0) throw Error(ErrorCode::kInvalidDistribution, "negative probability");
      total += o.prob;
    }
    if (total != 1) {
      throw Error(ErrorCode::kInvalidDistribution, "probabilities sum to " + to_string(total) + ", not 1");
    }
    std::sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
      if (!(outcomes[i - 1].id < outcomes[i].id)) {
        throw Error(ErrorCode::kInvalidDistribution, "duplicate outcome in support");
      }
    }
    std::erase_if(outcomes, [](const Outcome& o) { return o.prob == 0; });
    d.outcomes_ = std::move(outcomes);
    d.build_thresholds();
    return d;
  }

  static Distribution point(Id id) { return from({Outcome{std::move(id), Rational(1)}}); }

  static Distribution uniform(std::span<const Id> ids) {
    if (ids.empty()) throw Error(ErrorCode::kInvalidDistribution, "uniform over empty support");
    std::vector<Outcome> out;
    out.reserve(ids.size());
    const Rational mass(1, static_cast<long long>(ids.size()));
    for (const auto& id : ids) out.push_back(Outcome{id, mass});
    return from(std::move(out));
  }

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  bool empty() const { return outcomes_.empty(); }

  Rational prob(const Id& id) const {
    auto it = std::lower_bound(outcomes_.begin(), outcomes_.end(), id,
                               [](const Outcome& o, const Id& key) { return o.id < key; });
    if (it == outcomes_.end() || !(it->id == id)) return Rational(0);
    return it->prob;
  }

  bool contains(const Id& id) const { return prob(id) > 0; }

  std::vector<Id> support() const {
    std::vector<Id> ids;
    ids.reserve(outcomes_.size());
    for (const auto& o : outcomes_) ids.push_back(o.id);
    return ids;
  }

  // Maps a uniform 64-bit word to an outcome; P(i) is exact up to 2^-64.
  const Id& sample_from_word(std::uint64_t word) const {
    auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), word);
    return outcomes_[static_cast<std::size_t>(it - thresholds_.begin())].id;
  }

  const Id& sample(RandomStream& rng) const { return sample_from_word(rng.next_u64()); }

  friend bool operator==(const Distribution& a, const Distribution& b) { return a.outcomes_ == b.outcomes_; }

 private:
  void build_thresholds() {
    thresholds_.clear();
    if (outcomes_.empty()) return;
    Rational cumulative = 0;
    for (std::size_t i = 0; i + 1 < outcomes_.size(); ++i) {
      cumulative += outcomes_[i].prob;
      thresholds_.push_back(detail::scaled_threshold(cumulative));
    }
  }

  std::vector<Outcome> outcomes_;
  // thresholds_[i] = floor(P(outcome <= i) * 2^64); the last outcome is implicit.
  std::vector<std::uint64_t> thresholds_;
};

using ObservationDistribution = Distribution<ObservationId>;
using ActionDistribution = Distribution<ActionId>;

}  // namespace capital
