#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "capital/agents.hpp"
#include "capital/distribution.hpp"
#include "capital/environment.hpp"
#include "capital/policy.hpp"

namespace capital {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

using JointObservation = std::vector<ObservationId>;
using JointObservationDistribution = Distribution<JointObservation>;

struct NextObsDistribution {
  UnitId unit;
  ObservationDistribution q;
};

// q(o) = sum_a lambda(a|h) e(o|h,a), exactly. Throws UnrealizableHistory
// when the policy puts mass on an action without dynamics at h.
NextObsDistribution next_obs_distribution(const ActionDistribution& lambda, const EnvironmentModel& env,
                                          const History& h, UnitId unit = UnitId(0));
NextObsDistribution next_obs_distribution(const Policy& policy, const EnvironmentModel& env, const History& h,
                                          UnitId unit = UnitId(0));

// Shannon entropy in bits with 0 log 0 = 0. Masses are exact until the log.
template <typename Id>
double entropy_bits(const Distribution<Id>& d);
double entropy_bits_of_masses(const std::vector<Rational>& masses);

inline double unit_entropy(const NextObsDistribution& q) { return entropy_bits(q.q); }

// Joint next-observation law induced by the agent's joint action law and
// per-unit dynamics (units transition independently given the joint
// action). Work is bounded by `cap` terms: joint actions times the product
// of per-action row sizes; beyond it EnumerationCapExceeded is thrown.
JointObservationDistribution joint_next_obs_distribution(const PartitionAgent& agent, const EnvironmentModel& env,
                                                         const DecisionContext& ctx,
                                                         std::size_t cap = kDefaultEnumerationCap);

enum class EntropyMethod { kExact, kMonteCarlo };

struct EntropyReport {
  Time t{0};
  PartitionId partition;
  std::vector<UnitId> units;
  std::vector<double> per_unit;  // H(Y_i), bits
  double joint{0};               // H(Y), bits
  double marginal_sum{0};
  EntropyMethod method{EntropyMethod::kExact};
  std::size_t samples{0};
  double ci_low{0};
  double ci_high{0};
};

// Per-unit marginals and the joint entropy by exact enumeration.
EntropyReport joint_entropy_exact(const PartitionAgent& agent, const EnvironmentModel& env,
                                  const DecisionContext& ctx, std::size_t cap = kDefaultEnumerationCap);

struct MonteCarloOptions {
  std::size_t bootstrap_replicates{1000};
  double confidence{0.99};
};

struct MonteCarloEstimate {
  double estimate{0};  // Miller-Madow corrected plug-in, bits
  double ci_low{0};
  double ci_high{0};
  std::size_t samples{0};
  std::size_t categories{0};  // distinct joint observations seen
};

// Plug-in entropy of n sampled joint next observations with Miller-Madow
// correction; normal bootstrap CI (estimate +- z * replicate sd) from
// multinomial resampling of the observed counts. Requires n >= 1000.
MonteCarloEstimate joint_entropy_mc(const PartitionAgent& agent, const EnvironmentModel& env,
                                    const DecisionContext& ctx, std::size_t n, RandomStream& rng,
                                    MonteCarloOptions options = {});

// Estimator on a ready count vector (categories with zero counts ignored).
MonteCarloEstimate entropy_from_counts(const std::vector<std::uint64_t>& counts, RandomStream& rng,
                                       MonteCarloOptions options = {});

// Exact when enumeration fits under `cap`, Monte Carlo otherwise. Per-unit
// entropies are exact in both cases.
EntropyReport entropy_report(const PartitionAgent& agent, const EnvironmentModel& env, const DecisionContext& ctx,
                             std::size_t cap, std::size_t mc_samples, RandomStream& rng);

// Header: t,partition,unit,H_unit_bits,H_joint_bits,marginal_sum_bits,method,n,ci_low,ci_high
void write_entropy_csv_header(std::ostream& out);
void write_entropy_csv_rows(std::ostream& out, const EntropyReport& report);

// ---- implementation ----

template <typename Id>
double entropy_bits(const Distribution<Id>& d) {
  std::vector<Rational> masses;
  masses.reserve(d.size());
  for (const auto& o : d.outcomes()) masses.push_back(o.prob);
  return entropy_bits_of_masses(masses);
}

}  // namespace capital
