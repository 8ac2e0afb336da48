#include "capital/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <boost/math/distributions/normal.hpp>

#include "capital/error.hpp"

namespace capital {

namespace {

const ObservationDistribution& row_for(const EnvironmentModel& env, const History& h, ActionId a) {
  const auto* row = env.find_dynamics(make_key(h, env.key_depth()), a, h.now());
  if (!row) {
    throw Error(ErrorCode::kUnrealizableHistory, "no dynamics for action " + std::to_string(a.value) + " after " +
                                                     to_string(h));
  }
  return *row;
}

double plug_in_bits(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  double h = 0.0;
  const double nd = static_cast<double>(n);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / nd;
    h -= p * std::log2(p);
  }
  return h;
}

double miller_madow_bits(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  std::size_t k = 0;
  for (auto c : counts) k += c > 0 ? 1 : 0;
  const double correction = k > 0 ? static_cast<double>(k - 1) / (2.0 * static_cast<double>(n) * std::log(2.0)) : 0.0;
  return plug_in_bits(counts, n) + correction;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

}  // namespace

NextObsDistribution next_obs_distribution(const ActionDistribution& lambda, const EnvironmentModel& env,
                                          const History& h, UnitId unit) {
  if (lambda.empty()) throw Error(ErrorCode::kUnrealizableHistory, "policy has empty support at " + to_string(h));
  std::map<ObservationId, Rational> q;
  for (const auto& a : lambda.outcomes()) {
    for (const auto& o : row_for(env, h, a.id).outcomes()) q[o.id] += a.prob * o.prob;
  }
  std::vector<ObservationDistribution::Outcome> outcomes;
  for (auto& [o, p] : q) outcomes.push_back({o, std::move(p)});
  return NextObsDistribution{unit, ObservationDistribution::from(std::move(outcomes))};
}

NextObsDistribution next_obs_distribution(const Policy& policy, const EnvironmentModel& env, const History& h,
                                          UnitId unit) {
  return next_obs_distribution(policy.distribution(h), env, h, unit);
}

double entropy_bits_of_masses(const std::vector<Rational>& masses) {
  long double h = 0.0L;
  for (const auto& m : masses) {
    if (!(m > 0)) continue;
    const long double p = m.convert_to<long double>();
    h -= p * std::log2(p);
  }
  // -0.0 for point masses.
  return h <= 0.0L ? 0.0 : static_cast<double>(h);
}

JointObservationDistribution joint_next_obs_distribution(const PartitionAgent& agent, const EnvironmentModel& env,
                                                         const DecisionContext& ctx, std::size_t cap) {
  const JointActionDistribution actions = agent.joint_distribution(ctx, cap);
  std::size_t terms = 0;
  for (const auto& ja : actions.outcomes()) {
    std::size_t product = 1;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      product *= row_for(env, *ctx.histories[i], ja.id[i]).size();
      if (product > cap) break;
    }
    terms += product;
    if (terms > cap) {
      throw Error(ErrorCode::kEnumerationCapExceeded, "joint next-observation enumeration exceeds cap " +
                                                          std::to_string(cap));
    }
  }

  std::map<JointObservation, Rational> joint;
  for (const auto& ja : actions.outcomes()) {
    std::vector<std::pair<JointObservation, Rational>> partial{{JointObservation{}, ja.prob}};
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const auto& row = row_for(env, *ctx.histories[i], ja.id[i]);
      std::vector<std::pair<JointObservation, Rational>> next;
      next.reserve(partial.size() * row.size());
      for (const auto& [prefix, p] : partial) {
        for (const auto& o : row.outcomes()) {
          JointObservation extended = prefix;
          extended.push_back(o.id);
          next.emplace_back(std::move(extended), p * o.prob);
        }
      }
      partial = std::move(next);
    }
    for (auto& [obs, p] : partial) joint[obs] += p;
  }
  std::vector<JointObservationDistribution::Outcome> outcomes;
  outcomes.reserve(joint.size());
  for (auto& [obs, p] : joint) outcomes.push_back({obs, std::move(p)});
  return JointObservationDistribution::from(std::move(outcomes));
}

namespace {

EntropyReport per_unit_report(const PartitionAgent& agent, const EnvironmentModel& env, const DecisionContext& ctx) {
  EntropyReport report;
  report.t = ctx.t;
  report.units = ctx.units;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto q = next_obs_distribution(agent.unit_marginal(ctx, i), env, *ctx.histories[i], ctx.units[i]);
    report.per_unit.push_back(unit_entropy(q));
    report.marginal_sum += report.per_unit.back();
  }
  return report;
}

}  // namespace

EntropyReport joint_entropy_exact(const PartitionAgent& agent, const EnvironmentModel& env,
                                  const DecisionContext& ctx, std::size_t cap) {
  const auto joint = joint_next_obs_distribution(agent, env, ctx, cap);
  EntropyReport report = per_unit_report(agent, env, ctx);
  report.joint = entropy_bits(joint);
  report.method = EntropyMethod::kExact;
  return report;
}

MonteCarloEstimate entropy_from_counts(const std::vector<std::uint64_t>& counts, RandomStream& rng,
                                       MonteCarloOptions options) {
  MonteCarloEstimate est;
  std::vector<std::uint64_t> observed;
  for (auto c : counts) {
    if (c > 0) observed.push_back(c);
  }
  std::uint64_t n = 0;
  for (auto c : observed) n += c;
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "no samples");
  est.samples = n;
  est.categories = observed.size();
  est.estimate = miller_madow_bits(observed, n);
  if (observed.size() == 1 || options.bootstrap_replicates < 2) {
    est.ci_low = est.ci_high = est.estimate;
    return est;
  }

  std::vector<double> replicates;
  replicates.reserve(options.bootstrap_replicates);
  std::vector<std::uint64_t> resampled(observed.size());
  for (std::size_t b = 0; b < options.bootstrap_replicates; ++b) {
    std::uint64_t remaining = n;
    std::uint64_t remaining_count = n;
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (i + 1 == observed.size()) {
        resampled[i] = remaining;
        break;
      }
      const double p = static_cast<double>(observed[i]) / static_cast<double>(remaining_count);
      resampled[i] = sample_binomial(rng, remaining, std::min(1.0, p));
      remaining -= resampled[i];
      remaining_count -= observed[i];
    }
    replicates.push_back(miller_madow_bits(resampled, n));
  }
  double mean = 0.0;
  for (double r : replicates) mean += r;
  mean /= static_cast<double>(replicates.size());
  double ss = 0.0;
  for (double r : replicates) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(replicates.size() - 1));
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + options.confidence / 2.0);
  est.ci_low = std::max(0.0, est.estimate - z * sd);
  est.ci_high = est.estimate + z * sd;
  return est;
}

MonteCarloEstimate joint_entropy_mc(const PartitionAgent& agent, const EnvironmentModel& env,
                                    const DecisionContext& ctx, std::size_t n, RandomStream& rng,
                                    MonteCarloOptions options) {
  if (n < 1000) throw Error(ErrorCode::kInvalidArgument, "Monte Carlo entropy needs n >= 1000");
  std::vector<std::map<ActionId, const ObservationDistribution*>> rows(ctx.size());
  std::map<JointObservation, std::uint64_t> counts;
  JointObservation sample(ctx.size());
  for (std::size_t s = 0; s < n; ++s) {
    const JointAction joint = agent.act(ctx, rng);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      auto& cached = rows[i][joint[i]];
      if (!cached) cached = &row_for(env, *ctx.histories[i], joint[i]);
      sample[i] = cached->sample(rng);
    }
    ++counts[sample];
  }
  std::vector<std::uint64_t> flat;
  flat.reserve(counts.size());
  for (const auto& [obs, c] : counts) flat.push_back(c);
  return entropy_from_counts(flat, rng, options);
}

EntropyReport entropy_report(const PartitionAgent& agent, const EnvironmentModel& env, const DecisionContext& ctx,
                             std::size_t cap, std::size_t mc_samples, RandomStream& rng) {
  try {
    return joint_entropy_exact(agent, env, ctx, cap);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEnumerationCapExceeded) throw;
  }
  EntropyReport report = per_unit_report(agent, env, ctx);
  const auto est = joint_entropy_mc(agent, env, ctx, mc_samples, rng);
  report.joint = est.estimate;
  report.method = EntropyMethod::kMonteCarlo;
  report.samples = est.samples;
  report.ci_low = est.ci_low;
  report.ci_high = est.ci_high;
  return report;
}

void write_entropy_csv_header(std::ostream& out) {
  out << "t,partition,unit,H_unit_bits,H_joint_bits,marginal_sum_bits,method,n,ci_low,ci_high\n";
}

void write_entropy_csv_rows(std::ostream& out, const EntropyReport& report) {
  const bool mc = report.method == EntropyMethod::kMonteCarlo;
  for (std::size_t i = 0; i < report.units.size(); ++i) {
    out << report.t << ',' << report.partition.value << ',' << report.units[i].value << ','
        << format_double(report.per_unit[i]) << ',' << format_double(report.joint) << ','
        << format_double(report.marginal_sum) << ',' << (mc ? "monte_carlo" : "exact") << ',';
    if (mc) {
      out << report.samples << ',' << format_double(report.ci_low) << ',' << format_double(report.ci_high);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace capital
