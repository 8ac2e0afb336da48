#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "capital/agents.hpp"
#include "capital/entropy.hpp"
#include "capital/groundings.hpp"
#include "capital/objective.hpp"
#include "capital/policy.hpp"
#include "capital/propcheck.hpp"
#include "capital/realizable.hpp"
#include "capital/simulation.hpp"
#include "commands.hpp"
#include "oracles.hpp"

using namespace capital;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{true};
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

// ---- 1: proposition suite ----

Outcome propositions() {
  Outcome out;
  CheckConfig config;
  config.t_max = 10;
  config.horizon = 10;
  config.seed = 1;
  const RandomAgent agent;
  struct Expect {
    GroundingSpec g;
    std::vector<Proposition> witnessed;
    std::vector<Proposition> refuted;
  };
  const std::vector<Expect> expects = {
      {make_trapdoor(), {Proposition::P2, Proposition::P3, Proposition::P5, Proposition::P6, Proposition::P7}, {}},
      {make_epoch(), {Proposition::P4, Proposition::P9}, {}},
      {make_static_full_support(), {}, {Proposition::P4, Proposition::P7, Proposition::P9}},
  };
  std::size_t replays = 0;
  for (const auto& e : expects) {
    const auto run = check_all(e.g, agent, config);
    out.require(run.errors.empty(), e.g.name + " has errors");
    for (auto p : e.witnessed) {
      out.require(run.find(p)->status == Verdict::kWitnessed, e.g.name + " " + to_string(p) + " not witnessed");
    }
    for (auto p : e.refuted) {
      const auto* r = run.find(p);
      out.require(r->status == Verdict::kRefuted, e.g.name + " " + to_string(p) + " not refuted");
      out.require(r->exact || r->depth == std::optional<std::size_t>(10), e.g.name + " " + to_string(p) + " depth");
    }
    for (const auto& r : run.reports) {
      if (r.status == Verdict::kInconclusive) continue;
      out.require(replay_witness(e.g, agent, config, r), e.g.name + " " + to_string(r.prop) + " replay mismatch");
      ++replays;
    }
  }
  if (out.pass) out.detail = std::to_string(replays) + " witnesses replayed";
  return out;
}

// ---- 2: realizability oracle ----

Outcome realizability() {
  Outcome out;
  std::size_t fixtures = 0, histories = 0, rollouts = 0;
  for (const auto& g : shipped_groundings()) {
    if (g.env.actions().size() > 3 || g.env.observations().size() > 3) continue;
    ++fixtures;
    const UniformPolicy policy(g.env);
    const History root(g.initial_observation);
    for (std::size_t t_max = 0; t_max <= 4; ++t_max) {
      const auto enumerated = enumerate_realizable_histories(policy, g.env, root, t_max);
      const std::set<History> as_set(enumerated.begin(), enumerated.end());
      out.require(as_set.size() == enumerated.size(), g.name + " duplicate histories");
      out.require(as_set == oracle::brute_force_realizable(g.env, root, t_max),
                  g.name + " differs from brute force at t_max " + std::to_string(t_max));
      if (t_max == 4) {
        histories += enumerated.size();
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
          const History h = rollout(policy, g.env, root, 4, seed);
          for (std::size_t len = 0; len <= h.length(); ++len) {
            out.require(as_set.contains(h.prefix(len)), g.name + " rollout outside enumeration");
          }
          ++rollouts;
        }
      }
    }
  }
  if (out.pass) {
    out.detail = std::to_string(fixtures) + " fixtures, " + std::to_string(histories) + " histories at depth 4, " +
                 std::to_string(rollouts) + " rollouts";
  }
  return out;
}

// ---- 3: entropy exactness ----

Outcome entropy_exactness() {
  Outcome out;
  const ObservationId o0(0), o1(1);
  const double coin = entropy_bits(ObservationDistribution::from({{o0, Rational(1, 2)}, {o1, Rational(1, 2)}}));
  const double point = entropy_bits(ObservationDistribution::point(o0));
  out.require(coin == 1.0, "fair coin");
  out.require(point == 0.0, "point mass");

  const auto g = make_coupled_pair();
  std::vector<History> hs{History(o0), History(o1)};
  DecisionContext ctx;
  for (std::uint32_t i = 0; i < 2; ++i) {
    ctx.units.push_back(UnitId(i));
    ctx.histories.push_back(&hs[i]);
    ctx.available.push_back(g.env.available_actions(hs[i]));
  }
  const auto independent = joint_entropy_exact(RandomAgent(), g.env, ctx);
  const auto correlated = joint_entropy_exact(CorrelatedAgent(), g.env, ctx);
  out.require(std::abs(independent.joint - 2.0) <= 1e-12, "independent pair");
  out.require(std::abs(correlated.joint - 1.0) <= 1e-12, "correlated pair");
  out.require(correlated.marginal_sum == 2.0, "marginal sum");
  out.require(correlated.joint < correlated.marginal_sum, "strict subadditivity");
  char buf[160];
  std::snprintf(buf, sizeof buf, "independent %.15f, correlated %.15f, marginal_sum %.15f", independent.joint,
                correlated.joint, correlated.marginal_sum);
  if (out.pass) out.detail = buf;
  return out;
}

// ---- 4: estimator calibration ----

struct McCase {
  std::string label;
  GroundingSpec g;
  std::shared_ptr<PartitionAgent> agent;
  Time steps{0};
};

Outcome calibration() {
  Outcome out;
  std::vector<McCase> cases;
  for (const auto& g : shipped_groundings()) {
    for (Time steps : {0, 3}) {
      cases.push_back({g.name + "@" + std::to_string(steps), g, std::make_shared<RandomAgent>(), steps});
    }
  }
  cases.push_back({"coupled_pair/correlated", make_coupled_pair(), std::make_shared<CorrelatedAgent>(), 0});

  constexpr int kReps = 100;
  constexpr std::size_t kSamples = 100'000;
  struct Result {
    std::string label;
    bool enumerable{false};
    double exact{0};
    double worst_error{0};
    int covered{0};
  };
  std::vector<Result> results(cases.size());
  auto work = [&](std::size_t i) {
    const auto& c = cases[i];
    Result& r = results[i];
    r.label = c.label;
    Simulation sim(c.g, *c.agent, SimulationConfig{1, 0, c.steps + 1});
    for (Time t = 0; t < c.steps; ++t) sim.step();
    const auto ctx = sim.context(sim.partitioning().partitions.front().id);
    double exact = 0;
    try {
      exact = joint_entropy_exact(*c.agent, c.g.env, ctx).joint;
    } catch (const Error&) {
      return;
    }
    r.enumerable = true;
    r.exact = exact;
    for (int rep = 0; rep < kReps; ++rep) {
      RandomStream rng(static_cast<std::uint64_t>(rep), StreamPurpose::kEstimator, static_cast<std::uint32_t>(i));
      const auto est = joint_entropy_mc(*c.agent, c.g.env, ctx, kSamples, rng);
      r.worst_error = std::max(r.worst_error, std::abs(est.estimate - exact));
      r.covered += est.ci_low <= exact && exact <= est.ci_high;
    }
  };
  std::vector<std::thread> threads;
  const std::size_t n_threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  for (std::size_t t = 0; t < n_threads; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < cases.size(); i = next++) work(i);
    });
  }
  for (auto& t : threads) t.join();

  std::size_t enumerable = 0;
  int min_cover = kReps;
  double worst = 0;
  for (const auto& r : results) {
    if (!r.enumerable) continue;
    ++enumerable;
    min_cover = std::min(min_cover, r.covered);
    worst = std::max(worst, r.worst_error);
    out.require(r.worst_error <= 0.02, r.label + " error " + std::to_string(r.worst_error));
    out.require(r.covered >= 95, r.label + " coverage " + std::to_string(r.covered) + "/100");
  }
  out.require(enumerable > 0, "no enumerable contexts");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu contexts, max |error| %.4f bits, min coverage %d/100", enumerable, worst,
                min_cover);
  if (out.pass) out.detail = buf;
  else out.detail += std::string(" (") + buf + ")";
  return out;
}

// ---- 5: objective ----

Outcome objective() {
  Outcome out;
  for (std::uint64_t i = 0; i < 100; ++i) {
    RandomStream rng(i, StreamPurpose::kTest);
    Ledger ledger;
    const auto n_units = 1 + rng.next_index(4);
    const auto steps = 1 + static_cast<Time>(rng.next_index(30));
    for (Time t = 0; t < steps; ++t) {
      for (std::uint32_t u = 0; u < n_units; ++u) {
        ledger.append(LedgerEntry{t, UnitId(u), PartitionId(0), ObservationId(0), ActionId(0),
                                  static_cast<std::int64_t>(rng.next_index(1000)), ObservationId(0), {}});
      }
    }
    std::set<UnitId> units;
    for (std::uint32_t u = 0; u < n_units; ++u) {
      if (rng.next_index(2) == 0 || u == 0) units.insert(UnitId(u));
    }
    const auto den = 1 + static_cast<long long>(rng.next_index(20));
    const Rational gamma(static_cast<long long>(rng.next_index(static_cast<std::uint64_t>(den) + 1)), den);
    const Time tau = static_cast<Time>(rng.next_index(static_cast<std::uint64_t>(steps)));
    const Time last = tau + static_cast<Time>(rng.next_index(static_cast<std::uint64_t>(steps)));
    const CentQuantum cent(Rational(1, 1 + static_cast<long long>(rng.next_index(100))));
    const auto got = discounted_return(reward_stream(ledger), units, gamma, tau, Horizon::finite(last), cent);
    const auto expected = oracle::discounted_return(ledger.entries(), units, gamma, tau, last, cent.value());
    out.require(got.value == expected, "ledger " + std::to_string(i));
  }
  Ledger ones;
  for (Time t = 0; t < 3; ++t) {
    ones.append(LedgerEntry{t, UnitId(0), PartitionId(0), ObservationId(0), ActionId(0), 1, ObservationId(0), {}});
  }
  const auto r = discounted_return(reward_stream(ones), {UnitId(0)}, Rational(1, 2), 0, Horizon::finite(2),
                                   CentQuantum(Rational(1)));
  out.require(r.value == Rational(7, 4), "three ones");
  if (out.pass) out.detail = "100 ledgers equal, three ones = " + to_string(r.value);
  return out;
}

// ---- 6: optimisation ----

Outcome optimisation() {
  Outcome out;
  const auto g = make_market_grid(4, 4, 1);
  constexpr int kEpisodes = 100;
  constexpr Time kHorizon = 10;
  QLearningParams params;
  params.cent = g.cent.value();
  QAgent q(params);
  RandomAgent random;
  double q_total = 0, random_total = 0;
  for (std::uint32_t e = 0; e < kEpisodes; ++e) {
    const SimulationConfig config{2024, e, kHorizon};
    q_total += static_cast<double>(summarize(run_episode(g, q, config)).undiscounted_k);
    random_total += static_cast<double>(summarize(run_episode(g, random, config)).undiscounted_k);
  }
  const double q_mean = q_total / kEpisodes;
  const double random_mean = random_total / kEpisodes;
  out.require(q_mean >= 1.2 * random_mean, "q mean not 20% above random");

  QLearningParams chain;
  chain.alpha = 0.5;
  chain.gamma = Rational(1, 2);
  chain.cent = 1;
  QTable table;
  const auto s0 = make_key(History(ObservationId(0)), KeyDepth::markov());
  const auto s1 = make_key(History(ObservationId(1)), KeyDepth::markov());
  for (int sweep = 0; sweep < 10000; ++sweep) {
    q_update(table, chain, s0, ActionId(0), 0, s1, {ActionId(0)});
    q_update(table, chain, s1, ActionId(0), 1, s0, {ActionId(0)});
  }
  const double q1 = 4.0 / 3.0, q0 = 2.0 / 3.0;
  const double bellman = std::max(std::abs(table.value(s1, ActionId(0)) - q1), std::abs(table.value(s0, ActionId(0)) - q0));
  out.require(bellman <= 1e-6, "chain not at fixed point");
  char buf[200];
  std::snprintf(buf, sizeof buf, "q mean %.2f vs random mean %.2f (%+.1f%%), chain error %.2e", q_mean, random_mean,
                100.0 * (q_mean / random_mean - 1.0), bellman);
  out.detail = out.pass ? buf : out.detail + " (" + buf + ")";
  return out;
}

// ---- 7: ledger laws ----

Outcome ledger_laws() {
  Outcome out;
  std::size_t entries = 0, spawns = 0, bad_rewards = 0, bad_spawns = 0;
  for (const auto& g : shipped_groundings()) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      RandomAgent a;
      const auto log = run_episode(g, a, SimulationConfig{seed, 0, 10});
      for (const auto& e : log.ledger.entries()) {
        ++entries;
        const Rational raw = Rational(g.env.reward(e.obs, e.action)) * g.cent.value();
        bool integral = e.reward_k == g.env.reward(e.obs, e.action);
        try {
          integral = integral && quantize_reward(raw, g.cent) == e.reward_k;
        } catch (const Error&) {
          integral = false;
        }
        bad_rewards += !integral;
        for (UnitId child : e.spawned) {
          ++spawns;
          const auto& c = log.registry.at(child);
          bad_spawns += c.history.origin() != e.next_obs || c.birth_time != e.t + 1 || c.parent != e.unit;
        }
      }
    }
  }
  out.require(bad_rewards == 0, std::to_string(bad_rewards) + " non-integer rewards");
  out.require(bad_spawns == 0, std::to_string(bad_spawns) + " spawn violations");
  out.require(spawns > 0, "no spawns observed");
  if (out.pass) {
    out.detail = std::to_string(entries) + " entries, " + std::to_string(spawns) + " spawns, 0 violations";
  }
  return out;
}

// ---- 8: reproducibility ----

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  Outcome out;
  const fs::path root = fs::path(CAPITAL_TEST_TMP) / "acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "run.ini");
    cfg << "grounding = trapdoor\nseed = 7\nhorizon = 12\nepisodes = 2\n\n[agent]\nkind = q\n";
  }
  const std::string cfg = (root / "run.ini").string();
  for (const char* run : {"a", "b"}) {
    const std::string dir = (root / run).string();
    for (const char* command : {"run", "entropy", "check"}) {
      const char* argv[] = {"capital-sim", command, "--config", cfg.c_str(), "--out", dir.c_str()};
      std::ostringstream sink;
      out.require(cli::run_cli(6, argv, sink, sink) == 0, std::string(command) + " failed");
    }
  }
  for (const char* file : {"ledger.jsonl", "metrics.csv", "entropy.csv", "props.json"}) {
    const auto a = slurp(root / "a" / file);
    out.require(!a.empty(), std::string(file) + " empty");
    out.require(a == slurp(root / "b" / file), std::string(file) + " differs");
  }
  if (out.pass) out.detail = "ledger.jsonl, metrics.csv, entropy.csv, props.json identical";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"proposition suite", propositions},
      {"realizability oracle equivalence", realizability},
      {"entropy exactness", entropy_exactness},
      {"entropy estimator calibration", calibration},
      {"objective correctness", objective},
      {"optimisation behaviour", optimisation},
      {"discreteness and generation laws", ledger_laws},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
