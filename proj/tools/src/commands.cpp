#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "capital/entropy.hpp"
#include "capital/error.hpp"
#include "capital/grounding_format.hpp"
#include "capital/objective.hpp"
#include "capital/propcheck.hpp"
#include "capital/rational.hpp"
#include "capital/realizable.hpp"

namespace capital::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return f;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::unique_ptr<PartitionAgent> build_agent(const RunConfig& c, const GroundingSpec& g) {
  AgentSpec spec = c.agent;
  if (spec.kind == "rules") spec.rules_text = read_text(c.rules_path);
  return make_agent(spec, std::make_shared<const EnvironmentModel>(g.env), g.cent);
}

std::string decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", to_double(r));
  return buf;
}

SimulationConfig sim_config(const RunConfig& c, std::uint32_t episode) {
  SimulationConfig s;
  s.seed = *c.seed;
  s.episode = episode;
  s.horizon = c.horizon;
  s.scheme = c.partition;
  s.max_units = c.cap;
  return s;
}

void write_metrics(std::ostream& out, const RunConfig& c, const GroundingSpec& g, const PartitionAgent& agent,
                   const RolloutLog& log) {
  const RewardStream rewards = reward_stream(log.ledger);
  const Horizon horizon = Horizon::finite(c.horizon > 0 ? c.horizon - 1 : 0);
  std::map<PartitionId, std::set<UnitId>> members;
  for (const auto& e : log.ledger.entries()) members[e.partition].insert(e.unit);

  std::map<std::pair<Time, PartitionId>, std::size_t> acting;
  for (const auto& e : log.ledger.entries()) ++acting[{e.t, e.partition}];
  for (const auto& [key, m] : acting) {
    const auto& [t, pid] = key;
    const auto& units = members[pid];
    const auto pi = discounted_return(rewards, units, agent.gamma(), t, horizon, g.cent);
    out << "step," << log.episode << ',' << t << ',' << pid.value << ',' << m << ','
        << accumulated_capital(log.ledger, units, t) << ',' << decimal(pi.value) << '\n';
  }

  std::set<UnitId> everyone;
  for (const auto& u : log.registry.units()) everyone.insert(u.id);
  const auto total = discounted_return(rewards, everyone, agent.gamma(), 0, horizon, g.cent);
  const auto summary = summarize(log);
  out << "episode," << log.episode << ',' << log.horizon << ",all," << summary.final_population << ','
      << summary.undiscounted_k << ',' << decimal(total.value) << '\n';
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kEnumerationCapExceeded:
      return kBudgetExceeded;
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidGrounding:
    case ErrorCode::kParseError:
    case ErrorCode::kIo:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidDistribution:
    case ErrorCode::kUnknownObservation:
    case ErrorCode::kUnknownAction:
    case ErrorCode::kNotAMultiple:
    case ErrorCode::kNegativeReward:
    case ErrorCode::kDivergentObjective:
      return kConfigError;
    default:
      return kFailure;
  }
}

}  // namespace

GroundingSpec resolve_grounding(const RunConfig& c) {
  GroundingSpec g;
  if (auto builtin = builtin_grounding(c.grounding)) {
    g = std::move(*builtin);
  } else {
    if (!fs::exists(c.grounding)) {
      throw Error(ErrorCode::kInvalidConfig, "grounding '" + c.grounding + "' is neither a builtin nor a file");
    }
    g = load_grounding_file(c.grounding);
  }
  if (c.cent) g.cent = CentQuantum(parse_rational(*c.cent));
  return g;
}

int cmd_run(const RunConfig& c, std::ostream& out) {
  const GroundingSpec g = resolve_grounding(c);
  auto agent = build_agent(c, g);
  prepare_out_dir(c.out);
  auto metrics = open_output(c.out / "metrics.csv");
  metrics << "kind,episode,t,partition,m,G_t,pi_U\n";
  for (std::uint32_t e = 0; e < c.episodes; ++e) {
    const RolloutLog log = run_episode(g, *agent, sim_config(c, e));
    const std::string name = e == 0 ? "ledger.jsonl" : "ledger." + std::to_string(e) + ".jsonl";
    auto ledger = open_output(c.out / name);
    write_ledger_jsonl(ledger, log.ledger);
    write_metrics(metrics, c, g, *agent, log);
    const auto s = summarize(log);
    out << "episode " << e << " return_k " << s.undiscounted_k << " population " << s.final_population << '\n';
  }
  return kOk;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  const GroundingSpec g = resolve_grounding(c);
  auto agent = build_agent(c, g);
  CheckConfig config;
  config.t_max = c.t_max;
  config.horizon = c.horizon;
  config.seed = *c.seed;
  config.node_cap = c.cap;
  const CheckRun run = check_all(g, *agent, config);
  prepare_out_dir(c.out);
  auto props = open_output(c.out / "props.json");
  props << to_json(run).dump(2) << '\n';
  for (const auto& r : run.reports) out << to_string(r.prop) << ' ' << to_string(r.status) << '\n';
  bool crashed = false;
  bool invalid = false;
  bool budget = false;
  for (const auto& e : run.errors) {
    out << "error " << e.stage << ": " << e.message << '\n';
    (e.budget ? budget : e.stage == "validate" ? invalid : crashed) = true;
  }
  if (crashed) return kFailure;
  if (budget) return kBudgetExceeded;
  return invalid ? kConfigError : kOk;
}

int cmd_entropy(const RunConfig& c, std::ostream& out) {
  const GroundingSpec g = resolve_grounding(c);
  auto agent = build_agent(c, g);
  prepare_out_dir(c.out);
  auto csv = open_output(c.out / "entropy.csv");
  write_entropy_csv_header(csv);
  Simulation sim(g, *agent, sim_config(c, 0));
  std::size_t exact = 0;
  std::size_t sampled = 0;
  while (!sim.done()) {
    std::vector<PartitionId> ids;
    for (const auto& p : sim.partitioning().partitions) ids.push_back(p.id);
    for (auto pid : ids) {
      const DecisionContext ctx = sim.context(pid);
      if (ctx.size() == 0) continue;
      RandomStream rng(StreamAddress{*c.seed, 0, pid.value, static_cast<std::uint32_t>(sim.now()),
                                     StreamPurpose::kEstimator});
      EntropyReport report = entropy_report(*agent, g.env, ctx, c.cap, c.mc_samples, rng);
      report.partition = pid;
      write_entropy_csv_rows(csv, report);
      ++(report.method == EntropyMethod::kExact ? exact : sampled);
    }
    sim.step();
  }
  out << "reports " << exact + sampled << " exact " << exact << " monte_carlo " << sampled << '\n';
  return kOk;
}

int cmd_enumerate(const RunConfig& c, std::ostream& out) {
  const GroundingSpec g = resolve_grounding(c);
  const History root(g.initial_observation, 0);
  const auto histories = enumerate_realizable_histories(UniformPolicy(g.env), g.env, root, c.t_max, c.cap);
  const auto counts = count_by_length(histories);
  out << "depth,count\n";
  for (std::size_t d = 0; d < counts.size(); ++d) out << d << ',' << counts[d] << '\n';
  out << "total," << histories.size() << '\n';
  if (c.list) {
    for (const auto& h : histories) out << to_string(h) << '\n';
  }
  return kOk;
}

int cmd_fixtures(const RunConfig& c, std::ostream& out) {
  prepare_out_dir(c.out);
  for (const auto& g : shipped_groundings()) {
    const fs::path path = c.out / (g.name + ".grd");
    save_grounding_file(path, g);
    out << path.string() << '\n';
  }
  return kOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seeded simulations and proposition checks for capital groundings", "capital-sim"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, grounding, agent, gamma, alpha, epsilon, cent, out_dir, rules, partition;
  std::optional<Time> horizon;
  std::optional<std::uint32_t> episodes, depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> t_max, cap, mc_samples;
  bool list = false;

  app.add_option("--config", config_path, "key = value config file; flags override it");
  app.add_option("--grounding", grounding, "builtin name or grounding file");
  app.add_option("--agent", agent, "random | correlated | greedy | q | rules");
  app.add_option("--gamma", gamma, "discount in [0, 1]");
  app.add_option("--alpha", alpha, "Q learning rate");
  app.add_option("--epsilon", epsilon, "Q exploration rate");
  app.add_option("--depth", depth, "Q history key depth");
  app.add_option("--rules", rules, "rule table file for --agent rules");
  app.add_option("--horizon", horizon, "steps per episode");
  app.add_option("--episodes", episodes, "number of episodes");
  app.add_option("--seed", seed, "master seed (required)");
  app.add_option("--cent", cent, "value of one unit of capital");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tmax", t_max, "search depth for enumerate / check");
  app.add_option("--cap", cap, "node, enumeration and unit cap");
  app.add_option("--mc-samples", mc_samples, "Monte Carlo sample size for entropy");
  app.add_option("--partition", partition, "single | singletons");
  app.add_flag("--list", list, "list histories (enumerate)");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", "simulate episodes; writes ledger.jsonl and metrics.csv"},
      {"check", "check propositions P1..P9; writes props.json"},
      {"entropy", "per-step entropy of the next joint observation; writes entropy.csv"},
      {"enumerate", "count realizable histories per depth"},
      {"fixtures", "write the shipped groundings as .grd files"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig c;
    c.command = app.get_subcommands().front()->get_name();
    if (config_path) apply_config_file(*config_path, c);
    if (grounding) c.grounding = *grounding;
    if (agent) c.agent.kind = *agent;
    if (gamma) c.agent.gamma = parse_rational(*gamma);
    if (alpha) c.agent.alpha = std::stod(*alpha);
    if (epsilon) c.agent.epsilon = parse_rational(*epsilon);
    if (depth) c.agent.depth = *depth;
    if (rules) c.rules_path = *rules;
    if (horizon) c.horizon = *horizon;
    if (episodes) c.episodes = *episodes;
    if (seed) c.seed = *seed;
    if (cent) c.cent = *cent;
    if (out_dir) c.out = *out_dir;
    if (t_max) c.t_max = *t_max;
    if (cap) c.cap = *cap;
    if (mc_samples) c.mc_samples = *mc_samples;
    if (partition) c.partition = parse_partition_scheme(*partition);
    c.list = list;

    if (c.command == "fixtures") return cmd_fixtures(c, out);
    if (c.command == "enumerate") {
      if (c.grounding.empty()) throw Error(ErrorCode::kInvalidConfig, "grounding is required");
      return cmd_enumerate(c, out);
    }
    validate_config(c);
    if (c.command == "run") return cmd_run(c, out);
    if (c.command == "check") return cmd_check(c, out);
    return cmd_entropy(c, out);
  } catch (const Error& e) {
    err << "capital-sim: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    err << "capital-sim: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "capital-sim: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace capital::cli
