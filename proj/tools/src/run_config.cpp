#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "capital/error.hpp"
#include "capital/rational.hpp"

namespace capital::cli {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T out{};
    if constexpr (std::is_same_v<T, double>) {
      out = std::stod(value, &used);
    } else if constexpr (std::is_signed_v<T>) {
      out = static_cast<T>(std::stoll(value, &used));
    } else {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
      out = static_cast<T>(std::stoull(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidConfig, "bad value for " + key + ": '" + value + "'");
  }
}

void apply_top(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "grounding") {
    c.grounding = value;
  } else if (key == "horizon") {
    c.horizon = parse_number<Time>(key, value);
  } else if (key == "episodes") {
    c.episodes = parse_number<std::uint32_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "cent") {
    c.cent = value;
  } else if (key == "out") {
    c.out = value;
  } else if (key == "tmax") {
    c.t_max = parse_number<std::size_t>(key, value);
  } else if (key == "cap") {
    c.cap = parse_number<std::size_t>(key, value);
  } else if (key == "mc_samples") {
    c.mc_samples = parse_number<std::size_t>(key, value);
  } else if (key == "partition") {
    c.partition = parse_partition_scheme(value);
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
  }
}

void apply_agent(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "kind") {
    c.agent.kind = value;
  } else if (key == "gamma") {
    c.agent.gamma = parse_rational(value);
  } else if (key == "alpha") {
    c.agent.alpha = parse_number<double>(key, value);
  } else if (key == "epsilon") {
    c.agent.epsilon = parse_rational(value);
  } else if (key == "depth") {
    c.agent.depth = parse_number<std::uint32_t>(key, value);
  } else if (key == "rules") {
    c.rules_path = value;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown config key 'agent." + key + "'");
  }
}

}  // namespace

PartitionScheme parse_partition_scheme(const std::string& text) {
  if (text == "single") return PartitionScheme::kSingle;
  if (text == "singletons") return PartitionScheme::kSingletons;
  throw Error(ErrorCode::kInvalidConfig, "partition must be single or singletons, got '" + text + "'");
}

void apply_config_file(const std::filesystem::path& path, RunConfig& config) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      apply_top(config, key, node.data());
    } else if (key == "agent") {
      for (const auto& [k, v] : node) apply_agent(config, k, v.data());
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown config section [" + key + "]");
    }
  }
}

void validate_config(const RunConfig& c) {
  if (c.grounding.empty()) throw Error(ErrorCode::kInvalidConfig, "grounding is required");
  if (!c.seed) throw Error(ErrorCode::kInvalidConfig, "seed is required");
  if (c.agent.gamma < 0 || c.agent.gamma > 1) throw Error(ErrorCode::kInvalidConfig, "gamma must lie in [0, 1]");
  if (c.agent.epsilon < 0 || c.agent.epsilon > 1) {
    throw Error(ErrorCode::kInvalidConfig, "epsilon must lie in [0, 1]");
  }
  if (!(c.agent.alpha > 0.0 && c.agent.alpha <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "alpha must lie in (0, 1]");
  if (c.horizon < 0) throw Error(ErrorCode::kInvalidConfig, "horizon must be non-negative");
  if (c.episodes == 0) throw Error(ErrorCode::kInvalidConfig, "episodes must be positive");
  if (c.agent.kind == "rules" && c.rules_path.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "agent kind rules needs a rule table (--rules)");
  }
}

}  // namespace capital::cli
