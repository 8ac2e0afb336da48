#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "capital/agents.hpp"
#include "capital/simulation.hpp"

namespace capital::cli {

struct RunConfig {
  std::string command;
  std::string grounding;
  AgentSpec agent;
  std::string rules_path;
  Time horizon{10};
  std::uint32_t episodes{1};
  std::optional<std::uint64_t> seed;
  std::optional<std::string> cent;
  std::filesystem::path out{"capital-out"};
  std::size_t t_max{10};
  std::size_t cap{1'000'000};
  std::size_t mc_samples{10'000};
  PartitionScheme partition{PartitionScheme::kSingle};
  bool list{false};
};

// Flat key = value file; agent settings live under [agent]. Unknown keys
// are rejected.
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

// Throws InvalidConfig for anything cmd_* cannot run with.
void validate_config(const RunConfig& config);

PartitionScheme parse_partition_scheme(const std::string& text);

}  // namespace capital::cli
