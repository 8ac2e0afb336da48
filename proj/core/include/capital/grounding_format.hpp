#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "capital/groundings.hpp"

namespace capital {

// Line-oriented grounding text format; see docs/grounding_format.md.
// Parsing validates structure and rejects rows whose probabilities do not
// sum to exactly 1. Errors carry the 1-based line number.
GroundingSpec parse_grounding(std::string_view text);
std::string write_grounding(const GroundingSpec& g);

GroundingSpec load_grounding_file(const std::filesystem::path& path);
void save_grounding_file(const std::filesystem::path& path, const GroundingSpec& g);

}  // namespace capital
