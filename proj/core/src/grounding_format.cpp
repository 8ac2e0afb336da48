#include "capital/grounding_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "capital/error.hpp"

namespace capital {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineError {
 public:
  explicit LineError(std::size_t line) : line_(line) {}
  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_) + ": " + message);
  }

  template <typename T>
  T integer(std::string_view text) const {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail("expected an integer, got '" + std::string(text) + "'");
    }
    return value;
  }

  Time time(std::string_view text, bool allow_inf) const {
    if (text == "inf") {
      if (!allow_inf) fail("'inf' not allowed here");
      return kTimeInfinity;
    }
    const auto t = integer<Time>(text);
    if (t < 0) fail("negative time");
    return t;
  }

  Rational rational(std::string_view text) const {
    try {
      return parse_rational(text);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

 private:
  std::size_t line_;
};

std::string time_text(Time t) { return t == kTimeInfinity ? "inf" : std::to_string(t); }

template <typename Id>
std::string catalog_line(const char* tag, const CatalogEntry<Id>& e) {
  std::string line = std::string(tag) + " " + std::to_string(e.id.value) + " " + time_text(e.epoch.start) + " " +
                     time_text(e.epoch.end);
  if (!e.name.empty()) line += " " + e.name;
  return line;
}

}  // namespace

GroundingSpec parse_grounding(std::string_view text) {
  GroundingSpec g;
  bool saw_name = false;
  bool saw_init = false;
  bool saw_dynamics = false;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    const LineError at(number);
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string_view tag = tok[0];
    try {
      if (tag == "GROUNDING") {
        if (tok.size() != 2) at.fail("GROUNDING <name>");
        g.name = std::string(tok[1]);
        saw_name = true;
      } else if (tag == "KEY_DEPTH") {
        if (tok.size() != 2) at.fail("KEY_DEPTH <0|d|full>");
        if (saw_dynamics) at.fail("KEY_DEPTH must precede DYN lines");
        g.env.set_key_depth(tok[1] == "full" ? KeyDepth::full() : KeyDepth::last(at.integer<std::uint32_t>(tok[1])));
      } else if (tag == "CENT") {
        if (tok.size() != 2) at.fail("CENT <rational>");
        const Rational cent = at.rational(tok[1]);
        if (!(cent > 0)) at.fail("CENT must be positive");
        g.cent = CentQuantum(cent);
      } else if (tag == "INIT") {
        if (tok.size() != 3) at.fail("INIT <count> <origin_obs>");
        g.initial_units = at.integer<std::size_t>(tok[1]);
        g.initial_observation = ObservationId(at.integer<std::uint32_t>(tok[2]));
        saw_init = true;
      } else if (tag == "PROPORTIONAL") {
        if (tok.size() != 3) at.fail("PROPORTIONAL <units_per_cent> <initial_capital_k>");
        g.units_per_cent = at.integer<std::uint64_t>(tok[1]);
        g.initial_capital_k = at.integer<std::int64_t>(tok[2]);
      } else if (tag == "WITNESS") {
        for (std::size_t i = 1; i < tok.size(); ++i) g.witnesses.insert(parse_proposition(tok[i]));
      } else if (tag == "OBS" || tag == "ACT") {
        if (tok.size() != 4 && tok.size() != 5) at.fail(std::string(tag) + " <id> <start> <end|inf> [name]");
        const auto id = at.integer<std::uint32_t>(tok[1]);
        const Epoch epoch{at.time(tok[2], false), at.time(tok[3], true)};
        std::string name = tok.size() == 5 ? std::string(tok[4]) : std::string();
        if (tag == "OBS") {
          g.env.add_observation(ObservationId(id), epoch, std::move(name));
        } else {
          g.env.add_action(ActionId(id), epoch, std::move(name));
        }
      } else if (tag == "DYN") {
        // DYN <key> <action> <from> <to|inf> -> <obs>:<prob> ...
        if (tok.size() < 7 || tok[5] != "->") at.fail("DYN <key> <action> <from> <to|inf> -> <obs>:<prob> ...");
        const HistoryKey key = parse_history_key(tok[1], g.env.key_depth());
        const ActionId action(at.integer<std::uint32_t>(tok[2]));
        const Epoch window{at.time(tok[3], false), at.time(tok[4], true)};
        std::vector<ObservationDistribution::Outcome> outcomes;
        for (std::size_t i = 6; i < tok.size(); ++i) {
          const auto colon = tok[i].find(':');
          if (colon == std::string_view::npos) at.fail("outcome must be <obs>:<prob>");
          outcomes.push_back({ObservationId(at.integer<std::uint32_t>(tok[i].substr(0, colon))),
                              at.rational(tok[i].substr(colon + 1))});
        }
        g.env.add_dynamics(key, action, window, ObservationDistribution::from(std::move(outcomes)));
        saw_dynamics = true;
      } else if (tag == "REW") {
        // REW <obs> <action> <k>, or a raw amount (decimal/rational) that
        // must be an exact multiple of CENT.
        if (tok.size() != 4) at.fail("REW <obs> <action> <k>");
        const bool raw_amount = tok[3].find_first_of("./") != std::string_view::npos;
        const std::int64_t k =
            raw_amount ? quantize_reward(at.rational(tok[3]), g.cent) : at.integer<std::int64_t>(tok[3]);
        g.env.set_reward(ObservationId(at.integer<std::uint32_t>(tok[1])), ActionId(at.integer<std::uint32_t>(tok[2])), k);
      } else if (tag == "SPAWN") {
        if (tok.size() != 4) at.fail("SPAWN <obs> <action> <n>");
        g.env.set_spawn(ObservationId(at.integer<std::uint32_t>(tok[1])), ActionId(at.integer<std::uint32_t>(tok[2])),
                        at.integer<std::uint64_t>(tok[3]));
      } else if (tag == "DEATH") {
        if (tok.size() != 2) at.fail("DEATH <obs>");
        g.env.add_death_observation(ObservationId(at.integer<std::uint32_t>(tok[1])));
      } else {
        at.fail("unknown section '" + std::string(tag) + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParseError && std::string_view(e.what()).find(": line ") != std::string_view::npos) {
        throw;
      }
      throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (!saw_name) throw Error(ErrorCode::kParseError, "missing GROUNDING line");
  if (!saw_init) throw Error(ErrorCode::kParseError, "missing INIT line");
  g.env.validate();
  return g;
}

std::string write_grounding(const GroundingSpec& g) {
  std::ostringstream out;
  out << "# capital grounding v1\n";
  out << "GROUNDING " << g.name << '\n';
  out << "KEY_DEPTH " << to_string(g.env.key_depth()) << '\n';
  out << "CENT " << to_string(g.cent.value()) << '\n';
  out << "INIT " << g.initial_units << ' ' << g.initial_observation.value << '\n';
  if (g.units_per_cent) out << "PROPORTIONAL " << *g.units_per_cent << ' ' << g.initial_capital_k << '\n';
  if (!g.witnesses.empty()) {
    out << "WITNESS";
    for (auto p : g.witnesses) out << ' ' << to_string(p);
    out << '\n';
  }
  for (const auto& o : g.env.observations()) out << catalog_line("OBS", o) << '\n';
  for (const auto& a : g.env.actions()) out << catalog_line("ACT", a) << '\n';
  for (const auto& entry : g.env.dynamics_entries()) {
    out << "DYN " << to_string(entry.key, g.env.key_depth()) << ' ' << entry.action.value << ' '
        << time_text(entry.row.window.start) << ' ' << time_text(entry.row.window.end) << " ->";
    for (const auto& o : entry.row.next.outcomes()) out << ' ' << o.id.value << ':' << to_string(o.prob);
    out << '\n';
  }
  for (const auto& [oa, k] : g.env.rewards()) out << "REW " << oa.first.value << ' ' << oa.second.value << ' ' << k << '\n';
  for (const auto& [oa, n] : g.env.spawns()) out << "SPAWN " << oa.first.value << ' ' << oa.second.value << ' ' << n << '\n';
  for (auto o : g.env.death_observations()) out << "DEATH " << o.value << '\n';
  return out.str();
}

GroundingSpec load_grounding_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open grounding file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_grounding(buffer.str());
}

void save_grounding_file(const std::filesystem::path& path, const GroundingSpec& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write grounding file " + path.string());
  out << write_grounding(g);
}

}  // namespace capital
