#include "capital/ledger.hpp"

#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "capital/error.hpp"

namespace capital {

void Ledger::append(LedgerEntry entry) {
  if (entry.reward_k < 0) {
    throw Error(ErrorCode::kNegativeReward, "ledger entry for unit " + std::to_string(entry.unit.value));
  }
  if (!entries_.empty()) {
    const auto& last = entries_.back();
    if (entry.t < last.t || (entry.t == last.t && !(last.unit < entry.unit))) {
      throw Error(ErrorCode::kInvalidArgument, "ledger entries must be ordered by (t, unit)");
    }
  }
  entries_.push_back(std::move(entry));
}

std::int64_t accumulated_capital(const Ledger& ledger, const std::set<UnitId>& units, Time t) {
  std::int64_t total = 0;
  for (const auto& e : ledger.entries()) {
    if (e.t > t) break;
    if (units.contains(e.unit)) total += e.reward_k;
  }
  return total;
}

RewardStream reward_stream(const Ledger& ledger) {
  RewardStream stream;
  for (const auto& e : ledger.entries()) stream[{e.t, e.unit}] += e.reward_k;
  return stream;
}

void write_ledger_jsonl(std::ostream& out, const Ledger& ledger) {
  for (const auto& e : ledger.entries()) {
    nlohmann::ordered_json line;
    line["t"] = e.t;
    line["unit"] = e.unit.value;
    line["partition"] = e.partition.value;
    line["obs"] = e.obs.value;
    line["action"] = e.action.value;
    line["reward_k"] = e.reward_k;
    line["next_obs"] = e.next_obs.value;
    auto spawned = nlohmann::ordered_json::array();
    for (auto id : e.spawned) spawned.push_back(id.value);
    line["spawned"] = std::move(spawned);
    out << line.dump() << '\n';
  }
}

Ledger read_ledger_jsonl(std::istream& in) {
  Ledger ledger;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LedgerEntry e;
      e.t = j.at("t").get<Time>();
      e.unit = UnitId(j.at("unit").get<std::uint32_t>());
      e.partition = PartitionId(j.at("partition").get<std::uint32_t>());
      e.obs = ObservationId(j.at("obs").get<std::uint32_t>());
      e.action = ActionId(j.at("action").get<std::uint32_t>());
      if (!j.at("reward_k").is_number_integer()) {
        throw Error(ErrorCode::kNotAMultiple, "reward_k must be an integer count");
      }
      e.reward_k = j.at("reward_k").get<std::int64_t>();
      e.next_obs = ObservationId(j.at("next_obs").get<std::uint32_t>());
      for (const auto& id : j.at("spawned")) e.spawned.push_back(UnitId(id.get<std::uint32_t>()));
      ledger.append(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kParseError, "ledger line " + std::to_string(number) + ": " + ex.what());
    }
  }
  return ledger;
}

}  // namespace capital
