#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

#include "capital/ids.hpp"

namespace capital {

struct LedgerEntry {
  Time t{0};
  UnitId unit;
  PartitionId partition;
  ObservationId obs;
  ActionId action;
  std::int64_t reward_k{0};
  ObservationId next_obs;
  std::vector<UnitId> spawned;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

// Append-only record of every unit step, ordered by (t, unit).
class Ledger {
 public:
  // Rejects negative reward counts and out-of-order entries.
  void append(LedgerEntry entry);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<LedgerEntry> entries_;
};

// G_t over a set of units: sum of reward counts with entry.t <= t.
std::int64_t accumulated_capital(const Ledger& ledger, const std::set<UnitId>& units, Time t);

// (t, unit) -> reward count.
using RewardStream = std::map<std::pair<Time, UnitId>, std::int64_t>;
RewardStream reward_stream(const Ledger& ledger);

// One JSON object per line with keys in the fixed order
// t, unit, partition, obs, action, reward_k, next_obs, spawned.
void write_ledger_jsonl(std::ostream& out, const Ledger& ledger);
Ledger read_ledger_jsonl(std::istream& in);

}  // namespace capital
