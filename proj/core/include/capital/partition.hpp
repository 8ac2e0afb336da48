#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "capital/ids.hpp"

namespace capital {

struct Partition {
  PartitionId id;
  std::set<UnitId> members;

  friend bool operator==(const Partition&, const Partition&) = default;
};

struct Partitioning {
  std::vector<Partition> partitions;

  const Partition* find(PartitionId id) const;
  Partition* find(PartitionId id);
  // Partition holding `unit`, or nullptr.
  const Partition* owner_of(UnitId unit) const;
};

// Number of units in the partition.
inline std::size_t agency(const Partition& p) { return p.members.size(); }

struct PartitionViolation {
  enum class Kind { kOverlap, kCoverageGap, kEmptyPartition, kDeadMember };
  Kind kind;
  PartitionId partition;
  UnitId unit;  // witness unit; unused for kEmptyPartition
};

struct PartitioningReport {
  std::vector<PartitionViolation> violations;

  bool valid() const { return violations.empty(); }
};

std::string to_string(PartitionViolation::Kind kind);

// Disjointness, coverage of every alive unit, no empty partitions, and no
// members outside the alive set.
PartitioningReport check_partitioning(const Partitioning& p, const std::set<UnitId>& alive);

Partitioning single_partition(const std::vector<UnitId>& units);
Partitioning singleton_partitions(const std::vector<UnitId>& units);

}  // namespace capital
