#include "capital/partition.hpp"

#include <map>

namespace capital {

const Partition* Partitioning::find(PartitionId id) const {
  for (const auto& p : partitions) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Partition* Partitioning::find(PartitionId id) {
  for (auto& p : partitions) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Partition* Partitioning::owner_of(UnitId unit) const {
  for (const auto& p : partitions) {
    if (p.members.contains(unit)) return &p;
  }
  return nullptr;
}

std::string to_string(PartitionViolation::Kind kind) {
  switch (kind) {
    case PartitionViolation::Kind::kOverlap: return "overlap";
    case PartitionViolation::Kind::kCoverageGap: return "coverage_gap";
    case PartitionViolation::Kind::kEmptyPartition: return "empty_partition";
    case PartitionViolation::Kind::kDeadMember: return "dead_member";
  }
  return "unknown";
}

PartitioningReport check_partitioning(const Partitioning& p, const std::set<UnitId>& alive) {
  PartitioningReport report;
  std::map<UnitId, PartitionId> first_owner;
  for (const auto& part : p.partitions) {
    if (part.members.empty()) {
      report.violations.push_back({PartitionViolation::Kind::kEmptyPartition, part.id, UnitId{}});
    }
    for (auto unit : part.members) {
      if (auto [it, inserted] = first_owner.emplace(unit, part.id); !inserted) {
        report.violations.push_back({PartitionViolation::Kind::kOverlap, part.id, unit});
      }
      if (!alive.contains(unit)) report.violations.push_back({PartitionViolation::Kind::kDeadMember, part.id, unit});
    }
  }
  for (auto unit : alive) {
    if (!first_owner.contains(unit)) {
      report.violations.push_back({PartitionViolation::Kind::kCoverageGap, PartitionId{}, unit});
    }
  }
  return report;
}

Partitioning single_partition(const std::vector<UnitId>& units) {
  Partitioning p;
  p.partitions.push_back(Partition{PartitionId(0), std::set<UnitId>(units.begin(), units.end())});
  return p;
}

Partitioning singleton_partitions(const std::vector<UnitId>& units) {
  Partitioning p;
  for (auto u : units) p.partitions.push_back(Partition{PartitionId(u.value), {u}});
  return p;
}

}  // namespace capital
