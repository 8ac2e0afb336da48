#include "capital/error.hpp"
#include "capital/objective.hpp"
#include "capital/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capital;

namespace {

RewardStream ones(std::uint32_t unit, Time n) {
  RewardStream r;
  for (Time t = 0; t < n; ++t) r[{t, UnitId(unit)}] = 1;
  return r;
}

}  // namespace

TEST_CASE("geometric partial sum") {
  const auto r = discounted_return(ones(0, 3), {UnitId(0)}, Rational(1, 2), 0, Horizon::finite(2),
                                   CentQuantum(Rational(1)));
  CHECK(r.value == Rational(7, 4));
  CHECK_FALSE(r.tail_bound.has_value());
}

TEST_CASE("gamma zero keeps only the first reward") {
  RewardStream r = ones(0, 4);
  r[{0, UnitId(0)}] = 7;
  const auto v = discounted_return(r, {UnitId(0)}, Rational(0), 0, Horizon::finite(3), CentQuantum(Rational(1)));
  CHECK(v.value == 7);
  // Exponent is global time, so tau > 0 with gamma = 0 is empty.
  CHECK(discounted_return(r, {UnitId(0)}, Rational(0), 1, Horizon::finite(3), CentQuantum(Rational(1))).value == 0);
}

TEST_CASE("cent scaling, unit filter and tau") {
  RewardStream r = ones(0, 3);
  r[{1, UnitId(1)}] = 4;
  const CentQuantum cent(Rational(1, 100));
  const auto both = discounted_return(r, {UnitId(0), UnitId(1)}, Rational(1, 2), 1, Horizon::finite(2), cent);
  CHECK(both.value == (Rational(1, 2) * 5 + Rational(1, 4)) / 100);
  const auto only1 = discounted_return(r, {UnitId(1)}, Rational(1, 2), 0, Horizon::finite(2), cent);
  CHECK(only1.value == Rational(2, 100));
}

TEST_CASE("divergent and invalid objectives") {
  const CentQuantum cent;
  CHECK_THROWS_AS(discounted_return(ones(0, 2), {UnitId(0)}, Rational(1), 0, Horizon::truncated(5), cent), Error);
  CHECK_NOTHROW(discounted_return(ones(0, 2), {UnitId(0)}, Rational(1), 0, Horizon::finite(5), cent));
  CHECK_THROWS_AS(discounted_return(ones(0, 2), {UnitId(0)}, Rational(3, 2), 0, Horizon::finite(5), cent), Error);
  CHECK_THROWS_AS(discounted_return(ones(0, 2), {UnitId(0)}, Rational(1, 2), -1, Horizon::finite(5), cent), Error);

  const auto open = discounted_return(ones(0, 3), {UnitId(0)}, Rational(1, 2), 0, Horizon::truncated(2),
                                      CentQuantum(Rational(1)));
  REQUIRE(open.tail_bound.has_value());
  CHECK(*open.tail_bound == Rational(1, 8) / Rational(1, 2));
}

TEST_CASE("gamma 0.9, T 50 against re-summation") {
  RandomStream rng(2024, StreamPurpose::kTest);
  std::vector<LedgerEntry> entries;
  RewardStream stream;
  for (Time t = 0; t <= 50; ++t) {
    for (std::uint32_t u = 0; u < 3; ++u) {
      const auto k = static_cast<std::int64_t>(rng.next_index(6));
      entries.push_back(LedgerEntry{t, UnitId(u), PartitionId(0), ObservationId(0), ActionId(0), k, ObservationId(0), {}});
      stream[{t, UnitId(u)}] = k;
    }
  }
  const std::set<UnitId> units{UnitId(0), UnitId(2)};
  const Rational gamma(9, 10);
  const auto got = discounted_return(stream, units, gamma, 0, Horizon::finite(50), CentQuantum());
  CHECK(got.value == oracle::discounted_return(entries, units, gamma, 0, 50, Rational(1, 100)));
}
