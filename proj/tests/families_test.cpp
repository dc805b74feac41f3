// Copyright 2026 The qdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdb/families.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "qdb/twists.hpp"
#include "testing.hpp"

namespace qdb {
namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<unsigned> primes_between(unsigned lo, unsigned hi) {
  std::vector<unsigned> out;
  for (unsigned p = lo; p <= hi; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

TEST(Strata, Table) {
  const unsigned dims[kNumStrata] = {6, 4, 3, 2, 2, 2, 1, 1, 1, 0, 0, 0, 0};
  const unsigned orders[kNumStrata] = {1, 2, 4, 3, 8, 6, 6, 16, 24, 9, 48, 96, 168};
  for (int s = 0; s < kNumStrata; ++s) {
    const Stratum& info = stratum_info(static_cast<GroupId>(s));
    EXPECT_EQ(info.dim, dims[s]);
    EXPECT_EQ(info.order, orders[s]);
    EXPECT_EQ(parse_stratum(info.token), info.id);
  }
  EXPECT_FALSE(parse_stratum("c4").has_value());
  const auto& order = processing_order();
  EXPECT_EQ(order.front(), GroupId::G168);
  EXPECT_EQ(order.back(), GroupId::Trivial);
  for (std::size_t i = 1; i < order.size(); ++i) {
    EXPECT_LE(stratum_info(order[i - 1]).dim, stratum_info(order[i]).dim);
  }
}

TEST(StratumEnumerator, CandidateCounts) {
  const std::uint64_t p = 11;
  EXPECT_EQ(StratumEnumerator(11, GroupId::Trivial).size(), 10 * ipow(p, 6) + 6 * 10 * ipow(p, 5) + 3 * ipow(p, 6));
  EXPECT_EQ(StratumEnumerator(11, GroupId::C2).size(), 263538u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::D4).size(), 1452u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::C3).size(), 132u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::D8).size(), 121u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::S3).size(), 121u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::C6).size(), 11u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::G16).size(), 11u);
  EXPECT_EQ(StratumEnumerator(11, GroupId::S4).size(), 11u);
  for (GroupId s : {GroupId::C9, GroupId::G48, GroupId::G96, GroupId::G168}) {
    EXPECT_EQ(StratumEnumerator(11, s).size(), 1u);
  }
}

TEST(StratumEnumerator, IndexingIsABijectionOntoParameterTuples) {
  StratumEnumerator en(13, GroupId::D4);
  std::set<std::pair<int, std::vector<std::uint8_t>>> seen;
  for (std::uint64_t i = 0; i < en.size(); ++i) {
    FamilyCandidate c = en.at(i);
    EXPECT_EQ(c.stratum, GroupId::D4);
    seen.insert({c.family, std::vector<std::uint8_t>(c.params.begin(), c.params.begin() + c.num_params)});
    EXPECT_EQ(en.make(c.family, std::vector<std::uint8_t>(c.params.begin(), c.params.begin() + c.num_params)).quartic,
              c.quartic);
  }
  EXPECT_EQ(seen.size(), en.size());
  EXPECT_THROW(en.at(en.size()), FamilyError);
  EXPECT_THROW(en.make(0, {1, 2}), FamilyError);
  EXPECT_THROW(en.make(5, {}), FamilyError);
}

TEST(StratumEnumerator, ZeroDimensionalCurves) {
  EXPECT_EQ(StratumEnumerator(11, GroupId::G96).at(0).quartic, testing::fermat(11));
  EXPECT_EQ(StratumEnumerator(13, GroupId::G168).at(0).quartic, testing::klein(13));
  EXPECT_EQ(StratumEnumerator(13, GroupId::C9).at(0).quartic, testing::c9_curve(13));
  EXPECT_EQ(StratumEnumerator(13, GroupId::G48).at(0).quartic, testing::g48_curve(13));
}

TEST(StratumEnumerator, S4FibresOverSpecialValues) {
  StratumEnumerator en(11, GroupId::S4);
  EXPECT_EQ(en.make(0, {0}).quartic, testing::fermat(11));
  // a^2 + 3a + 18 = 0 has the roots 1 and 7 modulo 11; both fibres are the
  // Klein quartic over the algebraic closure.
  const CanonicalKey klein = testing::key_of(testing::klein(11));
  EXPECT_EQ(testing::key_of(en.make(0, {1}).quartic), klein);
  EXPECT_EQ(testing::key_of(en.make(0, {7}).quartic), klein);
  EXPECT_NE(testing::key_of(en.make(0, {3}).quartic), klein);
}

TEST(ExceptionalCurves, OnlyOverF11) {
  auto e11 = exceptional_curves(11);
  ASSERT_EQ(e11.size(), 1u);
  EXPECT_EQ(e11[0].stratum, GroupId::Trivial);
  EXPECT_EQ(count_points(e11[0].quartic), 0u);
  EXPECT_EQ(testing::brute_force_points(e11[0].quartic), 0u);
  EXPECT_NE(discriminant(e11[0].quartic), 0);
  for (unsigned p : {13u, 17u, 19u, 23u}) EXPECT_TRUE(exceptional_curves(p).empty());
}

// No member of the ten generic families has zero points: each one passes
// through a rational point by construction.
TEST(GenericFamilies, EveryMemberHasARationalPoint) {
  std::mt19937_64 rng(30);
  StratumEnumerator en(11, GroupId::Trivial);
  for (int it = 0; it < 2000; ++it) {
    const FamilyCandidate c = en.at(rng() % en.size());
    ASSERT_GT(count_points(c.quartic), 0u) << to_text(c.quartic);
  }
}

TEST(AutGenerators, GroupOrderMatchesStratum) {
  std::mt19937_64 rng(31);
  for (unsigned p : {11u, 13u, 17u, 19u, 23u, 29u, 37u}) {
    for (int s = 1; s < kNumStrata; ++s) {
      const GroupId id = static_cast<GroupId>(s);
      StratumEnumerator en(p, id);
      int checked = 0;
      for (int it = 0; it < 400 && checked < 6; ++it) {
        const FamilyCandidate c = en.at(rng() % en.size());
        if (discriminant(c.quartic) == 0) continue;
        ++checked;
        const AutDescriptor d = aut_generators(c);
        const AutGroupElements G = group_closure(d.field, d.generators);
        ASSERT_EQ(G.size(), stratum_info(id).order) << p << ' ' << stratum_info(id).name << ' ' << to_text(c.quartic);
        for (const Mat3& g : G.elements) ASSERT_TRUE(testing::fixes(d.field, c.quartic, g));
      }
      EXPECT_GT(checked, 0) << p << ' ' << stratum_info(id).name;
    }
  }
}

TEST(AutGenerators, FieldsOfDefinition) {
  // C2 is generated by diag(-1, 1, 1) over the prime field.
  FamilyCandidate c2 = StratumEnumerator(11, GroupId::C2).make(2, {1, 2, 3, 4, 5});
  AutDescriptor d = aut_generators(c2);
  EXPECT_EQ(d.n(), 1u);
  ASSERT_EQ(d.generators.size(), 1u);
  EXPECT_EQ(mat3_normalize(*d.field, d.generators[0]),
            mat3_normalize(*d.field, mat3_from_ints(*d.field, {-1, 0, 0, 0, 1, 0, 0, 0, 1})));

  // D8 with 4 | p - 1 and b a fourth power: everything is rational.
  FamilyCandidate d8 = StratumEnumerator(13, GroupId::D8).make(0, {1, 3});  // 3 = 4^4 mod 13
  EXPECT_EQ(aut_generators(d8).n(), 1u);
  // With b not a fourth power the group needs the quartic extension.
  FamilyCandidate d8b = StratumEnumerator(13, GroupId::D8).make(0, {1, 2});
  EXPECT_GT(aut_generators(d8b).n(), 1u);

  // The Klein quartic needs the 7th roots of unity: degree 3 over F_11 and 2 over F_13.
  EXPECT_EQ(aut_generators(StratumEnumerator(11, GroupId::G168).at(0)).n() % 3, 0u);
  EXPECT_EQ(aut_generators(StratumEnumerator(13, GroupId::G168).at(0)).n() % 2, 0u);

  EXPECT_TRUE(aut_generators(StratumEnumerator(11, GroupId::Trivial).at(0)).generators.empty());
}

TEST(StratumCountFormulas, FrozenValues) {
  const StratumCounts t11 = expected_stratum_counts(11);
  EXPECT_EQ(t11.rows[static_cast<int>(GroupId::D4)].geometric, 1018u);
  EXPECT_EQ(t11.rows[static_cast<int>(GroupId::G168)].arithmetic, 6u);
  EXPECT_EQ(t11.total_geometric, 1771562u);
  EXPECT_EQ(t11.total_arithmetic, 1785076u);
  const StratumCounts t13 = expected_stratum_counts(13);
  EXPECT_EQ(t13.rows[static_cast<int>(GroupId::C9)].arithmetic, 3u);
  EXPECT_EQ(t13.rows[static_cast<int>(GroupId::G96)].arithmetic, 10u);
  EXPECT_EQ(t13.total_geometric, 4826810u);
}

// The C9 row follows the Frobenius class count gcd(p - 1, 9).
TEST(StratumCountFormulas, C9RowMatchesTwistCount) {
  std::mt19937_64 rng(32);
  for (unsigned p : {11u, 13u, 19u, 37u, 43u, 61u}) {
    const FamilyCandidate c = StratumEnumerator(p, GroupId::C9).at(0);
    const AutDescriptor d = aut_generators(c);
    const auto tw = twists_of(c.quartic, group_closure(d.field, d.generators), rng);
    EXPECT_EQ(tw.size(), std::gcd(p - 1, 9u)) << p;
    EXPECT_EQ(expected_stratum_counts(p).rows[static_cast<int>(GroupId::C9)].arithmetic, tw.size()) << p;
  }
}

TEST(StratumCountFormulas, RowsSumToTotals) {
  for (unsigned p : primes_between(11, 251)) {
    const StratumCounts t = expected_stratum_counts(p);
    std::uint64_t geo = 0, arith = 0;
    for (const auto& row : t.rows) {
      EXPECT_LE(row.geometric, row.arithmetic) << p;
      geo += row.geometric;
      arith += row.arithmetic;
    }
    EXPECT_EQ(geo, ipow(p, 6) + 1) << p;
    EXPECT_EQ(t.total_geometric, ipow(p, 6) + 1) << p;
    EXPECT_EQ(arith, t.total_arithmetic) << p;
  }
}

}  // namespace
}  // namespace qdb
