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

#include "qdb/twists.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "qdb/families.hpp"
#include "qdb/invariants.hpp"
#include "testing.hpp"

namespace qdb {
namespace {

// The D8 model x^4 + x^2yz + y^4 + a y^2z^2 + b z^4 over F_13 with b = r^4,
// together with S = diag(1, i, -i) and T = [[1,0,0],[0,0,r],[0,1/r,0]].
struct D8Setup {
  unsigned p = 13;
  long long a, r;
  ExtFieldPtr E = make_ext(13, 1);
  TernaryQuartic C;
  Mat3 S, T;

  D8Setup(long long a_in, long long r_in) : a(a_in), r(r_in) {
    const long long b = r * r * r * r;
    C = testing::quartic_from(p, {{0, 1}, {4, 1}, {10, 1}, {12, a}, {14, b}});
    const long long i = 5;  // 5^2 = -1 mod 13
    S = mat3_from_ints(*E, {1, 0, 0, 0, i, 0, 0, 0, -i});
    const long long r_inv = E->base().inv(E->base().from_int(r));
    T = mat3_from_ints(*E, {1, 0, 0, 0, 0, r, 0, r_inv, 0});
  }

  // The closed-form twist for the class of T with tau = 2 primitive.
  TernaryQuartic displayed_twist() const {
    const long long tau = 2, r2 = r * r, r4 = r2 * r2;
    return testing::quartic_from(p, {{0, 1},
                                     {3, r},
                                     {5, -r * tau},
                                     {10, a * r2 + 2 * r4},
                                     {12, -2 * a * r2 * tau + 12 * r4 * tau},
                                     {14, a * r2 * tau * tau + 2 * r4 * tau * tau}});
  }
};

TernaryQuartic twist_by(const TernaryQuartic& C, const ExtFieldPtr& E, const Mat3& A, std::mt19937_64& rng) {
  const Coboundary cob = hilbert90(E, A, rng);
  return descend(transform(lift(C, cob.field), mat3_inv(*cob.field, cob.B)));
}

bool same_counts(const TernaryQuartic& F, const TernaryQuartic& G, unsigned up_to) {
  for (unsigned k = 1; k <= up_to; ++k) {
    if (count_points(F, k) != count_points(G, k)) return false;
  }
  return true;
}

TEST(GroupClosure, Sizes) {
  ExtFieldPtr E = make_ext(13, 1);
  EXPECT_EQ(group_closure(E, {mat3_identity(*E)}).size(), 1u);
  D8Setup d8(1, 2);
  AutGroupElements G = group_closure(d8.E, {d8.S, d8.T});
  EXPECT_EQ(G.size(), 8u);
  for (const auto& g : G.elements) {
    EXPECT_EQ(g, mat3_normalize(*d8.E, g));
    EXPECT_TRUE(testing::fixes(d8.E, d8.C, g));
  }
  EXPECT_TRUE(std::is_sorted(G.elements.begin(), G.elements.end()));
  const FamilyCandidate klein = StratumEnumerator(11, GroupId::G168).at(0);
  const AutDescriptor kd = aut_generators(klein);
  EXPECT_EQ(kd.generators.size(), 3u);
  EXPECT_EQ(group_closure(kd.field, kd.generators).size(), 168u);
}

TEST(GroupClosure, OverflowIsReported) {
  ExtFieldPtr E = make_ext(251, 1);
  const Mat3 g = mat3_diag(*E, E->primitive(), E->one(), E->one());
  EXPECT_THROW(group_closure(E, {g}), TwistError);
  EXPECT_EQ(group_closure(E, {g}, 250).size(), 250u);
}

TEST(FrobeniusClasses, TrivialGroup) {
  ExtFieldPtr E = make_ext(11, 1);
  const auto classes = frobenius_classes(group_closure(E, {mat3_identity(*E)}));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_TRUE(classes[0].contains_identity);
}

TEST(FrobeniusClasses, RationalInvolution) {
  ExtFieldPtr E = make_ext(11, 1);
  const auto G = group_closure(E, {mat3_from_ints(*E, {-1, 0, 0, 0, 1, 0, 0, 0, 1})});
  EXPECT_EQ(frobenius_classes(G).size(), 2u);
}

TEST(FrobeniusClasses, D8WithRationalAutomorphisms) {
  D8Setup d8(1, 2);
  const auto G = group_closure(d8.E, {d8.S, d8.T});
  const auto classes = frobenius_classes(G);
  ASSERT_EQ(classes.size(), 5u);
  std::vector<std::size_t> sizes;
  for (const auto& c : classes) sizes.push_back(c.size);
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 2, 2, 2}));
  EXPECT_TRUE(classes[0].contains_identity);
  EXPECT_EQ(classes[0].size, 1u);
}

// A Frobenius-stable group over F_{p^n}: class sizes are the orbit sizes of
// twisted conjugation and sum to the group order.
TEST(FrobeniusClasses, PartitionForIrrationalGroups) {
  for (GroupId id : {GroupId::G168, GroupId::G96, GroupId::G48, GroupId::C9}) {
    for (unsigned p : {11u, 13u}) {
      const AutDescriptor d = aut_generators(StratumEnumerator(p, id).at(0));
      const AutGroupElements G = group_closure(d.field, d.generators);
      const auto classes = frobenius_classes(G);
      std::size_t total = 0;
      for (const auto& c : classes) {
        total += c.size;
        EXPECT_EQ(G.size() % c.size, 0u);
      }
      EXPECT_EQ(total, G.size());
    }
  }
}

TEST(Hilbert90, IdentityNeedsNoExtension) {
  std::mt19937_64 rng(40);
  ExtFieldPtr E = make_ext(11, 1);
  const Coboundary cob = hilbert90(E, mat3_identity(*E), rng);
  EXPECT_EQ(cob.m, 1u);
  EXPECT_FALSE(mat3_det(*cob.field, cob.B).is_zero());
  const TernaryQuartic C = testing::klein(11);
  EXPECT_EQ(same_counts(twist_by(C, E, mat3_identity(*E), rng), C, 3), true);
}

// B^phi = B A^-1 on cocycles drawn from the automorphism groups of random
// family members across all non-trivial strata.
TEST(Hilbert90, CoboundaryContractOnRandomCocycles) {
  std::mt19937_64 rng(41);
  int cocycles = 0;
  unsigned max_retries = 0;
  while (cocycles < 100) {
    const unsigned p = rng() % 2 ? 11 : 13;
    const GroupId id = static_cast<GroupId>(1 + rng() % (kNumStrata - 1));
    StratumEnumerator en(p, id);
    const FamilyCandidate c = en.at(rng() % en.size());
    if (discriminant(c.quartic) == 0) continue;
    const AutDescriptor d = aut_generators(c);
    const AutGroupElements G = group_closure(d.field, d.generators);
    const ExtField& E = *d.field;
    unsigned exponent = 1;
    for (const auto& g : G.elements) exponent = std::lcm(exponent, testing::projective_order(E, g));

    const Mat3& A = G.elements[rng() % G.size()];
    const Coboundary cob = hilbert90(d.field, A, rng);
    const ExtField& W = *cob.field;
    ASSERT_EQ(W.degree(), cob.m);
    ASSERT_FALSE(mat3_det(W, cob.B).is_zero());
    ASSERT_EQ(mat3_frobenius(W, cob.B), mat3_mul(W, cob.B, mat3_inv(W, cob.A)));
    // The rescaled lift is still the same projective automorphism.
    const Mat3 A_in_W = W.degree() == E.degree() ? A : mat3_embed(Embedding(d.field, cob.field), A);
    ASSERT_EQ(mat3_normalize(W, cob.A), mat3_normalize(W, A_in_W));
    ASSERT_LE(cob.m, d.n() * exponent);
    ASSERT_EQ(cob.m % d.n(), 0u);
    max_retries = std::max(max_retries, cob.retries);
    ++cocycles;
  }
  EXPECT_LE(max_retries, 64u);
}

TEST(TwistsOf, TrivialGroupReturnsTheCurve) {
  std::mt19937_64 rng(42);
  ExtFieldPtr E = make_ext(11, 1);
  const TernaryQuartic C = testing::random_smooth_quartic(11, rng);
  const auto tw = twists_of(C, group_closure(E, {mat3_identity(*E)}), rng);
  ASSERT_EQ(tw.size(), 1u);
  EXPECT_EQ(tw[0].quartic, C);
  EXPECT_EQ(tw[0].rational_aut_order, 1u);
}

TEST(TwistsOf, C2QuadraticTwistShape) {
  std::mt19937_64 rng(43);
  for (unsigned p : {11u, 13u}) {
    const PrimeField k(p);
    const long long tau = k.smallest_nonsquare();
    StratumEnumerator en(p, GroupId::C2);
    int done = 0;
    for (int it = 0; it < 200 && done < 10; ++it) {
      const FamilyCandidate c = en.at(rng() % en.size());
      if (discriminant(c.quartic) == 0) continue;
      const AutDescriptor d = aut_generators(c);
      const auto tw = twists_of(c.quartic, group_closure(d.field, d.generators), rng);
      ASSERT_EQ(tw.size(), 2u);
      EXPECT_EQ(tw[0].quartic, c.quartic);
      EXPECT_EQ(tw[0].rational_aut_order, 2u);
      EXPECT_EQ(tw[1].rational_aut_order, 2u);
      // x^4 + x^2 q2(y, z) + q4(y, z) -> x^4 + x^2 q2 / tau + q4 / tau^2.
      TernaryQuartic expected = c.quartic;
      const std::uint8_t ti = k.inv(static_cast<std::uint8_t>(tau));
      for (int t : {3, 4, 5}) expected.c[t] = k.mul(expected.c[t], ti);
      for (int t : {10, 11, 12, 13, 14}) expected.c[t] = k.mul(expected.c[t], k.mul(ti, ti));
      EXPECT_EQ(testing::key_of(tw[1].quartic), testing::key_of(expected));
      EXPECT_TRUE(same_counts(tw[1].quartic, expected, 3)) << to_text(c.quartic);
      ++done;
    }
    EXPECT_EQ(done, 10);
  }
}

TEST(TwistsOf, TwistsAreGeometricallyIsomorphicAndRational) {
  std::mt19937_64 rng(44);
  for (int s = 1; s < kNumStrata; ++s) {
    const GroupId id = static_cast<GroupId>(s);
    for (unsigned p : {11u, 13u}) {
      StratumEnumerator en(p, id);
      for (int tries = 0; tries < 50; ++tries) {
        const FamilyCandidate c = en.at(rng() % en.size());
        if (discriminant(c.quartic) == 0) continue;
        const AutDescriptor d = aut_generators(c);
        const AutGroupElements G = group_closure(d.field, d.generators);
        const auto tw = twists_of(c.quartic, G, rng);
        EXPECT_EQ(tw.size(), frobenius_classes(G).size());
        unsigned mass_num = 0;
        for (const auto& t : tw) {
          ASSERT_EQ(testing::key_of(t.quartic), testing::key_of(c.quartic));
          ASSERT_EQ(G.size() % t.rational_aut_order, 0u);
          mass_num += static_cast<unsigned>(G.size() / t.rational_aut_order);
        }
        EXPECT_EQ(mass_num, G.size());  // sum of 1/|Aut_{F_p}| is one
        break;
      }
    }
  }
}

// Twisting C_A = C o B^-1 by A' = B A^-1 B^-1 yields C o (B'B)^-1 with B'B
// rational, so the result is F_p-isomorphic to C.
TEST(TwistsOf, TwistingBackByTheInverseClassRecoversTheCurve) {
  std::mt19937_64 rng(45);
  int done = 0;
  for (GroupId id : {GroupId::C2, GroupId::D4, GroupId::C3, GroupId::D8, GroupId::S3, GroupId::G16, GroupId::G48,
                     GroupId::G168}) {
    StratumEnumerator en(13, id);
    for (int tries = 0; tries < 50; ++tries) {
      const FamilyCandidate c = en.at(rng() % en.size());
      if (discriminant(c.quartic) == 0) continue;
      const AutDescriptor d = aut_generators(c);
      const AutGroupElements G = group_closure(d.field, d.generators);
      const auto classes = frobenius_classes(G);
      const Mat3& A0 = G.elements[classes.back().representative];
      const Coboundary cob = hilbert90(d.field, A0, rng);
      const ExtField& W = *cob.field;
      const Mat3 B_inv = mat3_inv(W, cob.B);
      const TernaryQuartic CA = descend(transform(lift(c.quartic, cob.field), B_inv));
      const Mat3 A1 = mat3_mul(W, mat3_mul(W, cob.B, mat3_inv(W, cob.A)), B_inv);
      ASSERT_TRUE(testing::fixes(cob.field, CA, A1));
      const TernaryQuartic back = twist_by(CA, cob.field, A1, rng);
      EXPECT_TRUE(same_counts(back, c.quartic, 3)) << stratum_info(id).name;
      ++done;
      break;
    }
  }
  EXPECT_EQ(done, 8);
}

TEST(D8Example, FiveTwistsAndTheClassOfT) {
  std::mt19937_64 rng(46);
  int checked = 0;
  for (long long a = 0; a < 13; ++a) {
    for (long long r : {1, 2, 3, 5, 6}) {
      D8Setup d8(a, r);
      if (discriminant(d8.C) == 0) continue;
      const AutGroupElements G = group_closure(d8.E, {d8.S, d8.T});
      ASSERT_EQ(G.size(), 8u);
      const auto tw = twists_of(d8.C, G, rng);
      ASSERT_EQ(tw.size(), 5u);

      const TernaryQuartic expected = d8.displayed_twist();
      const TernaryQuartic via_T = twist_by(d8.C, d8.E, d8.T, rng);
      EXPECT_EQ(testing::key_of(via_T), testing::key_of(expected)) << "a=" << a << " r=" << r;
      EXPECT_TRUE(same_counts(via_T, expected, 2)) << "a=" << a << " r=" << r;
      const bool listed =
          std::any_of(tw.begin(), tw.end(), [&](const Twist& t) { return same_counts(t.quartic, expected, 2); });
      EXPECT_TRUE(listed);
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

}  // namespace
}  // namespace qdb
