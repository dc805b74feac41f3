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

#include <algorithm>
#include <numeric>
#include <string>

#include "qdb/twists.hpp"

namespace qdb {

namespace {

using Coeffs = std::array<long long, kQuarticTerms>;
using G = GroupId;

constexpr std::array<Stratum, kNumStrata> kStrata = {{
    {G::Trivial, "triv", "{1}", 6, 1, 12},
    {G::C2, "c2", "C2", 4, 2, 11},
    {G::D4, "d4", "D4", 3, 4, 10},
    {G::C3, "c3", "C3", 2, 3, 8},
    {G::D8, "d8", "D8", 2, 8, 9},
    {G::S3, "s3", "S3", 2, 6, 7},
    {G::C6, "c6", "C6", 1, 6, 4},
    {G::G16, "g16", "G16", 1, 16, 6},
    {G::S4, "s4", "S4", 1, 24, 5},
    {G::C9, "c9", "C9", 0, 9, 3},
    {G::G48, "g48", "G48", 0, 48, 2},
    {G::G96, "g96", "G96", 0, 96, 1},
    {G::G168, "g168", "G168", 0, 168, 0},
}};

// Monomial positions, x^4 = 0 ... z^4 = 14.
enum : int { X4, X3Y, X3Z, X2Y2, X2YZ, X2Z2, XY3, XY2Z, XYZ2, XZ3, Y4, Y3Z, Y2Z2, YZ3, Z4 };

std::vector<std::uint8_t> all_residues(unsigned p) {
  std::vector<std::uint8_t> v(p);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<std::uint8_t> nonzero_residues(unsigned p) {
  std::vector<std::uint8_t> v(p - 1);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

// One of the ten generic shapes: free coefficients m_i and coefficients fixed to 1,
// using 1-based positions in the standard monomial order.
struct GenericShape {
  std::vector<int> free;
  std::vector<int> ones;
  bool m6_nonzero;
};

const std::vector<GenericShape>& generic_shapes() {
  static const std::vector<GenericShape> shapes = {
      {{1, 2, 4, 6, 7, 11, 12}, {8, 13, 14}, true},
      {{1, 2, 4, 6, 11, 12}, {7, 13, 14}, true},
      {{1, 2, 4, 6, 11, 12}, {13, 14}, true},
      {{1, 2, 4, 6, 11, 12}, {7, 8, 14}, true},
      {{1, 2, 4, 6, 11, 12}, {8, 14}, true},
      {{2, 4, 6, 7, 11, 12}, {1, 14}, true},
      {{2, 4, 6, 7, 11, 12}, {14}, true},
      {{4, 7, 8, 11, 12, 13}, {3, 9, 14}, false},
      {{4, 7, 8, 11, 12, 13}, {3, 14}, false},
      {{4, 5, 7, 8, 11, 12}, {1, 14}, false},
  };
  return shapes;
}

void d4_three_parameter(const std::uint8_t* t, Coeffs& m) {
  const long long a = t[0], b = t[1], c = t[2];
  const long long a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
  const long long b2 = b * b, b3 = b2 * b, c2 = c * c, c3 = c2 * c;
  m[X4] = a + 3;
  m[X3Y] = 4 * a2 - 8 * b + 4 * a;
  m[X3Z] = 12 * c + 4 * b;
  m[X2Y2] = 6 * a3 - 18 * a * b + 18 * c + 2 * a2;
  m[X2YZ] = 12 * a * c + 4 * a * b;
  m[X2Z2] = 6 * b * c + 2 * b2;
  m[XY3] = 4 * a4 - 16 * a2 * b + 8 * b2 + 16 * a * c + 2 * a * b - 6 * c;
  m[XY2Z] = 12 * a2 * c - 24 * b * c + 2 * a2 * b - 4 * b2 + 6 * a * c;
  m[XYZ2] = 36 * c2 + 2 * a * b2 - 4 * a2 * c + 6 * b * c;
  m[XZ3] = 4 * b2 * c - 8 * a * c2 + 2 * a * b * c - 6 * c2;
  m[Y4] = a5 - 5 * a3 * b + 5 * a * b2 + 5 * a2 * c - 5 * b * c + b2 - 2 * a * c;
  m[Y3Z] = 4 * a3 * c - 12 * a * b * c + 12 * c2 + 4 * a2 * c - 8 * b * c;
  m[Y2Z2] = 6 * a * c2 + a2 * b2 - 2 * b3 - 2 * a3 * c + 4 * a * b * c + 9 * c2;
  m[YZ3] = 4 * b * c2 + 4 * b2 * c - 8 * a * c2;
  m[Z4] = b3 * c - 3 * a * b * c2 + 3 * c3 + a2 * c2 - 2 * b * c2;
}

void d4_two_parameter(const std::uint8_t* t, Coeffs& m) {
  const long long a = t[0], b = t[1];
  const long long a2 = a * a, a3 = a2 * a;
  m[X4] = 1;
  m[X2Y2] = 2;
  m[X2YZ] = 2 * a;
  m[X2Z2] = a2 - 2 * b;
  m[Y4] = a;
  m[Y3Z] = 4 * (a2 - 2 * b);
  m[Y2Z2] = 6 * (a3 - 3 * a * b);
  m[YZ3] = 4 * (a3 * a - 4 * a2 * b + 2 * b * b);
  m[Z4] = a3 * a2 - 5 * a3 * b + 5 * a * b * b;
}

std::vector<StratumEnumerator::Family> build_families(unsigned p, GroupId s) {
  using Family = StratumEnumerator::Family;
  const auto all = all_residues(p);
  std::vector<Family> out;
  auto single = [&](std::initializer_list<std::pair<int, long long>> terms) {
    Coeffs fixed{};
    for (auto [i, v] : terms) fixed[i] = v;
    out.push_back({{}, [fixed](const std::uint8_t*, Coeffs& m) { m = fixed; }});
  };
  switch (s) {
    case G::Trivial:
      for (const auto& shape : generic_shapes()) {
        Family f;
        for (int m : shape.free) f.domains.push_back(m == 6 && shape.m6_nonzero ? nonzero_residues(p) : all);
        f.build = [shape](const std::uint8_t* t, Coeffs& m) {
          for (std::size_t j = 0; j < shape.free.size(); ++j) m[shape.free[j] - 1] = t[j];
          for (int i : shape.ones) m[i - 1] = 1;
        };
        out.push_back(std::move(f));
      }
      break;
    case G::C2: {
      const long long alpha = PrimeField(p).smallest_nonsquare();
      const std::vector<std::uint8_t> eps2{1, static_cast<std::uint8_t>(alpha)};
      const std::vector<std::uint8_t> eps3{0, 1, static_cast<std::uint8_t>(alpha)};
      out.push_back({{eps2, {0, 1}, all, all, all, all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X4] = 1;
                       m[X2Y2] = t[0];
                       m[Y3Z] = t[1];
                       m[Y4] = t[2];
                       m[Y2Z2] = t[3];
                       m[YZ3] = t[4];
                       m[Z4] = t[5];
                     }});
      out.push_back({{eps3, all, all, all, all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X4] = 1;
                       m[X2YZ] = 1;
                       m[Y3Z] = t[0];
                       m[Y4] = t[1];
                       m[Y2Z2] = t[2];
                       m[YZ3] = t[3];
                       m[Z4] = t[4];
                     }});
      out.push_back({{all, all, all, all, all}, [alpha](const std::uint8_t* t, Coeffs& m) {
                       m[X4] = 1;
                       m[X2Y2] = 1;
                       m[X2Z2] = -alpha;
                       m[Y4] = t[0];
                       m[Y3Z] = t[1];
                       m[Y2Z2] = t[2];
                       m[YZ3] = t[3];
                       m[Z4] = t[4];
                     }});
      break;
    }
    case G::D4:
      out.push_back({{all, all, all}, d4_three_parameter});
      out.push_back({{all, all}, d4_two_parameter});
      break;
    case G::C3:
      out.push_back({{all, all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X3Z] = 1;
                       m[Y4] = 1;
                       m[Y2Z2] = t[0];
                       m[YZ3] = t[0];
                       m[Z4] = t[1];
                     }});
      out.push_back({{all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X3Z] = 1;
                       m[Y4] = 1;
                       m[YZ3] = t[0];
                       m[Z4] = t[0];
                     }});
      break;
    case G::D8:
      out.push_back({{all, all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X4] = 1;
                       m[X2YZ] = 1;
                       m[Y4] = 1;
                       m[Y2Z2] = t[0];
                       m[Z4] = t[1];
                     }});
      break;
    case G::S3:
      out.push_back({{all, all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X3Z] = 1;
                       m[Y3Z] = 1;
                       m[X2Y2] = 1;
                       m[XYZ2] = t[0];
                       m[Z4] = t[1];
                     }});
      break;
    case G::C6:
      out.push_back({{all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X3Z] = 1;
                       m[Y4] = t[0];
                       m[Y2Z2] = t[0];
                       m[Z4] = 1;
                     }});
      break;
    case G::G16:
      out.push_back({{all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X4] = 1;
                       m[Y3Z] = 1;
                       m[YZ3] = t[0];
                       m[Z4] = t[0];
                     }});
      break;
    case G::S4:
      out.push_back({{all}, [](const std::uint8_t* t, Coeffs& m) {
                       m[X4] = m[Y4] = m[Z4] = 1;
                       m[X2Y2] = m[Y2Z2] = m[X2Z2] = t[0];
                     }});
      break;
    case G::C9:
      single({{X3Y, 1}, {Y3Z, 1}, {Z4, 1}});
      break;
    case G::G48:
      single({{X4, 1}, {Y3Z, 1}, {Z4, -1}});
      break;
    case G::G96:
      single({{X4, 1}, {Y4, 1}, {Z4, 1}});
      break;
    case G::G168:
      single({{X3Y, 1}, {Y3Z, 1}, {XZ3, 1}});
      break;
  }
  return out;
}

// --- automorphism templates -------------------------------------------------

std::optional<ExtElement> proportionality(const ExtField& E, const ExtQuartic& F, const ExtQuartic& H) {
  int pivot = -1;
  for (int i = 0; i < kQuarticTerms; ++i) {
    if (F.c[i].is_zero() != H.c[i].is_zero()) return std::nullopt;
    if (pivot < 0 && !F.c[i].is_zero()) pivot = i;
  }
  if (pivot < 0) return std::nullopt;
  ExtElement lambda = E.div(H.c[pivot], F.c[pivot]);
  for (int i = 0; i < kQuarticTerms; ++i) {
    if (!(E.mul(lambda, F.c[i]) == H.c[i])) return std::nullopt;
  }
  return lambda;
}

unsigned root_degree(unsigned p, unsigned n) { return multiplicative_order_degree(p, n); }

ExtElement elt(const ExtField& E, long long v) { return E.from_int(v); }

Mat3 block(const ExtField& E, const ExtElement& c, const ExtElement& a, const ExtElement& b, const ExtElement& d,
           const ExtElement& e) {
  Mat3 M = mat3_diag(E, c, E.one(), E.one());
  M.at(1, 1) = a;
  M.at(1, 2) = b;
  M.at(2, 1) = d;
  M.at(2, 2) = e;
  return M;
}

std::optional<ExtElement> fourth_root(const ExtField& E, const ExtElement& lambda) {
  ExtPoly f(5, E.zero());
  f[0] = E.neg(lambda);
  f[4] = E.one();
  auto r = E.roots(f);
  if (r.empty()) return std::nullopt;
  return r.front();
}

// Scale factor lambda with F o diag(1, N) = lambda * F on the (y, z) part of
// x^4 + q(y, z).
std::optional<ExtElement> binary_scale(const ExtFieldPtr& E, const TernaryQuartic& F, const Mat3& M) {
  ExtQuartic lifted = lift(F, E);
  ExtQuartic image = transform(lifted, M);
  for (int i : {Y4, Y3Z, Y2Z2, YZ3, Z4}) {
    if (!lifted.c[i].is_zero()) return E->div(image.c[i], lifted.c[i]);
  }
  return std::nullopt;
}

Mat3 cyclic_perm(const ExtField& E) { return mat3_from_ints(E, {0, 1, 0, 0, 0, 1, 1, 0, 0}); }

AutDescriptor generators_for(const FamilyCandidate& c) {
  const unsigned p = c.quartic.p;
  AutDescriptor d;
  d.id = c.stratum;
  auto field = [&](unsigned deg) {
    d.field = make_ext(p, deg);
    return d.field;
  };
  const auto& t = c.params;
  switch (c.stratum) {
    case G::Trivial:
      field(1);
      break;
    case G::C2: {
      const ExtField& E = *field(1);
      d.generators.push_back(mat3_diag(E, elt(E, -1), E.one(), E.one()));
      break;
    }
    case G::C3:
    case G::C6:
    case G::S3: {
      const ExtField& E = *field(root_degree(p, 3));
      ExtElement z3 = root_of_unity(3, E);
      if (c.stratum == G::C3) {
        d.generators.push_back(mat3_diag(E, z3, E.one(), E.one()));
      } else if (c.stratum == G::C6) {
        d.generators.push_back(mat3_diag(E, z3, elt(E, -1), E.one()));
      } else {
        d.generators.push_back(mat3_diag(E, z3, E.inv(z3), E.one()));
        d.generators.push_back(mat3_from_ints(E, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
      }
      break;
    }
    case G::D8: {
      if (t[1] == 0) throw FamilyError("D8 model with b = 0 is singular");
      const unsigned base = root_degree(p, 4);
      RootInField r = nth_root(make_ext(p, base)->from_base(t[1]), 4, make_ext(p, base));
      d.field = r.field;
      const ExtField& E = *d.field;
      ExtElement i = root_of_unity(4, E);
      d.generators.push_back(mat3_diag(E, E.one(), i, E.neg(i)));
      d.generators.push_back(block(E, E.one(), E.zero(), r.root, E.inv(r.root), E.zero()));
      break;
    }
    case G::S4: {
      const ExtField& E = *field(1);
      d.generators.push_back(mat3_diag(E, elt(E, -1), E.one(), E.one()));
      d.generators.push_back(mat3_diag(E, E.one(), elt(E, -1), E.one()));
      d.generators.push_back(cyclic_perm(E));
      d.generators.push_back(mat3_from_ints(E, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
      break;
    }
    case G::C9: {
      const ExtField& E = *field(root_degree(p, 9));
      ExtElement z9 = root_of_unity(9, E);
      d.generators.push_back(mat3_diag(E, z9, E.pow(z9, 3), E.pow_signed(z9, -3)));
      break;
    }
    case G::G96: {
      const ExtField& E = *field(root_degree(p, 4));
      ExtElement i = root_of_unity(4, E);
      d.generators.push_back(mat3_diag(E, i, E.one(), E.one()));
      d.generators.push_back(mat3_diag(E, E.one(), i, E.one()));
      d.generators.push_back(cyclic_perm(E));
      d.generators.push_back(mat3_from_ints(E, {0, 1, 0, 1, 0, 0, 0, 0, 1}));
      break;
    }
    case G::G48: {
      const unsigned base = root_degree(p, 12);
      ExtFieldPtr B = make_ext(p, base);
      Mat3 N = block(*B, B->one(), B->one(), B->from_int(2), B->one(), B->from_int(-1));
      auto lambda = binary_scale(B, c.quartic, N);
      if (!lambda) throw FamilyError("template-verification-failure: G48 scale");
      RootInField r = nth_root(*lambda, 4, B);
      d.field = r.field;
      const ExtField& E = *d.field;
      ExtElement i = root_of_unity(4, E);
      ExtElement z3 = root_of_unity(3, E);
      d.generators.push_back(mat3_diag(E, i, E.one(), E.one()));
      d.generators.push_back(mat3_diag(E, E.one(), z3, E.one()));
      d.generators.push_back(block(E, r.root, E.one(), E.from_int(2), E.one(), E.from_int(-1)));
      break;
    }
    case G::G16: {
      const long long a = t[0];
      if (a == 0) throw FamilyError("G16 model with a = 0 is singular");
      const std::vector<std::uint8_t> cubic{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(a), 0, 1};
      const unsigned base = std::lcm(splitting_degree(cubic, p), root_degree(p, 4));
      for (unsigned k : {1u, 2u, 4u}) {
        ExtFieldPtr Eptr = make_ext(p, base * k);
        const ExtField& E = *Eptr;
        ExtPoly f;
        for (auto v : cubic) f.push_back(E.from_base(v));
        auto e = E.roots(f);
        if (e.size() != 3) throw FamilyError("G16 cubic does not split into distinct roots");
        std::vector<Mat3> gens{mat3_diag(E, root_of_unity(4, E), E.one(), E.one())};
        bool ok = true;
        for (int j = 0; j < 2 && ok; ++j) {
          const ExtElement& ej = e[j];
          const ExtElement& ek = e[(j + 1) % 3];
          const ExtElement& el = e[(j + 2) % 3];
          ExtElement K = E.sub(E.mul(ek, el), E.add(E.mul(ej, ek), E.mul(ej, el)));
          Mat3 N = block(E, E.one(), ej, K, E.one(), E.neg(ej));
          auto lambda = binary_scale(Eptr, c.quartic, N);
          if (!lambda) throw FamilyError("template-verification-failure: G16 scale");
          auto root = fourth_root(E, *lambda);
          if (!root) {
            ok = false;
            break;
          }
          gens.push_back(block(E, *root, ej, K, E.one(), E.neg(ej)));
        }
        if (ok) {
          d.field = Eptr;
          d.generators = std::move(gens);
          break;
        }
      }
      if (!d.field) throw FamilyError("G16: no field containing the scaling roots");
      break;
    }
    case G::G168: {
      const ExtField& E = *field(root_degree(p, 7));
      ExtElement z = root_of_unity(7, E);
      auto dd = [&](int a) { return E.sub(E.pow_signed(z, a), E.pow_signed(z, -a)); };
      d.generators.push_back(mat3_diag(E, E.one(), E.pow(z, 3), z));
      d.generators.push_back(cyclic_perm(E));
      Mat3 g;
      const std::array<int, 3> idx{1, 2, 4};
      for (int r = 0; r < 3; ++r) {
        for (int col = 0; col < 3; ++col) g.at(r, col) = dd(idx[(r + col) % 3]);
      }
      d.generators.push_back(g);
      break;
    }
    case G::D4: {
      std::vector<std::uint8_t> poly;
      if (c.family == 0) {
        const PrimeField k(p);
        poly = {k.neg(t[2]), t[1], k.neg(t[0]), 1};
      } else {
        poly = {t[1], PrimeField(p).neg(t[0]), 1};
      }
      const ExtField& E = *field(splitting_degree(poly, p));
      ExtPoly f;
      for (auto v : poly) f.push_back(E.from_base(v));
      auto roots = E.roots(f);
      if (roots.size() + 1 != poly.size()) throw FamilyError("D4 model with repeated parameter roots");
      Mat3 M;
      std::array<Mat3, 2> flips;
      if (c.family == 0) {
        const ExtElement &r = roots[0], &s = roots[1], &u = roots[2];
        const std::array<ExtElement, 3> first{r, s, u};
        const std::array<ExtElement, 3> second{E.mul(s, u), E.mul(u, r), E.mul(r, s)};
        for (int i = 0; i < 3; ++i) {
          M.at(i, 0) = E.one();
          M.at(i, 1) = first[i];
          M.at(i, 2) = second[i];
        }
        flips = {mat3_diag(E, elt(E, -1), E.one(), E.one()), mat3_diag(E, E.one(), elt(E, -1), E.one())};
      } else {
        M = block(E, E.one(), E.one(), roots[0], E.one(), roots[1]);
        flips = {mat3_diag(E, E.one(), elt(E, -1), E.one()), mat3_diag(E, E.one(), E.one(), elt(E, -1))};
      }
      Mat3 Minv = mat3_inv(E, M);
      for (const auto& g : flips) d.generators.push_back(mat3_mul(E, Minv, mat3_mul(E, g, M)));
      break;
    }
  }
  return d;
}

}  // namespace

const Stratum& stratum_info(GroupId id) { return kStrata[static_cast<int>(id)]; }

std::optional<GroupId> parse_stratum(std::string_view token) {
  for (const auto& s : kStrata) {
    if (s.token == token) return s.id;
  }
  return std::nullopt;
}

const std::array<GroupId, kNumStrata>& processing_order() {
  static const std::array<GroupId, kNumStrata> order = {G::G168, G::G96, G::G48, G::C9, G::C6, G::S4, G::G16,
                                                         G::S3,   G::C3,  G::D8,  G::D4, G::C2, G::Trivial};
  return order;
}

StratumEnumerator::StratumEnumerator(unsigned p, GroupId s) : p_(p), stratum_(s) {
  if (!is_prime(p) || p <= 7 || p >= 256) throw FamilyError("unsupported prime " + std::to_string(p));
  families_ = build_families(p, s);
  for (const auto& f : families_) {
    offsets_.push_back(total_);
    std::uint64_t n = 1;
    for (const auto& dom : f.domains) n *= dom.size();
    total_ += n;
  }
}

FamilyCandidate StratumEnumerator::build(std::size_t family, const std::array<std::uint8_t, kMaxParams>& params) const {
  const Family& f = families_[family];
  FamilyCandidate c;
  c.stratum = stratum_;
  c.family = static_cast<std::uint8_t>(family);
  c.num_params = static_cast<std::uint8_t>(f.domains.size());
  c.params = params;
  Coeffs m{};
  f.build(c.params.data(), m);
  PrimeField k(p_);
  c.quartic.p = p_;
  for (int i = 0; i < kQuarticTerms; ++i) c.quartic.c[i] = k.from_int(m[i]);
  return c;
}

FamilyCandidate StratumEnumerator::at(std::uint64_t index) const {
  if (index >= total_) throw FamilyError("candidate index out of range");
  const std::size_t fam = static_cast<std::size_t>(
      std::upper_bound(offsets_.begin(), offsets_.end(), index) - offsets_.begin() - 1);
  const Family& f = families_[fam];
  std::uint64_t rest = index - offsets_[fam];
  std::array<std::uint8_t, kMaxParams> params{};
  for (std::size_t j = f.domains.size(); j-- > 0;) {
    const auto& dom = f.domains[j];
    params[j] = dom[rest % dom.size()];
    rest /= dom.size();
  }
  return build(fam, params);
}

FamilyCandidate StratumEnumerator::make(std::size_t family, const std::vector<std::uint8_t>& values) const {
  if (family >= families_.size()) throw FamilyError("no family " + std::to_string(family) + " in this stratum");
  const Family& f = families_[family];
  if (values.size() != f.domains.size()) {
    throw FamilyError("family expects " + std::to_string(f.domains.size()) + " parameters");
  }
  std::array<std::uint8_t, kMaxParams> params{};
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (std::find(f.domains[j].begin(), f.domains[j].end(), values[j]) == f.domains[j].end()) {
      throw FamilyError("parameter " + std::to_string(j) + " outside its domain");
    }
    params[j] = values[j];
  }
  return build(family, params);
}

std::vector<FamilyCandidate> exceptional_curves(unsigned p) {
  if (p != 11) return {};
  FamilyCandidate c;
  c.quartic = TernaryQuartic{11, {7, 3, 10, 10, 10, 6, 0, 7, 1, 4, 9, 5, 8, 9, 9}};
  c.stratum = G::Trivial;
  c.family = static_cast<std::uint8_t>(generic_shapes().size());
  return {c};
}

AutDescriptor aut_generators(const FamilyCandidate& c) {
  AutDescriptor d = generators_for(c);
  if (d.generators.empty()) return d;
  const ExtField& E = *d.field;
  const ExtQuartic lifted = lift(c.quartic, d.field);
  for (const auto& g : d.generators) {
    if (mat3_det(E, g).is_zero() || !proportionality(E, lifted, transform(lifted, g))) {
      throw FamilyError("template-verification-failure: " + std::string(stratum_info(c.stratum).name) +
                        " generator does not fix " + to_text(c.quartic));
    }
  }
  const std::size_t order = group_closure(d.field, d.generators).size();
  if (order != stratum_info(c.stratum).order) {
    throw FamilyError("template-verification-failure: " + std::string(stratum_info(c.stratum).name) +
                      " closure has " + std::to_string(order) + " elements for " + to_text(c.quartic));
  }
  return d;
}

StratumCounts expected_stratum_counts(unsigned p) {
  using u64 = std::uint64_t;
  using i64 = long long;
  const i64 P = p;
  auto br = [](bool cond, i64 v) { return cond ? v : 0; };
  const bool k7 = p % 7 == 1 || p % 7 == 2 || p % 7 == 4;
  const bool one4 = p % 4 == 1;
  const bool one3 = p % 3 == 1;
  StratumCounts t{};
  auto set = [&](GroupId id, i64 geo, i64 arith) {
    t.rows[static_cast<int>(id)] = {id, static_cast<u64>(geo), static_cast<u64>(arith)};
  };
  set(G::G168, 1, 4 + br(k7, 2));
  set(G::G96, 1, 6 + br(one4, 4));
  set(G::G48, 1, 4 + br(p % 12 == 1, 10) + br(p % 12 == 5, 2) + br(p % 12 == 7, 4));
  // gcd(p - 1, 9) Frobenius classes.
  set(G::C9, 1, 1 + br(p % 9 == 1, 8) + br(p % 9 == 4, 2) + br(p % 9 == 7, 2));
  set(G::C6, P - 2, 2 * (1 + br(one3, 2)) * (P - 2));
  const i64 s4 = P - 4 - br(k7, 2);
  set(G::S4, s4, 5 * s4);
  set(G::G16, P - 2, 2 * (2 * (P - 3) + br(one4, P - 2)));
  const i64 s3 = P * P - 3 * P + 4 + br(k7, 2);
  set(G::S3, s3, 3 * s3);
  set(G::C3, P * P - P, (1 + br(one3, 2)) * (P * P - P));
  const i64 d8 = P * P - 4 * P + 6 + br(k7, 2);
  set(G::D8, d8, 4 * d8 - 3 * P + 8);
  set(G::D4, P * P * P - 3 * P * P + 5 * P - 5, 2 * P * P * P - 8 * P * P + 17 * P - 19);
  const i64 c2 = P * P * P * P - 2 * P * P * P + 2 * P * P - 3 * P + 1 - br(k7, 2);
  set(G::C2, c2, 2 * c2);
  const i64 p2 = P * P, p3 = p2 * P, p4 = p3 * P, p6 = p3 * p3;
  const i64 triv = p6 - p4 + p3 - 2 * p2 + 3 * P - 1;
  set(G::Trivial, triv, triv);
  t.total_geometric = static_cast<u64>(p6 + 1);
  const i64 m4 = P % 4;
  const bool k9 = p % 9 == 1 || p % 9 == 4 || p % 9 == 7;
  t.total_arithmetic = static_cast<u64>(p6 + p4 - p3 + 2 * p2 - 4 * P - 1 + 2 * m4 + 2 * br(k9, p2 + P + 2 - m4) +
                                        br(p % 9 == 1, 6) + br(one4, 2 * P + 6) + br(k7, 2));
  return t;
}

}  // namespace qdb
