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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qdb/gf.hpp"

namespace qdb {

struct Exponent {
  std::uint8_t x, y, z;
};

// Monomials of a given degree, ordered by descending x then descending y.
// For degree 4 this is x^4, x^3y, x^3z, x^2y^2, ..., yz^3, z^4.
std::vector<Exponent> monomials_of_degree(int d);
// Position of (i, j, k) in monomials_of_degree(i + j + k).
int monomial_index(int i, int j, int k);

inline constexpr int kQuarticTerms = 15;
inline constexpr int kCubicTerms = 10;

// A ternary quartic over F_p, coefficients in the fixed monomial order.
struct TernaryQuartic {
  unsigned p = 0;
  std::array<std::uint8_t, kQuarticTerms> c{};

  friend bool operator==(const TernaryQuartic&, const TernaryQuartic&) = default;
};

// A ternary quartic over an extension field.
struct ExtQuartic {
  ExtFieldPtr field;
  std::array<ExtElement, kQuarticTerms> c;
};

struct TernaryCubic {
  std::array<std::uint8_t, kCubicTerms> c{};
};

struct ProjPoint {
  std::array<std::uint8_t, 3> v{};
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

// P^2(F_p) in the order (1:y:z), (0:1:z), (0:0:1).
std::vector<ProjPoint> projective_points(unsigned p);

std::uint8_t evaluate(const TernaryQuartic& F, const ProjPoint& P);
std::uint8_t evaluate(const TernaryCubic& G, unsigned p, const ProjPoint& P);
ExtElement evaluate(const ExtQuartic& F, const ExtElement& x, const ExtElement& y, const ExtElement& z);

ExtQuartic lift(const TernaryQuartic& F, const ExtFieldPtr& E);
// F(B (x, y, z)^t).
ExtQuartic transform(const ExtQuartic& F, const Mat3& B);
TernaryQuartic transform(const TernaryQuartic& F, const Mat3& B);
// Divides by the first nonzero coefficient and checks that the result is F_p-rational.
TernaryQuartic descend(const ExtQuartic& F);
TernaryQuartic scale(const TernaryQuartic& F, std::uint8_t lambda);
// Leading nonzero coefficient scaled to one.
TernaryQuartic monic(const TernaryQuartic& F);

// Number of points over F_{p^k}.
std::uint64_t count_points(const TernaryQuartic& F, unsigned k = 1);
// q + 1 - #C(F_q) with q = p^k.
long long trace(const TernaryQuartic& F, unsigned k = 1);
std::array<TernaryCubic, 3> partials(const TernaryQuartic& F);
bool has_rational_singularity(const TernaryQuartic& F, unsigned k = 1);

// "p=<p>;c1,...,c15"
std::string to_text(const TernaryQuartic& F);
TernaryQuartic parse_quartic(const std::string& text);

}  // namespace qdb
