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

#include "umbral.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <tuple>
#include <unordered_map>

#include "qdb/quartic.hpp"

namespace qdb::detail {
namespace {

// Symbols a1 a2 a3 b1 b2 b3 c1 c2 c3 u1 u2 u3, four bits of exponent each.
constexpr int kSymbols = 12;
using Key = std::uint64_t;
using SymPoly = std::unordered_map<Key, std::int64_t>;

int exponent(Key k, int s) { return static_cast<int>((k >> (4 * s)) & 0xF); }

SymPoly multiply(const SymPoly& a, const SymPoly& b) {
  SymPoly r;
  r.reserve(a.size() * b.size());
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) r[ka + kb] += ca * cb;
  }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

Key mono(std::initializer_list<int> syms) {
  Key k = 0;
  for (int s : syms) k += Key{1} << (4 * s);
  return k;
}

// det of the rows (s, t, u) where s, t are symbol blocks 0..2 and u is block 3.
SymPoly bracket(int s, int t) {
  const int u = 3;
  auto sym = [](int block, int i) { return 3 * block + i; };
  SymPoly r;
  const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const int sign[6] = {1, -1, -1, 1, 1, -1};
  for (int q = 0; q < 6; ++q) {
    r[mono({sym(s, perm[q][0]), sym(t, perm[q][1]), sym(u, perm[q][2])})] += sign[q];
  }
  return r;
}

SymPoly power(const SymPoly& a, int e) {
  SymPoly r{{0, 1}};
  for (int i = 0; i < e; ++i) r = multiply(r, a);
  return r;
}

int block_monomial(Key k, int block) {
  return monomial_index(exponent(k, 3 * block), exponent(k, 3 * block + 1), exponent(k, 3 * block + 2));
}

}  // namespace

const std::vector<QuadTerm>& sigma_terms() {
  static const std::vector<QuadTerm> terms = [] {
    SymPoly s = power(bracket(0, 1), 4);
    std::map<std::tuple<int, int, int>, std::int64_t> acc;
    for (const auto& [k, c] : s) {
      int i = block_monomial(k, 0), j = block_monomial(k, 1), o = block_monomial(k, 3);
      if (i > j) std::swap(i, j);
      acc[{o, i, j}] += c;
    }
    std::vector<QuadTerm> out;
    for (const auto& [key, c] : acc) {
      if (c == 0) continue;
      auto [o, i, j] = key;
      out.push_back({static_cast<std::uint8_t>(o), static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j), c});
    }
    return out;
  }();
  return terms;
}

const std::vector<CubicTerm>& psi_terms() {
  static const std::vector<CubicTerm> terms = [] {
    SymPoly ab = power(bracket(0, 1), 2);
    SymPoly bc = power(bracket(1, 2), 2);
    SymPoly ca = power(bracket(2, 0), 2);
    SymPoly s = multiply(multiply(ab, bc), ca);
    std::map<std::tuple<int, int, int, int>, std::int64_t> acc;
    for (const auto& [k, c] : s) {
      std::array<int, 3> idx = {block_monomial(k, 0), block_monomial(k, 1), block_monomial(k, 2)};
      std::sort(idx.begin(), idx.end());
      acc[{block_monomial(k, 3), idx[0], idx[1], idx[2]}] += c;
    }
    std::vector<CubicTerm> out;
    for (const auto& [key, c] : acc) {
      if (c == 0) continue;
      auto [o, i, j, l] = key;
      out.push_back({static_cast<std::uint8_t>(o), static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                     static_cast<std::uint8_t>(l), c});
    }
    return out;
  }();
  return terms;
}

}  // namespace qdb::detail
