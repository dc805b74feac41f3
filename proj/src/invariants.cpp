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

#include "qdb/invariants.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "umbral.hpp"

namespace qdb {
namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct ProductTable {
  // idx[s][t] = index of monomial s * t in the product degree.
  int da, db;
  std::vector<std::vector<std::uint8_t>> idx;
};

ProductTable product_table(int da, int db) {
  ProductTable t{da, db, {}};
  auto ma = monomials_of_degree(da), mb = monomials_of_degree(db);
  t.idx.assign(ma.size(), std::vector<std::uint8_t>(mb.size()));
  for (std::size_t s = 0; s < ma.size(); ++s) {
    for (std::size_t r = 0; r < mb.size(); ++r) {
      t.idx[s][r] = static_cast<std::uint8_t>(monomial_index(ma[s].x + mb[r].x, ma[s].y + mb[r].y, ma[s].z + mb[r].z));
    }
  }
  return t;
}

// Layout of the degree-7 Macaulay matrix for three ternary cubics.
struct MacaulayLayout {
  // For each row: which partial and the column of each cubic monomial.
  std::array<std::uint8_t, 36> partial{};
  std::array<std::array<std::uint8_t, 10>, 36> col{};
  std::array<std::uint8_t, 9> minor{};
  // Partial coefficient source: for variable v and cubic monomial t, the quartic
  // coefficient index and the integer factor.
  std::array<std::array<std::uint8_t, 10>, 3> src{};
  std::array<std::array<std::uint8_t, 10>, 3> mult{};
};

const MacaulayLayout& macaulay_layout() {
  static const MacaulayLayout L = [] {
    MacaulayLayout l;
    auto m7 = monomials_of_degree(7);
    auto m3 = monomials_of_degree(3);
    int nm = 0;
    for (int r = 0; r < 36; ++r) {
      int e[3] = {m7[r].x, m7[r].y, m7[r].z};
      int v = e[0] >= 3 ? 0 : (e[1] >= 3 ? 1 : 2);
      l.partial[r] = static_cast<std::uint8_t>(v);
      int q[3] = {e[0], e[1], e[2]};
      q[v] -= 3;
      for (int t = 0; t < 10; ++t) {
        l.col[r][t] = static_cast<std::uint8_t>(monomial_index(q[0] + m3[t].x, q[1] + m3[t].y, q[2] + m3[t].z));
      }
      int big = (e[0] >= 3) + (e[1] >= 3) + (e[2] >= 3);
      if (big >= 2) l.minor[nm++] = static_cast<std::uint8_t>(r);
    }
    for (int v = 0; v < 3; ++v) {
      for (int t = 0; t < 10; ++t) {
        int e[3] = {m3[t].x, m3[t].y, m3[t].z};
        ++e[v];
        l.src[v][t] = static_cast<std::uint8_t>(monomial_index(e[0], e[1], e[2]));
        l.mult[v][t] = static_cast<std::uint8_t>(e[v]);
      }
    }
    return l;
  }();
  return L;
}

// Determinant modulo p of an n x n matrix (row stride S) with entries < p.
// Rows are updated without reduction; only the pivot row is reduced.
template <int N, int S>
u32 det_mod(u32* a, const PrimeField& k) {
  const u32 p = k.p();
  const Reducer& red = k.reducer();
  u32 det = 1;
  for (int c = 0; c < N; ++c) {
    int piv = -1;
    for (int r = c; r < N; ++r) {
      u32 v = a[r * S + c] % p;
      a[r * S + c] = v;
      if (v != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = c; j < N; ++j) std::swap(a[piv * S + j], a[c * S + j]);
      det = p - det;
      if (det == p) det = 0;
    }
    u32* prow = a + c * S;
    for (int j = c + 1; j < N; ++j) prow[j] = p - red(prow[j]);
    det = red(det * prow[c]);
    const u32 inv = k.inv(static_cast<std::uint8_t>(prow[c]));
    for (int r = c + 1; r < N; ++r) {
      u32* row = a + r * S;
      u32 f = red(red(row[c]) * inv);
      if (f == 0) continue;
      for (int j = c + 1; j < N; ++j) row[j] += f * prow[j];
    }
  }
  return det;
}

constexpr std::array<std::array<int, 3>, 6> kPermutations = {
    {{0, 1, 2}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}}};

// Coefficients of F(x_perm) for a permutation of the variables.
std::array<std::uint8_t, 15> permute_vars(const std::uint8_t* m, const std::array<int, 3>& perm) {
  static const std::vector<Exponent> mons = monomials_of_degree(4);
  std::array<std::uint8_t, 15> out{};
  for (int t = 0; t < 15; ++t) {
    int e[3] = {mons[t].x, mons[t].y, mons[t].z};
    int f[3];
    for (int v = 0; v < 3; ++v) f[perm[v]] = e[v];
    out[monomial_index(f[0], f[1], f[2])] = m[t];
  }
  return out;
}

// F(B x) over F_p for an integer matrix B.
std::array<std::uint8_t, 15> transform_fp(const std::uint8_t* m, const std::array<std::uint8_t, 9>& B, unsigned p) {
  static const std::vector<Exponent> mons = monomials_of_degree(4);
  // Powers of the three linear forms, dense by degree.
  std::array<std::array<std::vector<u64>, 5>, 3> pw;
  for (int r = 0; r < 3; ++r) {
    pw[r][0] = {1};
    pw[r][1] = {B[3 * r], B[3 * r + 1], B[3 * r + 2]};
    for (int e = 2; e < 5; ++e) {
      auto ma = monomials_of_degree(e - 1);
      std::vector<u64> next((e + 1) * (e + 2) / 2, 0);
      for (std::size_t s = 0; s < ma.size(); ++s) {
        for (int v = 0; v < 3; ++v) {
          int x = ma[s].x + (v == 0), y = ma[s].y + (v == 1), z = ma[s].z + (v == 2);
          next[monomial_index(x, y, z)] = (next[monomial_index(x, y, z)] + pw[r][e - 1][s] * pw[r][1][v]) % p;
        }
      }
      pw[r][e] = std::move(next);
    }
  }
  std::array<u64, 15> acc{};
  for (int t = 0; t < 15; ++t) {
    if (m[t] == 0) continue;
    auto mx = monomials_of_degree(mons[t].x), my = monomials_of_degree(mons[t].y), mz = monomials_of_degree(mons[t].z);
    for (std::size_t a = 0; a < mx.size(); ++a) {
      for (std::size_t b = 0; b < my.size(); ++b) {
        u64 ab = pw[0][mons[t].x][a] * pw[1][mons[t].y][b] % p;
        if (ab == 0) continue;
        for (std::size_t c = 0; c < mz.size(); ++c) {
          u64 v = ab * pw[2][mons[t].z][c] % p;
          int idx = monomial_index(mx[a].x + my[b].x + mz[c].x, mx[a].y + my[b].y + mz[c].y,
                                   mx[a].z + my[b].z + mz[c].z);
          acc[idx] = (acc[idx] + v * m[t]) % p;
        }
      }
    }
  }
  std::array<std::uint8_t, 15> out{};
  for (int t = 0; t < 15; ++t) out[t] = static_cast<std::uint8_t>(acc[t]);
  return out;
}

u32 det3(const u32 s[9], const Reducer& red, u32 p) {
  u64 pp = u64{p} * p;
  auto m = [&](int i, int j) { return u64{s[3 * i + j]}; };
  u64 a = m(0, 0) * ((m(1, 1) * m(2, 2) + pp - m(1, 2) * m(2, 1)) % p);
  u64 b = m(0, 1) * ((m(1, 0) * m(2, 2) + pp - m(1, 2) * m(2, 0)) % p);
  u64 c = m(0, 2) * ((m(1, 0) * m(2, 1) + pp - m(1, 1) * m(2, 0)) % p);
  (void)red;
  return static_cast<u32>((a + pp - b + c) % p);
}

void matmul3(const u32 a[9], const u32 b[9], u32 out[9], u32 p) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out[3 * i + j] = static_cast<u32>(
          (u64{a[3 * i]} * b[j] + u64{a[3 * i + 1]} * b[3 + j] + u64{a[3 * i + 2]} * b[6 + j]) % p);
    }
  }
}

u32 trace_prod(const u32 a[9], const u32 b[9], u32 p) {
  u64 s = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s += u64{a[3 * i + j]} * b[3 * j + i];
  }
  return static_cast<u32>(s % p);
}

void sym_matrix(const u32 q[6], u32 out[9], u32 p) {
  out[0] = 2 * q[0] % p;
  out[1] = out[3] = q[1];
  out[2] = out[6] = q[2];
  out[4] = 2 * q[3] % p;
  out[5] = out[7] = q[4];
  out[8] = 2 * q[5] % p;
}

// Rank test on all 45 products (degree-4 monomial) * (partial derivative) in
// degree 7: the partials have a common zero iff the rank is below 36.
bool partials_have_common_zero(const std::uint8_t* m, const PrimeField& k) {
  static const std::vector<Exponent> m4 = monomials_of_degree(4);
  static const std::vector<Exponent> m3 = monomials_of_degree(3);
  const unsigned p = k.p();
  std::vector<std::array<std::uint8_t, 36>> rows;
  for (int v = 0; v < 3; ++v) {
    std::array<std::uint8_t, 10> d{};
    for (int t = 0; t < 15; ++t) {
      int e[3] = {m4[t].x, m4[t].y, m4[t].z};
      if (e[v] == 0) continue;
      const int mult = e[v];
      --e[v];
      const int idx = monomial_index(e[0], e[1], e[2]);
      d[idx] = k.add(d[idx], k.mul(m[t], static_cast<std::uint8_t>(mult % p)));
    }
    for (const auto& s : m4) {
      std::array<std::uint8_t, 36> row{};
      for (int t = 0; t < 10; ++t) {
        row[monomial_index(s.x + m3[t].x, s.y + m3[t].y, s.z + m3[t].z)] = d[t];
      }
      rows.push_back(row);
    }
  }
  std::size_t rank = 0;
  for (int col = 0; col < 36 && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::uint8_t inv = k.inv(rows[rank][col]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const std::uint8_t f = k.mul(rows[r][col], inv);
      for (int c = col; c < 36; ++c) rows[r][c] = k.sub(rows[r][c], k.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  return rank < 36;
}

}  // namespace

InvariantEngine::InvariantEngine(unsigned p) : p_(p), k_(p), red_(p) {
  static const std::vector<Exponent> m4 = monomials_of_degree(4);
  for (int t = 0; t < 15; ++t) {
    auto mult = factorial(4) / (factorial(m4[t].x) * factorial(m4[t].y) * factorial(m4[t].z));
    inv_multinomial_[t] = k_.inv(k_.from_int(mult));
  }
  for (const auto& t : detail::sigma_terms()) {
    u32 c = k_.from_int(t.coef);
    if (c) sigma_.push_back({t.out, t.i, t.j, c});
  }
  // Pair index for i <= j over 15 symbols.
  auto pair_index = [](int i, int j) { return i * 15 - i * (i - 1) / 2 + (j - i); };
  for (const auto& t : detail::psi_terms()) {
    u32 c = k_.from_int(t.coef);
    if (c) psi_.push_back({t.out, static_cast<std::uint8_t>(pair_index(t.i, t.j)), t.k, c});
  }
  std::sort(psi_.begin(), psi_.end(), [](const PsiTerm& a, const PsiTerm& b) {
    return std::tie(a.out, a.ij, a.k) < std::tie(b.out, b.ij, b.k);
  });
  c4_6_ = make_contraction(4, 6);
  c2_4_ = make_contraction(2, 4);
  c2_6_ = make_contraction(2, 6);
  c4_4_ = make_contraction(4, 4);
  c6_6_ = make_contraction(6, 6);
  pow_.resize(p);
  for (unsigned c = 1; c < p; ++c) {
    pow_[c][0] = 1;
    for (int e = 1; e < 28; ++e) pow_[c][e] = k_.mul(pow_[c][e - 1], static_cast<std::uint8_t>(c));
  }
  // Unimodular fallbacks for the rare case where every variable order makes the
  // Macaulay minor vanish.
  std::mt19937_64 rng(0x1227ULL);
  for (int n = 0; n < 64; ++n) {
    std::array<std::uint8_t, 9> B{};
    for (;;) {
      for (auto& v : B) v = static_cast<std::uint8_t>(rng() % p);
      u32 s[9];
      for (int i = 0; i < 9; ++i) s[i] = B[i];
      u32 d = det3(s, red_, p);
      if (d == 0) continue;
      // Scale the first row so that det = 1.
      u32 di = k_.inv(static_cast<std::uint8_t>(d));
      for (int j = 0; j < 3; ++j) B[j] = static_cast<std::uint8_t>(u32{B[j]} * di % p);
      break;
    }
    fallback_.push_back(B);
  }
}

std::vector<InvariantEngine::Contraction> InvariantEngine::make_contraction(int order_f, int order_g) const {
  std::vector<Contraction> out;
  auto mf = monomials_of_degree(order_f);
  auto mo = monomials_of_degree(order_g - order_f);
  for (std::size_t o = 0; o < mo.size(); ++o) {
    for (std::size_t a = 0; a < mf.size(); ++a) {
      int x = mf[a].x + mo[o].x, y = mf[a].y + mo[o].y, z = mf[a].z + mo[o].z;
      std::int64_t w = factorial(x) / factorial(mo[o].x) * (factorial(y) / factorial(mo[o].y)) *
                       (factorial(z) / factorial(mo[o].z));
      out.push_back({static_cast<std::uint8_t>(o), static_cast<std::uint8_t>(a),
                     static_cast<std::uint8_t>(monomial_index(x, y, z)), k_.from_int(w)});
    }
  }
  return out;
}

std::uint32_t InvariantEngine::macaulay_resultant(const std::uint8_t* m, bool* minor_vanished) const {
  const MacaulayLayout& L = macaulay_layout();
  const u32 p = p_;
  u32 d[3][10];
  for (int v = 0; v < 3; ++v) {
    for (int t = 0; t < 10; ++t) d[v][t] = red_(u32{m[L.src[v][t]]} * L.mult[v][t]);
  }
  alignas(64) u32 small[9 * 9];
  std::fill(std::begin(small), std::end(small), 0u);
  // Column position of each minor monomial.
  int pos[36];
  std::fill(std::begin(pos), std::end(pos), -1);
  for (int s = 0; s < 9; ++s) pos[L.minor[s]] = s;
  for (int s = 0; s < 9; ++s) {
    const int r = L.minor[s];
    for (int t = 0; t < 10; ++t) {
      int c = pos[L.col[r][t]];
      if (c >= 0) small[s * 9 + c] = d[L.partial[r]][t];
    }
  }
  u32 minor = det_mod<9, 9>(small, k_);
  if (minor == 0) {
    *minor_vanished = true;
    return 0;
  }
  *minor_vanished = false;
  alignas(64) u32 big[36 * 36];
  std::fill(std::begin(big), std::end(big), 0u);
  for (int r = 0; r < 36; ++r) {
    for (int t = 0; t < 10; ++t) big[r * 36 + L.col[r][t]] = d[L.partial[r]][t];
  }
  u32 full = det_mod<36, 36>(big, k_);
  return red_(full * k_.inv(static_cast<std::uint8_t>(minor))) % p;
}

std::uint8_t InvariantEngine::discriminant_raw(const std::uint8_t* m) const {
  bool vanished = false;
  u32 r = macaulay_resultant(m, &vanished);
  if (!vanished) return static_cast<std::uint8_t>(r);
  for (std::size_t i = 1; i < kPermutations.size(); ++i) {
    auto mp = permute_vars(m, kPermutations[i]);
    r = macaulay_resultant(mp.data(), &vanished);
    if (!vanished) return static_cast<std::uint8_t>(r);
  }
  for (const auto& B : fallback_) {
    auto mt = transform_fp(m, B, p_);
    r = macaulay_resultant(mt.data(), &vanished);
    if (!vanished) return static_cast<std::uint8_t>(r);
  }
  if (partials_have_common_zero(m, k_)) return 0;
  throw InvariantError("Macaulay minor vanished for every fallback substitution");
}

std::uint8_t InvariantEngine::discriminant(const TernaryQuartic& F) const {
  if (F.p != p_) throw InvariantError("quartic over a different prime");
  return discriminant_raw(F.c.data());
}

void InvariantEngine::covariant_block(const std::uint32_t* A, const std::uint8_t* m, std::uint32_t* out) const {
  const u32 p = p_;
  const Reducer& red = red_;
  static const ProductTable t22 = product_table(2, 2);
  static const ProductTable t42 = product_table(4, 2);
  static const std::vector<Exponent> m4 = monomials_of_degree(4);
  static const std::vector<Exponent> m2 = monomials_of_degree(2);

  // sigma (order 4) and psi (order 6)
  u64 sig64[15] = {};
  for (const auto& t : sigma_) sig64[t.out] += u64{t.c} * red(A[t.i] * A[t.j]);
  u32 sig[15];
  for (int i = 0; i < 15; ++i) sig[i] = static_cast<u32>(sig64[i] % p);

  u32 pairs[120];
  {
    int n = 0;
    for (int i = 0; i < 15; ++i) {
      for (int j = i; j < 15; ++j) pairs[n++] = red(A[i] * A[j]);
    }
  }
  u64 psi64[28] = {};
  for (const auto& t : psi_) psi64[t.out] += u64{t.c * pairs[t.ij]} * A[t.k];
  u32 psi[28];
  for (int i = 0; i < 28; ++i) psi[i] = static_cast<u32>(psi64[i] % p);

  // Hessian determinant (order 6).
  u32 h[6][6];  // second partials xx, xy, xz, yy, yz, zz as quadrics
  for (auto& row : h) std::fill(row, row + 6, 0u);
  const int pairs_v[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (int t = 0; t < 15; ++t) {
    if (m[t] == 0) continue;
    for (int s = 0; s < 6; ++s) {
      int e[3] = {m4[t].x, m4[t].y, m4[t].z};
      int a = pairs_v[s][0], b = pairs_v[s][1];
      u32 f = e[a];
      if (f == 0) continue;
      --e[a];
      if (e[b] == 0) continue;
      f *= e[b];
      --e[b];
      int idx = monomial_index(e[0], e[1], e[2]);
      h[s][idx] = red(h[s][idx] + f * m[t]);
    }
  }
  auto mul22 = [&](const u32* a, const u32* b, u32* r) {
    u64 acc[15] = {};
    for (int i = 0; i < 6; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < 6; ++j) acc[t22.idx[i][j]] += u64{a[i]} * b[j];
    }
    for (int i = 0; i < 15; ++i) r[i] = static_cast<u32>(acc[i] % p);
  };
  auto mul42 = [&](const u32* a, const u32* b, u64* acc) {
    for (int i = 0; i < 15; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < 6; ++j) acc[t42.idx[i][j]] += u64{a[i]} * b[j];
    }
  };
  enum { XX, XY, XZ, YY, YZ, ZZ };
  u32 q1[15], q2[15], c0[15], c1[15], c2[15];
  mul22(h[YY], h[ZZ], q1);
  mul22(h[YZ], h[YZ], q2);
  for (int i = 0; i < 15; ++i) c0[i] = q1[i] >= q2[i] ? q1[i] - q2[i] : q1[i] + p - q2[i];
  mul22(h[XY], h[ZZ], q1);
  mul22(h[YZ], h[XZ], q2);
  for (int i = 0; i < 15; ++i) c1[i] = q2[i] >= q1[i] ? q2[i] - q1[i] : q2[i] + p - q1[i];
  mul22(h[XY], h[YZ], q1);
  mul22(h[YY], h[XZ], q2);
  for (int i = 0; i < 15; ++i) c2[i] = q1[i] >= q2[i] ? q1[i] - q2[i] : q1[i] + p - q2[i];
  u64 he64[28] = {};
  mul42(c0, h[XX], he64);
  mul42(c1, h[XY], he64);
  mul42(c2, h[XZ], he64);
  u32 he[28];
  for (int i = 0; i < 28; ++i) he[i] = static_cast<u32>(he64[i] % p);

  auto contract = [&](const std::vector<Contraction>& tab, const u32* f, const u32* g, u32* r, int n_out) {
    u64 acc[28] = {};
    for (const auto& c : tab) acc[c.out] += u64{red(f[c.f] * c.w)} * g[c.g];
    for (int i = 0; i < n_out; ++i) r[i] = static_cast<u32>(acc[i] % p);
  };
  u32 fm[15];
  for (int i = 0; i < 15; ++i) fm[i] = m[i];

  u32 I3, I6, rho[6], tau[6], xi[6], eta[6], chi[15], nu[6];
  contract(c4_4_, sig, fm, &I3, 1);
  contract(c6_6_, psi, he, &I6, 1);
  contract(c4_6_, fm, psi, rho, 6);
  contract(c2_4_, rho, fm, tau, 6);
  contract(c4_6_, sig, he, xi, 6);
  contract(c2_4_, xi, sig, eta, 6);
  contract(c2_6_, rho, he, chi, 15);
  contract(c2_4_, eta, chi, nu, 6);

  u32 Rrho[9], Ttau[9], Txi[9], Reta[9], Tnu[9];
  sym_matrix(rho, Rrho, p);
  sym_matrix(tau, Ttau, p);
  sym_matrix(xi, Txi, p);
  sym_matrix(eta, Reta, p);
  sym_matrix(nu, Tnu, p);
  u32 TR[9], XR[9];
  matmul3(Ttau, Rrho, TR, p);
  matmul3(Txi, Rrho, XR, p);

  out[0] = I3;
  out[1] = I6;
  out[2] = trace_prod(Ttau, Rrho, p);
  out[3] = trace_prod(Txi, Rrho, p);
  out[4] = det3(Rrho, red, p);
  out[5] = trace_prod(Ttau, Reta, p);
  out[6] = det3(Ttau, red, p);
  out[7] = det3(Txi, red, p);
  out[8] = trace_prod(TR, TR, p);
  out[9] = trace_prod(XR, XR, p);
  out[10] = det3(Reta, red, p);
  out[11] = trace_prod(Tnu, Reta, p);
}

DOInvariants InvariantEngine::dixmier_ohno(const TernaryQuartic& F) const {
  if (F.p != p_) throw InvariantError("quartic over a different prime");
  u32 A[15];
  for (int i = 0; i < 15; ++i) A[i] = red_(u32{F.c[i]} * inv_multinomial_[i]);
  u32 vals[12];
  covariant_block(A, F.c.data(), vals);
  DOInvariants out;
  for (int i = 0; i < 12; ++i) out.v[i] = static_cast<std::uint8_t>(vals[i]);
  out.v[12] = discriminant_raw(F.c.data());
  return out;
}

CanonicalKey InvariantEngine::normalize(const DOInvariants& inv) const {
  int h = 0;
  for (int i = 0; i < kNumInvariants; ++i) {
    if (inv.v[i] != 0) h = std::gcd(h, static_cast<int>(kInvariantWeights[i] / 3));
  }
  if (h == 0) throw InvariantError("normalize: all invariants vanish");
  std::array<std::uint8_t, kNumInvariants> e{};
  for (int i = 0; i < kNumInvariants; ++i) e[i] = static_cast<std::uint8_t>(kInvariantWeights[i] / 3 / h);
  CanonicalKey best;
  best.v = inv.v;
  for (unsigned c = 2; c < p_; ++c) {
    const auto& pw = pow_[c];
    // Compare lazily against the current best.
    std::array<std::uint8_t, kNumInvariants> cand;
    int cmp = 0;
    for (int i = 0; i < kNumInvariants; ++i) {
      cand[i] = static_cast<std::uint8_t>(red_(u32{pw[e[i]]} * inv.v[i]));
      if (cmp == 0) {
        if (cand[i] < best.v[i]) {
          cmp = -1;
        } else if (cand[i] > best.v[i]) {
          cmp = 1;
          break;
        }
      }
    }
    if (cmp < 0) best.v = cand;
  }
  return best;
}

std::optional<CanonicalKey> InvariantEngine::key_if_smooth(const TernaryQuartic& F) const {
  if (F.p != p_) throw InvariantError("quartic over a different prime");
  std::uint8_t disc = discriminant_raw(F.c.data());
  if (disc == 0) return std::nullopt;
  u32 A[15];
  for (int i = 0; i < 15; ++i) A[i] = red_(u32{F.c[i]} * inv_multinomial_[i]);
  u32 vals[12];
  covariant_block(A, F.c.data(), vals);
  DOInvariants inv;
  for (int i = 0; i < 12; ++i) inv.v[i] = static_cast<std::uint8_t>(vals[i]);
  inv.v[12] = disc;
  return normalize(inv);
}

const InvariantEngine& invariant_engine(unsigned p) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<InvariantEngine>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[p];
  if (!slot) slot = std::make_unique<InvariantEngine>(p);
  return *slot;
}

DOInvariants dixmier_ohno(const TernaryQuartic& F) { return invariant_engine(F.p).dixmier_ohno(F); }

CanonicalKey normalize(const DOInvariants& inv, unsigned p) { return invariant_engine(p).normalize(inv); }

std::uint8_t discriminant(const TernaryQuartic& F) { return invariant_engine(F.p).discriminant(F); }

std::string to_text(const CanonicalKey& key) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < kNumInvariants; ++i) os << (i ? ":" : "") << unsigned{key.v[i]};
  os << ')';
  return os.str();
}

CanonicalKey parse_key(const std::string& text) {
  auto fail = [&] { return std::invalid_argument("malformed invariant key: " + text); };
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') throw fail();
  std::stringstream ss(text.substr(1, text.size() - 2));
  std::string tok;
  CanonicalKey key;
  int i = 0;
  while (std::getline(ss, tok, ':')) {
    if (i >= kNumInvariants) throw fail();
    try {
      unsigned long v = std::stoul(tok);
      if (v > 255) throw fail();
      key.v[i++] = static_cast<std::uint8_t>(v);
    } catch (const std::invalid_argument&) {
      throw fail();
    }
  }
  if (i != kNumInvariants) throw fail();
  return key;
}

}  // namespace qdb
