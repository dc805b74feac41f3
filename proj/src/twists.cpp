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

#include <algorithm>
#include <map>
#include <numeric>

namespace qdb {

std::size_t AutGroupElements::index_of(const Mat3& normalized) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), normalized);
  if (it == elements.end() || !(*it == normalized)) throw TwistError("matrix is not in the group");
  return static_cast<std::size_t>(it - elements.begin());
}

AutGroupElements group_closure(const ExtFieldPtr& field, const std::vector<Mat3>& generators, std::size_t limit) {
  const ExtField& E = *field;
  std::vector<Mat3> gens;
  for (const auto& g : generators) {
    if (mat3_det(E, g).is_zero()) throw TwistError("singular generator");
    gens.push_back(mat3_normalize(E, g));
  }
  std::map<Mat3, bool> seen;
  std::vector<Mat3> queue{mat3_normalize(E, mat3_identity(E))};
  seen[queue.front()] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      Mat3 h = mat3_normalize(E, mat3_mul(E, queue[i], g));
      if (seen.emplace(h, true).second) {
        queue.push_back(h);
        if (queue.size() > limit) throw TwistError("group closure exceeds " + std::to_string(limit) + " elements");
      }
    }
  }
  AutGroupElements G{field, {}};
  for (const auto& [m, unused] : seen) G.elements.push_back(m);
  return G;
}

std::vector<FrobeniusClass> frobenius_classes(const AutGroupElements& G, unsigned base_power) {
  const ExtField& E = *G.field;
  const std::size_t n = G.size();
  std::vector<std::size_t> inv_frob(n);
  for (std::size_t i = 0; i < n; ++i) {
    Mat3 f = mat3_normalize(E, mat3_frobenius(E, G.elements[i], base_power));
    inv_frob[i] = G.index_of(mat3_normalize(E, mat3_inv(E, f)));
  }
  const std::size_t id = G.index_of(mat3_normalize(E, mat3_identity(E)));
  std::vector<int> label(n, -1);
  std::vector<FrobeniusClass> classes;
  auto build = [&](std::size_t g) {
    FrobeniusClass c{g, 0, false};
    const int lab = static_cast<int>(classes.size());
    for (std::size_t a = 0; a < n; ++a) {
      Mat3 h = mat3_normalize(E, mat3_mul(E, mat3_mul(E, G.elements[inv_frob[a]], G.elements[g]), G.elements[a]));
      std::size_t hi = G.index_of(h);
      if (label[hi] < 0) {
        label[hi] = lab;
        ++c.size;
        c.representative = std::min(c.representative, hi);
        if (hi == id) c.contains_identity = true;
      }
    }
    classes.push_back(c);
  };
  build(id);
  for (std::size_t g = 0; g < n; ++g) {
    if (label[g] < 0) build(g);
  }
  std::size_t total = 0;
  for (const auto& c : classes) total += c.size;
  if (total != n) throw TwistError("Frobenius classes do not partition the group");
  return classes;
}

namespace {

bool entries_fixed(const ExtField& E, const Mat3& A, unsigned k) {
  for (const auto& x : A.e) {
    if (!(E.frobenius(x, k) == x)) return false;
  }
  return true;
}

}  // namespace

Coboundary hilbert90(const ExtFieldPtr& Eptr, const Mat3& A_in, std::mt19937_64& rng) {
  const ExtField& E = *Eptr;
  const unsigned n = E.degree();
  // Degree of the field generated by the entries.
  unsigned nA = n;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d == 0 && entries_fixed(E, A_in, d)) {
      nA = d;
      break;
    }
  }
  // Order of N_{nA} in PGL3.
  Mat3 N = A_in;
  for (unsigned i = 1; i < nA; ++i) N = mat3_mul(E, mat3_frobenius(E, A_in, i), N);
  unsigned order = 0;
  Mat3 P = N;
  for (unsigned k = 1; k <= 168; ++k) {
    if (mat3_is_scalar(P)) {
      order = k;
      break;
    }
    P = mat3_mul(E, N, P);
  }
  if (order == 0) throw TwistError("Frobenius product never becomes scalar");
  const unsigned M = nA * order;
  const unsigned L = std::lcm(n, M);
  ExtFieldPtr Wptr = make_ext(E.p(), L);
  const ExtField& W = *Wptr;
  Mat3 A;
  if (L == n) {
    A = A_in;
  } else {
    Embedding emb(make_ext(E.p(), n), Wptr);
    A = mat3_embed(emb, A_in);
  }
  // Partial products N_i = A^{phi^{i-1}} ... A, N_0 = I.
  std::vector<Mat3> Ns{mat3_identity(W)};
  for (unsigned i = 1; i <= L; ++i) Ns.push_back(mat3_mul(W, mat3_frobenius(W, A, i - 1), Ns.back()));
  if (!mat3_is_scalar(Ns[L])) throw TwistError("lift-normalization-failure: product is not scalar");
  const ExtElement c = Ns[L].at(0, 0);
  if (!c.is_base()) throw TwistError("lift-normalization-failure: scalar outside the prime field");
  const std::uint8_t target = W.base().inv(c[0]);
  ExtElement mu;
  for (int tries = 0;; ++tries) {
    if (tries > 100000) throw TwistError("lift-normalization-failure: norm equation unsolved");
    mu = W.random_nonzero(rng);
    if (W.norm(mu) == target) break;
  }
  A = mat3_scale(W, A, mu);
  Ns.assign(1, mat3_identity(W));
  for (unsigned i = 1; i < L; ++i) Ns.push_back(mat3_mul(W, mat3_frobenius(W, A, i - 1), Ns.back()));

  Coboundary out{Wptr, {}, A, L, 0};
  for (;;) {
    Mat3 R = mat3_random(W, rng);
    Mat3 B = R;
    for (unsigned i = 1; i < L; ++i) B = mat3_add(W, B, mat3_mul(W, mat3_frobenius(W, R, i), Ns[i]));
    if (!mat3_det(W, B).is_zero()) {
      out.B = B;
      return out;
    }
    if (++out.retries > 1000) throw TwistError("no invertible coboundary after 1000 samples");
  }
}

std::vector<Twist> twists_of(const TernaryQuartic& C, const AutGroupElements& G, std::mt19937_64& rng) {
  std::vector<Twist> out;
  const std::size_t order = G.size();
  for (const auto& cls : frobenius_classes(G)) {
    const unsigned rational = static_cast<unsigned>(order / cls.size);
    if (cls.contains_identity) {
      out.push_back({C, rational});
      continue;
    }
    Coboundary cob = hilbert90(G.field, G.elements[cls.representative], rng);
    const ExtField& W = *cob.field;
    ExtQuartic T = transform(lift(C, cob.field), mat3_inv(W, cob.B));
    out.push_back({descend(T), rational});
  }
  return out;
}

}  // namespace qdb
