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

#include "qdb/gf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace qdb {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod64(u64 a, u64 b, u64 n) { return static_cast<u64>(static_cast<u128>(a) * b % n); }

u64 powmod64(u64 a, u64 e, u64 n) {
  u64 r = 1 % n;
  a %= n;
  while (e) {
    if (e & 1) r = mulmod64(r, a, n);
    a = mulmod64(a, a, n);
    e >>= 1;
  }
  return r;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(n);
  for (;;) {
    u64 c = rng() % (n - 1) + 1;
    u64 y = rng() % n;
    u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return (mulmod64(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  for (u64 d : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- polynomials over an ExtField ----

void trim(ExtPoly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

int deg(const ExtPoly& f) { return static_cast<int>(f.size()) - 1; }

ExtPoly poly_sub(const ExtField& E, const ExtPoly& a, const ExtPoly& b) {
  ExtPoly r(std::max(a.size(), b.size()), E.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = E.sub(r[i], b[i]);
  trim(r);
  return r;
}

ExtPoly poly_mul(const ExtField& E, const ExtPoly& a, const ExtPoly& b) {
  if (a.empty() || b.empty()) return {};
  ExtPoly r(a.size() + b.size() - 1, E.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = E.add(r[i + j], E.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

// Quotient and remainder of a by nonzero b.
std::pair<ExtPoly, ExtPoly> poly_divmod(const ExtField& E, ExtPoly a, const ExtPoly& b) {
  trim(a);
  const int db = deg(b);
  if (deg(a) < db) return {{}, a};
  ExtPoly q(a.size() - b.size() + 1, E.zero());
  const ExtElement lead_inv = E.inv(b.back());
  for (int i = deg(a); i >= db; --i) {
    if (a[i].is_zero()) continue;
    ExtElement t = E.mul(a[i], lead_inv);
    q[i - db] = t;
    for (int j = 0; j <= db; ++j) a[i - db + j] = E.sub(a[i - db + j], E.mul(t, b[j]));
  }
  a.resize(db);
  trim(a);
  trim(q);
  return {q, a};
}

ExtPoly poly_mod(const ExtField& E, const ExtPoly& a, const ExtPoly& b) {
  return poly_divmod(E, a, b).second;
}

ExtPoly poly_monic(const ExtField& E, ExtPoly f) {
  trim(f);
  if (f.empty()) return f;
  ExtElement li = E.inv(f.back());
  for (auto& c : f) c = E.mul(c, li);
  return f;
}

ExtPoly poly_gcd(const ExtField& E, ExtPoly a, ExtPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ExtPoly r = poly_mod(E, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(E, a);
}

ExtPoly poly_powmod(const ExtField& E, ExtPoly base, u64 e, const ExtPoly& mod) {
  ExtPoly r{E.one()};
  base = poly_mod(E, base, mod);
  while (e) {
    if (e & 1) r = poly_mod(E, poly_mul(E, r, base), mod);
    e >>= 1;
    if (e) base = poly_mod(E, poly_mul(E, base, base), mod);
  }
  return poly_mod(E, r, mod);
}

ExtPoly poly_derivative(const ExtField& E, const ExtPoly& f) {
  ExtPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(E.mul(f[i], E.from_int(static_cast<long long>(i))));
  trim(d);
  return d;
}

// h^(q) mod f where q = p^(times).
ExtPoly poly_frob_power(const ExtField& E, ExtPoly h, unsigned times, const ExtPoly& f) {
  for (unsigned i = 0; i < times; ++i) h = poly_powmod(E, h, E.p(), f);
  return h;
}

void split_linear(const ExtField& E, const ExtPoly& g, std::mt19937_64& rng, std::vector<ExtElement>& out) {
  if (deg(g) <= 0) return;
  if (deg(g) == 1) {
    out.push_back(E.neg(E.div(g[0], g[1])));
    return;
  }
  const unsigned half = (E.p() - 1) / 2;
  for (;;) {
    ExtPoly lin{E.random(rng), E.one()};
    ExtPoly w = poly_powmod(E, lin, half, g);
    ExtPoly acc = w, cur = w;
    for (unsigned i = 1; i < E.degree(); ++i) {
      cur = poly_powmod(E, cur, E.p(), g);
      acc = poly_mod(E, poly_mul(E, acc, cur), g);
    }
    ExtPoly s = poly_gcd(E, g, poly_sub(E, acc, ExtPoly{E.one()}));
    if (deg(s) > 0 && deg(s) < deg(g)) {
      split_linear(E, s, rng, out);
      split_linear(E, poly_divmod(E, g, s).first, rng, out);
      return;
    }
  }
}

std::vector<std::uint8_t> smallest_irreducible(unsigned p, unsigned m) {
  if (m == 1) return {0, 1};
  ExtFieldPtr Fp = make_ext(p, 1);
  const ExtField& E = *Fp;
  std::vector<u64> prime_divs = prime_factors(m);
  // Tuples (c0, ..., c_{m-1}) in lexicographic order, constant term first.
  std::vector<std::uint8_t> c(m, 0);
  c[0] = 1;
  const ExtPoly X{E.zero(), E.one()};
  for (;;) {
    ExtPoly f;
    for (unsigned i = 0; i < m; ++i) f.push_back(E.from_base(c[i]));
    f.push_back(E.one());
    bool irreducible = true;
    ExtPoly h = poly_frob_power(E, X, m, f);
    if (poly_sub(E, h, X).size() != 0) irreducible = false;
    for (u64 r : prime_divs) {
      if (!irreducible) break;
      ExtPoly hr = poly_frob_power(E, X, m / static_cast<unsigned>(r), f);
      if (deg(poly_gcd(E, f, poly_sub(E, hr, X))) != 0) irreducible = false;
    }
    if (irreducible) {
      c.push_back(1);
      return c;
    }
    int i = static_cast<int>(m) - 1;
    while (i >= 0 && c[i] == p - 1) c[i--] = 0;
    if (i < 0) throw FieldError("no irreducible polynomial found");
    ++c[i];
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ---- PrimeField ----

PrimeField::PrimeField(unsigned p) : p_(p), red_(p) {
  if (p <= 7 || p >= 256 || !is_prime(p)) {
    throw FieldError("unsupported characteristic " + std::to_string(p) + " (need a prime 7 < p < 256)");
  }
  for (unsigned a = 1; a < p; ++a) {
    inv_[a] = static_cast<std::uint8_t>(powmod64(a, p - 2, p));
    square_[(a * a) % p] = true;
  }
  square_[0] = true;
}

std::uint8_t PrimeField::inv(std::uint8_t a) const {
  if (a % p_ == 0) throw FieldError("division by zero");
  return inv_[a];
}

std::uint8_t PrimeField::pow(std::uint8_t a, std::uint64_t e) const {
  return static_cast<std::uint8_t>(powmod64(a, e, p_));
}

std::uint8_t PrimeField::from_int(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint8_t>(r);
}

std::uint8_t PrimeField::smallest_nonsquare() const {
  for (unsigned a = 2; a < p_; ++a) {
    if (!square_[a]) return static_cast<std::uint8_t>(a);
  }
  throw FieldError("no non-square");
}

// ---- ExtElement ----

bool ExtElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint8_t v) { return v == 0; });
}

bool ExtElement::is_base() const {
  return std::all_of(c_.begin() + (c_.empty() ? 0 : 1), c_.end(), [](std::uint8_t v) { return v == 0; });
}

// ---- ExtField ----

ExtField::ExtField(unsigned p, unsigned m, std::vector<std::uint8_t> modulus)
    : base_(p), m_(m), modulus_(std::move(modulus)) {
  if (m == 0 || modulus_.size() != m + 1 || modulus_.back() != 1) throw FieldError("bad modulus");
  long double bits = m * std::log2(static_cast<long double>(p));
  if (bits < 63.5L) {
    order_ = 1;
    for (unsigned i = 0; i < m; ++i) order_ *= p;
  }
  frob_.resize(m);
  ExtElement xp = pow(generator(), p);
  ExtElement cur = one();
  for (unsigned j = 0; j < m; ++j) {
    frob_[j] = cur.coeffs();
    cur = mul(cur, xp);
  }
  if (order_ != 0) {
    std::vector<u64> divs = prime_factors(order_ - 1);
    for (u64 k = 1; k < order_; ++k) {
      std::vector<std::uint8_t> c(m);
      u64 t = k;
      for (int i = static_cast<int>(m) - 1; i >= 0; --i) {
        c[i] = static_cast<std::uint8_t>(t % p);
        t /= p;
      }
      ExtElement g(std::move(c));
      bool ok = true;
      for (u64 r : divs) {
        ExtElement h = pow(g, (order_ - 1) / r);
        if (h == one()) {
          ok = false;
          break;
        }
      }
      if (ok) {
        primitive_ = g;
        has_primitive_ = true;
        break;
      }
    }
  }
}

ExtElement ExtField::zero() const { return ExtElement(std::vector<std::uint8_t>(m_, 0)); }

ExtElement ExtField::one() const { return from_base(1); }

ExtElement ExtField::from_base(std::uint8_t r) const {
  std::vector<std::uint8_t> c(m_, 0);
  c[0] = static_cast<std::uint8_t>(r % p());
  return ExtElement(std::move(c));
}

ExtElement ExtField::from_int(long long v) const { return from_base(base_.from_int(v)); }

ExtElement ExtField::generator() const {
  if (m_ == 1) return from_base(base_.neg(modulus_[0]));
  std::vector<std::uint8_t> c(m_, 0);
  c[1] = 1;
  return ExtElement(std::move(c));
}

ExtElement ExtField::add(const ExtElement& a, const ExtElement& b) const {
  std::vector<std::uint8_t> c(m_);
  for (unsigned i = 0; i < m_; ++i) c[i] = base_.add(a[i], b[i]);
  return ExtElement(std::move(c));
}

ExtElement ExtField::sub(const ExtElement& a, const ExtElement& b) const {
  std::vector<std::uint8_t> c(m_);
  for (unsigned i = 0; i < m_; ++i) c[i] = base_.sub(a[i], b[i]);
  return ExtElement(std::move(c));
}

ExtElement ExtField::neg(const ExtElement& a) const {
  std::vector<std::uint8_t> c(m_);
  for (unsigned i = 0; i < m_; ++i) c[i] = base_.neg(a[i]);
  return ExtElement(std::move(c));
}

ExtElement ExtField::scale(const ExtElement& a, std::uint8_t r) const {
  std::vector<std::uint8_t> c(m_);
  for (unsigned i = 0; i < m_; ++i) c[i] = base_.mul(a[i], r);
  return ExtElement(std::move(c));
}

ExtElement ExtField::mul(const ExtElement& a, const ExtElement& b) const {
  const unsigned p = this->p();
  if (m_ == 1) return ExtElement({base_.mul(a[0], b[0])});
  std::vector<u64> t(2 * m_ - 1, 0);
  for (unsigned i = 0; i < m_; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < m_; ++j) t[i + j] += static_cast<u64>(a[i]) * b[j];
  }
  for (unsigned i = 2 * m_ - 2; i >= m_; --i) {
    u64 top = t[i] % p;
    if (top == 0) continue;
    for (unsigned j = 0; j < m_; ++j) t[i - m_ + j] += top * (p - modulus_[j]);
  }
  std::vector<std::uint8_t> c(m_);
  for (unsigned i = 0; i < m_; ++i) c[i] = static_cast<std::uint8_t>(t[i] % p);
  return ExtElement(std::move(c));
}

ExtElement ExtField::inv(const ExtElement& a) const {
  if (a.is_zero()) throw FieldError("division by zero");
  if (m_ == 1) return from_base(base_.inv(a[0]));
  // Extended Euclid over F_p[x]: track s with s*a = r mod modulus.
  ExtFieldPtr Fp = make_ext(p(), 1);
  const ExtField& B = *Fp;
  auto lift = [&](const std::vector<std::uint8_t>& v) {
    ExtPoly f;
    for (auto c : v) f.push_back(B.from_base(c));
    trim(f);
    return f;
  };
  ExtPoly r0 = lift(modulus_), r1 = lift(a.coeffs());
  ExtPoly s0{}, s1{B.one()};
  while (deg(r1) > 0) {
    auto [q, r] = poly_divmod(B, r0, r1);
    ExtPoly s = poly_sub(B, s0, poly_mul(B, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  std::uint8_t cinv = base_.inv(r1[0][0]);
  std::vector<std::uint8_t> c(m_, 0);
  for (std::size_t i = 0; i < s1.size(); ++i) c[i] = base_.mul(s1[i][0], cinv);
  return ExtElement(std::move(c));
}

ExtElement ExtField::pow(const ExtElement& a, std::uint64_t e) const {
  ExtElement r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

ExtElement ExtField::pow_signed(const ExtElement& a, long long e) const {
  if (e >= 0) return pow(a, static_cast<u64>(e));
  return pow(inv(a), static_cast<u64>(-e));
}

ExtElement ExtField::frobenius(const ExtElement& a, unsigned k) const {
  ExtElement cur = a;
  for (unsigned s = 0; s < k % m_; ++s) {
    std::vector<u64> acc(m_, 0);
    for (unsigned j = 0; j < m_; ++j) {
      if (cur[j] == 0) continue;
      for (unsigned i = 0; i < m_; ++i) acc[i] += static_cast<u64>(cur[j]) * frob_[j][i];
    }
    std::vector<std::uint8_t> c(m_);
    for (unsigned i = 0; i < m_; ++i) c[i] = static_cast<std::uint8_t>(acc[i] % p());
    cur = ExtElement(std::move(c));
  }
  return cur;
}

std::uint8_t ExtField::norm(const ExtElement& a) const {
  ExtElement r = a, cur = a;
  for (unsigned i = 1; i < m_; ++i) {
    cur = frobenius(cur);
    r = mul(r, cur);
  }
  if (!r.is_base()) throw FieldError("norm left the prime field");
  return r[0];
}

ExtElement ExtField::random(std::mt19937_64& rng) const {
  std::vector<std::uint8_t> c(m_);
  for (auto& v : c) v = static_cast<std::uint8_t>(rng() % p());
  return ExtElement(std::move(c));
}

ExtElement ExtField::random_nonzero(std::mt19937_64& rng) const {
  for (;;) {
    ExtElement x = random(rng);
    if (!x.is_zero()) return x;
  }
}

const ExtElement& ExtField::primitive() const {
  if (!has_primitive_) throw FieldError("field too large for a primitive element");
  return primitive_;
}

std::vector<ExtElement> ExtField::roots(const ExtPoly& f_in) const {
  ExtPoly f = poly_monic(*this, f_in);
  if (f.empty()) throw FieldError("roots of the zero polynomial");
  std::vector<ExtElement> out;
  if (deg(f) == 0) return out;
  if (f[0].is_zero()) {
    out.push_back(zero());
    while (!f.empty() && f[0].is_zero()) f.erase(f.begin());
  }
  if (deg(f) > 0) {
    const ExtPoly X{zero(), one()};
    ExtPoly h = poly_frob_power(*this, X, m_, f);
    ExtPoly g = poly_gcd(*this, f, poly_sub(*this, h, X));
    std::mt19937_64 rng(0x5eedULL + m_);
    split_linear(*this, g, rng, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- construction caches ----

ExtFieldPtr make_ext(unsigned p, unsigned m) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, ExtFieldPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, m});
    if (it != cache.end()) return it->second;
  }
  if (m == 0) throw FieldError("extension degree must be positive");
  ExtFieldPtr field;
  if (m == 1) {
    field = std::make_shared<const ExtField>(p, 1, std::vector<std::uint8_t>{0, 1});
  } else {
    PrimeField check(p);
    field = std::make_shared<const ExtField>(p, m, smallest_irreducible(p, m));
  }
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(std::make_pair(p, m), field);
  return it->second;
}

Embedding::Embedding(ExtFieldPtr from, ExtFieldPtr into) : from_(std::move(from)), into_(std::move(into)) {
  const ExtField& A = *from_;
  const ExtField& B = *into_;
  if (A.p() != B.p() || B.degree() % A.degree() != 0) throw FieldError("no embedding between these fields");
  ExtElement image;
  if (A.degree() == 1) {
    image = B.zero();
  } else {
    ExtPoly f;
    for (auto c : A.modulus()) f.push_back(B.from_base(c));
    std::vector<ExtElement> r = B.roots(f);
    if (r.empty()) throw FieldError("embedding: source modulus has no root");
    image = r.front();
  }
  ExtElement cur = B.one();
  for (unsigned j = 0; j < A.degree(); ++j) {
    gen_powers_.push_back(cur);
    cur = B.mul(cur, image);
  }
}

ExtElement Embedding::operator()(const ExtElement& x) const {
  const ExtField& B = *into_;
  ExtElement r = B.zero();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0) r = B.add(r, B.scale(gen_powers_[j], x[j]));
  }
  return r;
}

namespace {
const Embedding& cached_embedding(const ExtFieldPtr& from, const ExtFieldPtr& into) {
  static std::mutex mu;
  static std::map<std::tuple<unsigned, unsigned, unsigned>, std::unique_ptr<Embedding>> cache;
  auto key = std::make_tuple(from->p(), from->degree(), into->degree());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto emb = std::make_unique<Embedding>(make_ext(from->p(), from->degree()), make_ext(into->p(), into->degree()));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(emb));
  return *it->second;
}
}  // namespace

ExtElement embed(const ExtElement& x, const ExtFieldPtr& from, const ExtFieldPtr& into) {
  if (from->degree() == into->degree()) return x;
  return cached_embedding(from, into)(x);
}

ExtElement root_of_unity(std::uint64_t n, const ExtField& E) {
  if (n == 0 || E.order() == 0 || (E.order() - 1) % n != 0) {
    throw FieldError("order " + std::to_string(n) + " does not divide the multiplicative group order");
  }
  return E.pow(E.primitive(), (E.order() - 1) / n);
}

unsigned multiplicative_order_degree(unsigned p, std::uint64_t n) {
  if (n == 0 || n % p == 0) throw FieldError("order must be prime to p");
  u64 acc = p % n;
  for (unsigned d = 1; d < 4096; ++d) {
    if (acc == 1 % n) return d;
    acc = mulmod64(acc, p, n);
  }
  throw FieldError("multiplicative order too large");
}

RootInField nth_root(const ExtElement& a, unsigned n, const ExtFieldPtr& E) {
  if (a.is_zero()) throw FieldError("nth_root of zero");
  for (unsigned k = 1; k <= 4 * n + 4; ++k) {
    ExtFieldPtr F = k == 1 ? E : make_ext(E->p(), E->degree() * k);
    ExtElement b = embed(a, E, F);
    ExtPoly f(n + 1, F->zero());
    f[0] = F->neg(b);
    f[n] = F->one();
    std::vector<ExtElement> r = F->roots(f);
    if (!r.empty()) return {r.front(), F};
  }
  throw FieldError("nth_root: no root found");
}

unsigned splitting_degree(const std::vector<std::uint8_t>& f_in, unsigned p) {
  ExtFieldPtr Fp = make_ext(p, 1);
  const ExtField& B = *Fp;
  ExtPoly f;
  for (auto c : f_in) f.push_back(B.from_base(c));
  trim(f);
  if (deg(f) <= 1) return 1;
  ExtPoly g = poly_gcd(B, f, poly_derivative(B, f));
  if (deg(g) > 0) f = poly_divmod(B, f, g).first;
  f = poly_monic(B, f);
  const ExtPoly X{B.zero(), B.one()};
  ExtPoly h = X;
  for (unsigned k = 1; k <= 64; ++k) {
    h = poly_frob_power(B, h, 1, f);
    if (poly_sub(B, h, poly_mod(B, X, f)).empty()) return k;
  }
  throw FieldError("splitting degree too large");
}

// ---- Mat3 ----

Mat3 mat3_identity(const ExtField& E) { return mat3_diag(E, E.one(), E.one(), E.one()); }

Mat3 mat3_diag(const ExtField& E, const ExtElement& a, const ExtElement& b, const ExtElement& c) {
  Mat3 m;
  for (auto& x : m.e) x = E.zero();
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  m.at(2, 2) = c;
  return m;
}

Mat3 mat3_from_ints(const ExtField& E, const std::array<long long, 9>& v) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m.e[i] = E.from_int(v[i]);
  return m;
}

Mat3 mat3_mul(const ExtField& E, const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ExtElement s = E.mul(a.at(i, 0), b.at(0, j));
      s = E.add(s, E.mul(a.at(i, 1), b.at(1, j)));
      s = E.add(s, E.mul(a.at(i, 2), b.at(2, j)));
      r.at(i, j) = s;
    }
  }
  return r;
}

ExtElement mat3_det(const ExtField& E, const Mat3& a) {
  auto m = [&](int r, int c) -> const ExtElement& { return a.at(r, c); };
  ExtElement t0 = E.sub(E.mul(m(1, 1), m(2, 2)), E.mul(m(1, 2), m(2, 1)));
  ExtElement t1 = E.sub(E.mul(m(1, 0), m(2, 2)), E.mul(m(1, 2), m(2, 0)));
  ExtElement t2 = E.sub(E.mul(m(1, 0), m(2, 1)), E.mul(m(1, 1), m(2, 0)));
  return E.add(E.sub(E.mul(m(0, 0), t0), E.mul(m(0, 1), t1)), E.mul(m(0, 2), t2));
}

Mat3 mat3_inv(const ExtField& E, const Mat3& a) {
  ExtElement d = mat3_det(E, a);
  if (d.is_zero()) throw FieldError("singular matrix");
  ExtElement di = E.inv(d);
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      ExtElement cof = E.sub(E.mul(a.at(r0, c0), a.at(r1, c1)), E.mul(a.at(r0, c1), a.at(r1, c0)));
      r.at(i, j) = E.mul(cof, di);
    }
  }
  return r;
}

Mat3 mat3_frobenius(const ExtField& E, const Mat3& a, unsigned k) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.e[i] = E.frobenius(a.e[i], k);
  return r;
}

Mat3 mat3_scale(const ExtField& E, const Mat3& a, const ExtElement& s) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.e[i] = E.mul(a.e[i], s);
  return r;
}

Mat3 mat3_add(const ExtField& E, const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.e[i] = E.add(a.e[i], b.e[i]);
  return r;
}

Mat3 mat3_normalize(const ExtField& E, const Mat3& a) {
  for (int i = 0; i < 9; ++i) {
    if (!a.e[i].is_zero()) return mat3_scale(E, a, E.inv(a.e[i]));
  }
  throw FieldError("zero matrix");
}

bool mat3_is_scalar(const Mat3& a) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j && !a.at(i, j).is_zero()) return false;
    }
  }
  return a.at(0, 0) == a.at(1, 1) && a.at(1, 1) == a.at(2, 2) && !a.at(0, 0).is_zero();
}

Mat3 mat3_embed(const Embedding& emb, const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.e[i] = emb(a.e[i]);
  return r;
}

Mat3 mat3_random(const ExtField& E, std::mt19937_64& rng) {
  Mat3 r;
  for (auto& x : r.e) x = E.random(rng);
  return r;
}

std::string to_string(const ExtElement& x) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << unsigned{x[i]};
  os << ']';
  return os.str();
}

}  // namespace qdb
