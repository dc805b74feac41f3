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

#include "qdb/quartic.hpp"

#include <sstream>
#include <stdexcept>

namespace qdb {

std::vector<Exponent> monomials_of_degree(int d) {
  std::vector<Exponent> out;
  for (int i = d; i >= 0; --i) {
    for (int j = d - i; j >= 0; --j) {
      out.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j), static_cast<std::uint8_t>(d - i - j)});
    }
  }
  return out;
}

int monomial_index(int i, int j, int k) {
  const int d = i + j + k;
  return (d - i) * (d - i + 1) / 2 + (d - i - j);
}

namespace {

const std::vector<Exponent>& quartic_monomials() {
  static const std::vector<Exponent> m = monomials_of_degree(4);
  return m;
}

// Dense homogeneous polynomial over an ExtField.
struct HPoly {
  int degree;
  std::vector<ExtElement> c;
};

HPoly hmul(const ExtField& E, const HPoly& a, const HPoly& b) {
  const auto ma = monomials_of_degree(a.degree);
  const auto mb = monomials_of_degree(b.degree);
  HPoly r{a.degree + b.degree, std::vector<ExtElement>((r.degree + 1) * (r.degree + 2) / 2, E.zero())};
  for (std::size_t s = 0; s < ma.size(); ++s) {
    if (a.c[s].is_zero()) continue;
    for (std::size_t t = 0; t < mb.size(); ++t) {
      if (b.c[t].is_zero()) continue;
      int idx = monomial_index(ma[s].x + mb[t].x, ma[s].y + mb[t].y, ma[s].z + mb[t].z);
      r.c[idx] = E.add(r.c[idx], E.mul(a.c[s], b.c[t]));
    }
  }
  return r;
}

void require_field(const TernaryQuartic& F) {
  PrimeField check(F.p);
  for (auto v : F.c) {
    if (v >= F.p) throw std::invalid_argument("coefficient out of range");
  }
}

// Multiplicative tables for F_{p^k}: elements encoded by base-p digits.
struct LogTables {
  std::uint64_t q;
  std::vector<std::int32_t> log;   // code -> discrete log, -1 for zero
  std::vector<std::int32_t> zech;  // n -> log(1 + g^n), -1 when zero
};

LogTables build_log_tables(unsigned p, unsigned k) {
  ExtFieldPtr E = make_ext(p, k);
  LogTables t;
  t.q = E->order();
  if (t.q == 0 || t.q > (1u << 24)) throw std::invalid_argument("field too large for point counting");
  const std::uint64_t n = t.q - 1;
  auto code = [&](const ExtElement& x) {
    std::uint64_t c = 0;
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) c = c * p + x[i];
    return c;
  };
  t.log.assign(t.q, -1);
  std::vector<std::uint32_t> exp(n);
  ExtElement cur = E->one();
  for (std::uint64_t i = 0; i < n; ++i) {
    exp[i] = static_cast<std::uint32_t>(code(cur));
    t.log[exp[i]] = static_cast<std::int32_t>(i);
    cur = E->mul(cur, E->primitive());
  }
  t.zech.assign(n, -1);
  for (std::uint64_t i = 0; i < n; ++i) {
    // 1 + g^i: add one to the constant digit.
    std::uint64_t c = exp[i];
    std::uint64_t d0 = c % p;
    std::uint64_t c1 = c - d0 + (d0 + 1) % p;
    t.zech[i] = t.log[c1];
  }
  return t;
}

}  // namespace

std::vector<ProjPoint> projective_points(unsigned p) {
  std::vector<ProjPoint> pts;
  pts.reserve(p * p + p + 1);
  for (unsigned y = 0; y < p; ++y) {
    for (unsigned z = 0; z < p; ++z) pts.push_back({{1, static_cast<std::uint8_t>(y), static_cast<std::uint8_t>(z)}});
  }
  for (unsigned z = 0; z < p; ++z) pts.push_back({{0, 1, static_cast<std::uint8_t>(z)}});
  pts.push_back({{0, 0, 1}});
  return pts;
}

std::uint8_t evaluate(const TernaryQuartic& F, const ProjPoint& P) {
  const unsigned p = F.p;
  std::array<std::array<std::uint32_t, 5>, 3> pw;
  for (int v = 0; v < 3; ++v) {
    pw[v][0] = 1;
    for (int e = 1; e < 5; ++e) pw[v][e] = pw[v][e - 1] * P.v[v] % p;
  }
  std::uint32_t acc = 0;
  const auto& mons = quartic_monomials();
  for (int t = 0; t < kQuarticTerms; ++t) {
    acc += F.c[t] * (pw[0][mons[t].x] * pw[1][mons[t].y] % p * pw[2][mons[t].z] % p);
  }
  return static_cast<std::uint8_t>(acc % p);
}

std::uint8_t evaluate(const TernaryCubic& G, unsigned p, const ProjPoint& P) {
  static const std::vector<Exponent> mons = monomials_of_degree(3);
  std::uint32_t acc = 0;
  for (int t = 0; t < kCubicTerms; ++t) {
    std::uint32_t m = 1;
    for (int e = 0; e < mons[t].x; ++e) m = m * P.v[0] % p;
    for (int e = 0; e < mons[t].y; ++e) m = m * P.v[1] % p;
    for (int e = 0; e < mons[t].z; ++e) m = m * P.v[2] % p;
    acc += G.c[t] * m;
  }
  return static_cast<std::uint8_t>(acc % p);
}

ExtElement evaluate(const ExtQuartic& F, const ExtElement& x, const ExtElement& y, const ExtElement& z) {
  const ExtField& E = *F.field;
  std::array<std::array<ExtElement, 5>, 3> pw;
  const ExtElement* v[3] = {&x, &y, &z};
  for (int i = 0; i < 3; ++i) {
    pw[i][0] = E.one();
    for (int e = 1; e < 5; ++e) pw[i][e] = E.mul(pw[i][e - 1], *v[i]);
  }
  ExtElement acc = E.zero();
  const auto& mons = quartic_monomials();
  for (int t = 0; t < kQuarticTerms; ++t) {
    if (F.c[t].is_zero()) continue;
    acc = E.add(acc, E.mul(F.c[t], E.mul(pw[0][mons[t].x], E.mul(pw[1][mons[t].y], pw[2][mons[t].z]))));
  }
  return acc;
}

ExtQuartic lift(const TernaryQuartic& F, const ExtFieldPtr& E) {
  ExtQuartic G{E, {}};
  for (int t = 0; t < kQuarticTerms; ++t) G.c[t] = E->from_base(F.c[t]);
  return G;
}

ExtQuartic transform(const ExtQuartic& F, const Mat3& B) {
  const ExtField& E = *F.field;
  if (mat3_det(E, B).is_zero()) throw FieldError("singular matrix");
  std::array<std::array<HPoly, 5>, 3> pw;
  for (int r = 0; r < 3; ++r) {
    pw[r][0] = HPoly{0, {E.one()}};
    pw[r][1] = HPoly{1, {B.at(r, 0), B.at(r, 1), B.at(r, 2)}};
    for (int e = 2; e < 5; ++e) pw[r][e] = hmul(E, pw[r][e - 1], pw[r][1]);
  }
  ExtQuartic G{F.field, {}};
  for (auto& c : G.c) c = E.zero();
  const auto& mons = quartic_monomials();
  for (int t = 0; t < kQuarticTerms; ++t) {
    if (F.c[t].is_zero()) continue;
    HPoly prod = hmul(E, hmul(E, pw[0][mons[t].x], pw[1][mons[t].y]), pw[2][mons[t].z]);
    for (int s = 0; s < kQuarticTerms; ++s) G.c[s] = E.add(G.c[s], E.mul(F.c[t], prod.c[s]));
  }
  return G;
}

TernaryQuartic transform(const TernaryQuartic& F, const Mat3& B) {
  ExtFieldPtr E = make_ext(F.p, 1);
  if (B.e[0].size() != 1) throw std::invalid_argument("matrix is not over the prime field");
  ExtQuartic G = transform(lift(F, E), B);
  TernaryQuartic out{F.p, {}};
  for (int t = 0; t < kQuarticTerms; ++t) out.c[t] = G.c[t][0];
  return out;
}

TernaryQuartic descend(const ExtQuartic& F) {
  const ExtField& E = *F.field;
  int lead = -1;
  for (int t = 0; t < kQuarticTerms; ++t) {
    if (!F.c[t].is_zero()) {
      lead = t;
      break;
    }
  }
  if (lead < 0) throw std::invalid_argument("zero quartic");
  ExtElement li = E.inv(F.c[lead]);
  TernaryQuartic out{E.p(), {}};
  for (int t = 0; t < kQuarticTerms; ++t) {
    ExtElement v = E.mul(F.c[t], li);
    if (!v.is_base()) throw FieldError("coefficients are not rational");
    out.c[t] = v[0];
  }
  return out;
}

TernaryQuartic scale(const TernaryQuartic& F, std::uint8_t lambda) {
  TernaryQuartic out = F;
  for (auto& v : out.c) v = static_cast<std::uint8_t>(unsigned{v} * lambda % F.p);
  return out;
}

TernaryQuartic monic(const TernaryQuartic& F) {
  PrimeField k(F.p);
  for (auto v : F.c) {
    if (v != 0) return scale(F, k.inv(v));
  }
  throw std::invalid_argument("zero quartic");
}

std::uint64_t count_points(const TernaryQuartic& F, unsigned k) {
  require_field(F);
  const unsigned p = F.p;
  const auto& mons = quartic_monomials();
  if (k == 1) {
    std::uint64_t n = 0;
    for (const auto& P : projective_points(p)) n += evaluate(F, P) == 0;
    return n;
  }
  const LogTables t = build_log_tables(p, k);
  const std::int64_t ord = static_cast<std::int64_t>(t.q - 1);
  std::array<std::int32_t, kQuarticTerms> lc;
  for (int s = 0; s < kQuarticTerms; ++s) lc[s] = t.log[F.c[s]];
  // Sum of terms given as logs; returns true when the sum vanishes.
  auto vanishes = [&](std::int64_t lx, std::int64_t ly, std::int64_t lz) {
    std::int64_t acc = -1;
    for (int s = 0; s < kQuarticTerms; ++s) {
      if (lc[s] < 0) continue;
      if ((lx < 0 && mons[s].x) || (ly < 0 && mons[s].y) || (lz < 0 && mons[s].z)) continue;
      std::int64_t term = lc[s];
      if (mons[s].x) term += mons[s].x * lx;
      if (mons[s].y) term += mons[s].y * ly;
      if (mons[s].z) term += mons[s].z * lz;
      term %= ord;
      if (acc < 0) {
        acc = term;
      } else {
        std::int64_t diff = ((term - acc) % ord + ord) % ord;
        std::int32_t z = t.zech[diff];
        acc = z < 0 ? -1 : (acc + z) % ord;
      }
    }
    return acc < 0;
  };
  std::uint64_t n = 0;
  for (std::uint64_t y = 0; y < t.q; ++y) {
    for (std::uint64_t z = 0; z < t.q; ++z) n += vanishes(0, t.log[y], t.log[z]);
  }
  for (std::uint64_t z = 0; z < t.q; ++z) n += vanishes(-1, 0, t.log[z]);
  n += vanishes(-1, -1, 0);
  return n;
}

long long trace(const TernaryQuartic& F, unsigned k) {
  long long q = 1;
  for (unsigned i = 0; i < k; ++i) q *= F.p;
  return q + 1 - static_cast<long long>(count_points(F, k));
}

std::array<TernaryCubic, 3> partials(const TernaryQuartic& F) {
  std::array<TernaryCubic, 3> d{};
  const auto& mons = quartic_monomials();
  for (int t = 0; t < kQuarticTerms; ++t) {
    const int e[3] = {mons[t].x, mons[t].y, mons[t].z};
    for (int v = 0; v < 3; ++v) {
      if (e[v] == 0) continue;
      int f[3] = {e[0], e[1], e[2]};
      --f[v];
      int idx = monomial_index(f[0], f[1], f[2]);
      d[v].c[idx] = static_cast<std::uint8_t>((d[v].c[idx] + unsigned{F.c[t]} * e[v]) % F.p);
    }
  }
  return d;
}

bool has_rational_singularity(const TernaryQuartic& F, unsigned k) {
  require_field(F);
  if (k == 1) {
    auto d = partials(F);
    for (const auto& P : projective_points(F.p)) {
      if (evaluate(d[0], F.p, P) == 0 && evaluate(d[1], F.p, P) == 0 && evaluate(d[2], F.p, P) == 0 &&
          evaluate(F, P) == 0) {
        return true;
      }
    }
    return false;
  }
  ExtFieldPtr E = make_ext(F.p, k);
  ExtQuartic G = lift(F, E);
  auto d = partials(F);
  static const std::vector<Exponent> cm = monomials_of_degree(3);
  auto eval_cubic = [&](const TernaryCubic& c, const ExtElement& x, const ExtElement& y, const ExtElement& z) {
    ExtElement acc = E->zero();
    for (int t = 0; t < kCubicTerms; ++t) {
      if (c.c[t] == 0) continue;
      ExtElement m = E->from_base(c.c[t]);
      m = E->mul(m, E->pow(x, cm[t].x));
      m = E->mul(m, E->pow(y, cm[t].y));
      m = E->mul(m, E->pow(z, cm[t].z));
      acc = E->add(acc, m);
    }
    return acc;
  };
  const std::uint64_t q = E->order();
  std::vector<ExtElement> elems;
  for (std::uint64_t i = 0; i < q; ++i) {
    std::vector<std::uint8_t> c(k);
    std::uint64_t t = i;
    for (unsigned j = 0; j < k; ++j) {
      c[j] = static_cast<std::uint8_t>(t % F.p);
      t /= F.p;
    }
    elems.emplace_back(std::move(c));
  }
  auto singular_at = [&](const ExtElement& x, const ExtElement& y, const ExtElement& z) {
    return evaluate(G, x, y, z).is_zero() && eval_cubic(d[0], x, y, z).is_zero() &&
           eval_cubic(d[1], x, y, z).is_zero() && eval_cubic(d[2], x, y, z).is_zero();
  };
  for (const auto& y : elems) {
    for (const auto& z : elems) {
      if (singular_at(E->one(), y, z)) return true;
    }
  }
  for (const auto& z : elems) {
    if (singular_at(E->zero(), E->one(), z)) return true;
  }
  return singular_at(E->zero(), E->zero(), E->one());
}

std::string to_text(const TernaryQuartic& F) {
  std::ostringstream os;
  os << "p=" << F.p << ';';
  for (int t = 0; t < kQuarticTerms; ++t) os << (t ? "," : "") << unsigned{F.c[t]};
  return os.str();
}

TernaryQuartic parse_quartic(const std::string& text) {
  auto fail = [&] { return std::invalid_argument("malformed quartic text: " + text); };
  if (text.rfind("p=", 0) != 0) throw fail();
  auto semi = text.find(';');
  if (semi == std::string::npos) throw fail();
  TernaryQuartic F;
  try {
    F.p = static_cast<unsigned>(std::stoul(text.substr(2, semi - 2)));
  } catch (const std::exception&) {
    throw fail();
  }
  PrimeField k(F.p);
  std::stringstream ss(text.substr(semi + 1));
  std::string tok;
  int t = 0;
  while (std::getline(ss, tok, ',')) {
    if (t >= kQuarticTerms) throw fail();
    long long v;
    try {
      v = std::stoll(tok);
    } catch (const std::exception&) {
      throw fail();
    }
    F.c[t++] = k.from_int(v);
  }
  if (t != kQuarticTerms) throw fail();
  return F;
}

}  // namespace qdb
