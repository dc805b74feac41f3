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
#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qdb {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t n);

// Barrett-style reduction for values below 2^32 with a fixed small modulus.
class Reducer {
 public:
  Reducer() = default;
  explicit Reducer(std::uint32_t p) : p_(p), m_(~std::uint64_t{0} / p + 1) {}
  std::uint32_t operator()(std::uint32_t x) const {
    std::uint64_t low = m_ * x;
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * p_) >> 64);
  }
  std::uint32_t modulus() const { return p_; }

 private:
  std::uint32_t p_ = 1;
  std::uint64_t m_ = 0;
};

// F_p for 7 < p < 256. Residues are plain bytes.
class PrimeField {
 public:
  explicit PrimeField(unsigned p);

  unsigned p() const { return p_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const {
    unsigned s = unsigned{a} + b;
    return static_cast<std::uint8_t>(s >= p_ ? s - p_ : s);
  }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>(a >= b ? a - b : a + p_ - b);
  }
  std::uint8_t neg(std::uint8_t a) const { return static_cast<std::uint8_t>(a == 0 ? 0 : p_ - a); }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>(red_(unsigned{a} * b));
  }
  std::uint8_t inv(std::uint8_t a) const;
  std::uint8_t pow(std::uint8_t a, std::uint64_t e) const;
  std::uint8_t from_int(long long v) const;
  bool is_square(std::uint8_t a) const { return square_[a]; }
  std::uint8_t smallest_nonsquare() const;
  const Reducer& reducer() const { return red_; }

 private:
  unsigned p_;
  Reducer red_;
  std::array<std::uint8_t, 256> inv_{};
  std::array<bool, 256> square_{};
};

// Element of F_{p^m}: m coefficients of a polynomial in the field generator,
// constant term first. Ordering is lexicographic on that tuple.
class ExtElement {
 public:
  ExtElement() = default;
  explicit ExtElement(std::vector<std::uint8_t> coeffs) : c_(std::move(coeffs)) {}

  const std::vector<std::uint8_t>& coeffs() const { return c_; }
  std::uint8_t operator[](std::size_t i) const { return c_[i]; }
  std::size_t size() const { return c_.size(); }
  bool is_zero() const;
  // True when the element lies in the prime field.
  bool is_base() const;

  friend bool operator==(const ExtElement&, const ExtElement&) = default;
  friend auto operator<=>(const ExtElement&, const ExtElement&) = default;

 private:
  std::vector<std::uint8_t> c_;
};

class ExtField;
using ExtFieldPtr = std::shared_ptr<const ExtField>;

// Polynomial over an ExtField, lowest degree first.
using ExtPoly = std::vector<ExtElement>;

class ExtField {
 public:
  ExtField(unsigned p, unsigned m, std::vector<std::uint8_t> modulus);

  unsigned p() const { return base_.p(); }
  unsigned degree() const { return m_; }
  const PrimeField& base() const { return base_; }
  // Monic modulus, lowest degree first, length m + 1.
  const std::vector<std::uint8_t>& modulus() const { return modulus_; }
  // Field size p^m when it fits in 64 bits, zero otherwise.
  std::uint64_t order() const { return order_; }

  ExtElement zero() const;
  ExtElement one() const;
  ExtElement from_base(std::uint8_t r) const;
  ExtElement from_int(long long v) const;
  ExtElement generator() const;  // the class of x

  ExtElement add(const ExtElement& a, const ExtElement& b) const;
  ExtElement sub(const ExtElement& a, const ExtElement& b) const;
  ExtElement neg(const ExtElement& a) const;
  ExtElement mul(const ExtElement& a, const ExtElement& b) const;
  ExtElement scale(const ExtElement& a, std::uint8_t r) const;
  ExtElement inv(const ExtElement& a) const;
  ExtElement div(const ExtElement& a, const ExtElement& b) const { return mul(a, inv(b)); }
  ExtElement pow(const ExtElement& a, std::uint64_t e) const;
  ExtElement pow_signed(const ExtElement& a, long long e) const;
  // x^(p^k); k may exceed m.
  ExtElement frobenius(const ExtElement& a, unsigned k = 1) const;
  // Product of the m Frobenius conjugates; lies in F_p.
  std::uint8_t norm(const ExtElement& a) const;

  ExtElement random(std::mt19937_64& rng) const;
  ExtElement random_nonzero(std::mt19937_64& rng) const;

  // Smallest generator of the multiplicative group; requires order() != 0.
  const ExtElement& primitive() const;
  // Distinct roots in this field of a nonzero polynomial, sorted ascending.
  std::vector<ExtElement> roots(const ExtPoly& f) const;

 private:
  PrimeField base_;
  unsigned m_;
  std::vector<std::uint8_t> modulus_;
  std::uint64_t order_ = 0;
  std::vector<std::vector<std::uint8_t>> frob_;  // frob_[j] = x^(j p) mod modulus
  ExtElement primitive_;
  bool has_primitive_ = false;
};

// F_{p^m} with the smallest monic irreducible modulus; memoized per (p, m).
ExtFieldPtr make_ext(unsigned p, unsigned m);

// Embedding of `from` into `into` (degree of `from` divides degree of `into`).
// The generator is sent to the smallest root of the source modulus.
class Embedding {
 public:
  Embedding(ExtFieldPtr from, ExtFieldPtr into);
  ExtElement operator()(const ExtElement& x) const;
  const ExtFieldPtr& source() const { return from_; }
  const ExtFieldPtr& target() const { return into_; }

 private:
  ExtFieldPtr from_;
  ExtFieldPtr into_;
  std::vector<ExtElement> gen_powers_;
};

ExtElement embed(const ExtElement& x, const ExtFieldPtr& from, const ExtFieldPtr& into);

// zeta_n = g^((q-1)/n) for the smallest generator g of E*.
ExtElement root_of_unity(std::uint64_t n, const ExtField& E);
// Smallest d with n | p^d - 1.
unsigned multiplicative_order_degree(unsigned p, std::uint64_t n);

struct RootInField {
  ExtElement root;
  ExtFieldPtr field;
};

// A root of X^n - a, enlarging E by the least factor that makes one exist.
RootInField nth_root(const ExtElement& a, unsigned n, const ExtFieldPtr& E);

// Smallest k such that the squarefree polynomial f over F_p splits in F_{p^k}.
unsigned splitting_degree(const std::vector<std::uint8_t>& f, unsigned p);

struct Mat3 {
  std::array<ExtElement, 9> e;
  const ExtElement& at(int r, int c) const { return e[3 * r + c]; }
  ExtElement& at(int r, int c) { return e[3 * r + c]; }
  friend bool operator==(const Mat3&, const Mat3&) = default;
  friend auto operator<=>(const Mat3&, const Mat3&) = default;
};

Mat3 mat3_identity(const ExtField& E);
Mat3 mat3_diag(const ExtField& E, const ExtElement& a, const ExtElement& b, const ExtElement& c);
Mat3 mat3_from_ints(const ExtField& E, const std::array<long long, 9>& v);
Mat3 mat3_mul(const ExtField& E, const Mat3& a, const Mat3& b);
ExtElement mat3_det(const ExtField& E, const Mat3& a);
Mat3 mat3_inv(const ExtField& E, const Mat3& a);
Mat3 mat3_frobenius(const ExtField& E, const Mat3& a, unsigned k = 1);
Mat3 mat3_scale(const ExtField& E, const Mat3& a, const ExtElement& s);
Mat3 mat3_add(const ExtField& E, const Mat3& a, const Mat3& b);
// Divide by the first nonzero entry (row-major).
Mat3 mat3_normalize(const ExtField& E, const Mat3& a);
bool mat3_is_scalar(const Mat3& a);
Mat3 mat3_embed(const Embedding& emb, const Mat3& a);
Mat3 mat3_random(const ExtField& E, std::mt19937_64& rng);

std::string to_string(const ExtElement& x);

}  // namespace qdb
