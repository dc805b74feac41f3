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
#include <optional>
#include <string>
#include <vector>

#include "qdb/gf.hpp"
#include "qdb/quartic.hpp"

namespace qdb {

inline constexpr int kNumInvariants = 13;
inline constexpr std::array<unsigned, kNumInvariants> kInvariantWeights = {3,  6,  9,  9,  12, 12, 15,
                                                                           15, 18, 18, 21, 21, 27};
inline constexpr std::array<const char*, kNumInvariants> kInvariantNames = {
    "I3", "I6", "I9", "J9", "I12", "J12", "I15", "J15", "I18", "J18", "I21", "J21", "I27"};

// (I3, I6, I9, J9, I12, J12, I15, J15, I18, J18, I21, J21, I27) over F_p.
struct DOInvariants {
  std::array<std::uint8_t, kNumInvariants> v{};
  friend bool operator==(const DOInvariants&, const DOInvariants&) = default;
};

struct CanonicalKey {
  std::array<std::uint8_t, kNumInvariants> v{};
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-prime evaluator. Construction reduces the integer expansions modulo p;
// evaluation is const and thread-safe.
class InvariantEngine {
 public:
  explicit InvariantEngine(unsigned p);

  unsigned p() const { return p_; }
  DOInvariants dixmier_ohno(const TernaryQuartic& F) const;
  std::uint8_t discriminant(const TernaryQuartic& F) const;
  CanonicalKey normalize(const DOInvariants& inv) const;
  // Key of F, or nothing when the discriminant vanishes.
  std::optional<CanonicalKey> key_if_smooth(const TernaryQuartic& F) const;

 private:
  struct Contraction {
    std::uint8_t out, f, g;
    std::uint32_t w;
  };
  struct SigmaTerm {
    std::uint8_t out, i, j;
    std::uint32_t c;
  };
  struct PsiTerm {
    std::uint8_t out, ij, k;
    std::uint32_t c;
  };

  void covariant_block(const std::uint32_t* A, const std::uint8_t* m, std::uint32_t* out12) const;
  std::uint32_t macaulay_resultant(const std::uint8_t* m, bool* minor_vanished) const;
  std::uint8_t discriminant_raw(const std::uint8_t* m) const;
  std::vector<Contraction> make_contraction(int order_f, int order_g) const;

  unsigned p_;
  PrimeField k_;
  Reducer red_;
  std::array<std::uint32_t, 15> inv_multinomial_{};
  std::vector<SigmaTerm> sigma_;
  std::vector<PsiTerm> psi_;
  std::vector<Contraction> c4_6_, c2_4_, c2_6_, c4_4_, c6_6_;
  // Powers c^e for the orbit scan, indexed [c][e].
  std::vector<std::array<std::uint8_t, 28>> pow_;
  std::vector<std::array<std::uint8_t, 9>> fallback_;
};

const InvariantEngine& invariant_engine(unsigned p);

DOInvariants dixmier_ohno(const TernaryQuartic& F);
CanonicalKey normalize(const DOInvariants& inv, unsigned p);
std::uint8_t discriminant(const TernaryQuartic& F);

// "(v1:v2:...:v13)"
std::string to_text(const CanonicalKey& key);
CanonicalKey parse_key(const std::string& text);

}  // namespace qdb
