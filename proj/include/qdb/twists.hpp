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

#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "qdb/gf.hpp"
#include "qdb/quartic.hpp"

namespace qdb {

class TwistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite subgroup of PGL3(F_{p^n}); every matrix has first nonzero entry 1.
// Elements are sorted, so the order is canonical.
struct AutGroupElements {
  ExtFieldPtr field;
  std::vector<Mat3> elements;
  std::size_t size() const { return elements.size(); }
  std::size_t index_of(const Mat3& normalized) const;  // throws when absent
};

AutGroupElements group_closure(const ExtFieldPtr& field, const std::vector<Mat3>& generators,
                               std::size_t limit = 168);

struct FrobeniusClass {
  std::size_t representative;  // index into AutGroupElements::elements
  std::size_t size;
  bool contains_identity;
};

// Orbits of g -> (a^phi)^-1 g a with phi the p^base_power Frobenius.
// The identity class comes first, then by representative index.
std::vector<FrobeniusClass> frobenius_classes(const AutGroupElements& G, unsigned base_power = 1);

struct Coboundary {
  ExtFieldPtr field;  // F_{p^m}
  Mat3 B;             // B^phi = B A^-1
  Mat3 A;             // the rescaled lift, embedded in `field`
  unsigned m = 1;
  unsigned retries = 0;
};

// B with B^phi = B A^-1 for the class of A (an element of a group over E).
Coboundary hilbert90(const ExtFieldPtr& E, const Mat3& A, std::mt19937_64& rng);

struct Twist {
  TernaryQuartic quartic;
  unsigned rational_aut_order;
};

// One model per Frobenius class; the identity class yields C itself.
std::vector<Twist> twists_of(const TernaryQuartic& C, const AutGroupElements& G, std::mt19937_64& rng);

}  // namespace qdb
