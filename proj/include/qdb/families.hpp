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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qdb/gf.hpp"
#include "qdb/quartic.hpp"

namespace qdb {

// Numbered in CLI token order.
enum class GroupId : std::uint8_t { Trivial, C2, D4, C3, D8, S3, C6, G16, S4, C9, G48, G96, G168 };
inline constexpr int kNumStrata = 13;

struct Stratum {
  GroupId id;
  std::string_view token;
  std::string_view name;
  unsigned dim;
  unsigned order;
  unsigned processing_rank;
};

class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const Stratum& stratum_info(GroupId id);
std::optional<GroupId> parse_stratum(std::string_view token);
// G168, G96, G48, C9, C6, S4, G16, S3, C3, D8, D4, C2, {1}.
const std::array<GroupId, kNumStrata>& processing_order();

inline constexpr int kMaxParams = 7;

struct FamilyCandidate {
  TernaryQuartic quartic;
  GroupId stratum = GroupId::Trivial;
  std::uint8_t family = 0;  // position in the stratum's family list
  std::uint8_t num_params = 0;
  std::array<std::uint8_t, kMaxParams> params{};
};

struct AutDescriptor {
  GroupId id = GroupId::Trivial;
  ExtFieldPtr field;
  std::vector<Mat3> generators;
  unsigned n() const { return field ? field->degree() : 1; }
};

// Random-access view of every parameter specialization of a stratum's
// families, in family order and lexicographic parameter order.
class StratumEnumerator {
 public:
  StratumEnumerator(unsigned p, GroupId s);

  std::uint64_t size() const { return total_; }
  FamilyCandidate at(std::uint64_t index) const;
  GroupId stratum() const { return stratum_; }
  std::size_t family_count() const { return families_.size(); }
  std::size_t arity(std::size_t family) const { return families_.at(family).domains.size(); }
  // Candidate for explicit parameter values; throws when a value is outside
  // the family's domain.
  FamilyCandidate make(std::size_t family, const std::vector<std::uint8_t>& params) const;

  struct Family {
    std::vector<std::vector<std::uint8_t>> domains;
    std::function<void(const std::uint8_t* params, std::array<long long, kQuarticTerms>& out)> build;
  };

 private:
  unsigned p_;
  GroupId stratum_;
  std::vector<Family> families_;
  std::vector<std::uint64_t> offsets_;
  std::uint64_t total_ = 0;

  FamilyCandidate build(std::size_t family, const std::array<std::uint8_t, kMaxParams>& params) const;
};

// Pointless quartics with trivial automorphism group that the generic
// families miss (only p = 11).
std::vector<FamilyCandidate> exceptional_curves(unsigned p);

// Matrix generators of the automorphism group of the candidate's model,
// verified to fix the curve and to generate a group of the right order.
AutDescriptor aut_generators(const FamilyCandidate& c);

struct StratumCountRow {
  GroupId id;
  std::uint64_t geometric;
  std::uint64_t arithmetic;
};

struct StratumCounts {
  std::array<StratumCountRow, kNumStrata> rows;  // indexed by GroupId
  std::uint64_t total_geometric;
  std::uint64_t total_arithmetic;
};

StratumCounts expected_stratum_counts(unsigned p);

}  // namespace qdb
