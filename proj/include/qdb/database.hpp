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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdb/families.hpp"
#include "qdb/invariants.hpp"
#include "qdb/quartic.hpp"

namespace qdb {

class DatabaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyNotFound : public DatabaseError {
 public:
  using DatabaseError::DatabaseError;
};

struct TwistEntry {
  TernaryQuartic quartic;
  std::uint16_t points = 0;
  std::uint8_t rational_aut_order = 1;
  friend bool operator==(const TwistEntry&, const TwistEntry&) = default;
};

struct CensusRecord {
  CanonicalKey key;
  GroupId stratum = GroupId::Trivial;
  std::vector<TwistEntry> twists;
  friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

// Records stored back to back in their on-disk encoding:
//   13 key bytes, stratum id, twist count,
//   per twist 15 coefficients, u16 LE point count, rational automorphism order.
class RecordArena {
 public:
  explicit RecordArena(unsigned p = 0) : p_(p) {}

  unsigned p() const { return p_; }
  std::uint64_t size() const { return offsets_.size(); }
  bool empty() const { return offsets_.empty(); }

  void append(const CensusRecord& r);
  CensusRecord at(std::uint64_t i) const;
  CanonicalKey key_at(std::uint64_t i) const;
  GroupId stratum_at(std::uint64_t i) const;
  unsigned twist_count_at(std::uint64_t i) const;
  std::uint64_t total_twists() const;

  // Reorders the index so keys ascend; rejects duplicates.
  void sort_by_key();
  bool sorted() const { return sorted_; }
  std::optional<CensusRecord> find(const CanonicalKey& key) const;

  // Encoded bytes of record i.
  const std::uint8_t* data_at(std::uint64_t i) const { return bytes_.data() + offsets_[i]; }
  std::uint64_t encoded_size(std::uint64_t i) const;

 private:
  friend RecordArena read_db(const std::string& path);

  unsigned p_;
  std::vector<std::uint8_t> bytes_;
  std::vector<std::uint64_t> offsets_;
  bool sorted_ = true;
};

using Database = RecordArena;

inline constexpr char kDbMagic[4] = {'Q', 'D', 'B', '3'};
inline constexpr std::uint8_t kDbVersion = 1;

// Writes the records in index order (callers sort first).
void write_db(const std::string& path, const RecordArena& records);
Database read_db(const std::string& path);
// Binary search; throws KeyNotFound.
CensusRecord lookup(const Database& db, const CanonicalKey& key);

}  // namespace qdb
