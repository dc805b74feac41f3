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

#include "qdb/database.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

namespace qdb {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 8;
constexpr std::size_t kFixedBytes = kNumInvariants + 2;
constexpr std::size_t kTwistBytes = kQuarticTerms + 3;

CanonicalKey key_from(const std::uint8_t* b) {
  CanonicalKey k;
  std::memcpy(k.v.data(), b, kNumInvariants);
  return k;
}

}  // namespace

void RecordArena::append(const CensusRecord& r) {
  if (r.twists.empty() || r.twists.size() > 255) throw DatabaseError("record must carry 1..255 twists");
  if (!offsets_.empty() && sorted_ && !(key_at(offsets_.size() - 1) < r.key)) sorted_ = false;
  offsets_.push_back(bytes_.size());
  bytes_.insert(bytes_.end(), r.key.v.begin(), r.key.v.end());
  bytes_.push_back(static_cast<std::uint8_t>(r.stratum));
  bytes_.push_back(static_cast<std::uint8_t>(r.twists.size()));
  for (const auto& t : r.twists) {
    bytes_.insert(bytes_.end(), t.quartic.c.begin(), t.quartic.c.end());
    bytes_.push_back(static_cast<std::uint8_t>(t.points & 0xff));
    bytes_.push_back(static_cast<std::uint8_t>(t.points >> 8));
    bytes_.push_back(t.rational_aut_order);
  }
}

CanonicalKey RecordArena::key_at(std::uint64_t i) const { return key_from(data_at(i)); }

GroupId RecordArena::stratum_at(std::uint64_t i) const { return static_cast<GroupId>(data_at(i)[kNumInvariants]); }

unsigned RecordArena::twist_count_at(std::uint64_t i) const { return data_at(i)[kNumInvariants + 1]; }

std::uint64_t RecordArena::encoded_size(std::uint64_t i) const {
  return kFixedBytes + kTwistBytes * twist_count_at(i);
}

std::uint64_t RecordArena::total_twists() const {
  std::uint64_t n = 0;
  for (std::uint64_t i = 0; i < size(); ++i) n += twist_count_at(i);
  return n;
}

CensusRecord RecordArena::at(std::uint64_t i) const {
  const std::uint8_t* b = data_at(i);
  CensusRecord r;
  r.key = key_from(b);
  r.stratum = static_cast<GroupId>(b[kNumInvariants]);
  const unsigned n = b[kNumInvariants + 1];
  b += kFixedBytes;
  for (unsigned j = 0; j < n; ++j, b += kTwistBytes) {
    TwistEntry t;
    t.quartic.p = p_;
    std::memcpy(t.quartic.c.data(), b, kQuarticTerms);
    t.points = static_cast<std::uint16_t>(b[kQuarticTerms] | (b[kQuarticTerms + 1] << 8));
    t.rational_aut_order = b[kQuarticTerms + 2];
    r.twists.push_back(t);
  }
  return r;
}

void RecordArena::sort_by_key() {
  std::sort(offsets_.begin(), offsets_.end(), [&](std::uint64_t a, std::uint64_t b) {
    return std::memcmp(bytes_.data() + a, bytes_.data() + b, kNumInvariants) < 0;
  });
  for (std::uint64_t i = 1; i < offsets_.size(); ++i) {
    if (key_at(i - 1) == key_at(i)) throw DatabaseError("duplicate key " + to_text(key_at(i)));
  }
  sorted_ = true;
}

std::optional<CensusRecord> RecordArena::find(const CanonicalKey& key) const {
  if (!sorted_) throw DatabaseError("lookup on an unsorted record set");
  auto it = std::lower_bound(offsets_.begin(), offsets_.end(), key, [&](std::uint64_t off, const CanonicalKey& k) {
    return std::memcmp(bytes_.data() + off, k.v.data(), kNumInvariants) < 0;
  });
  if (it == offsets_.end()) return std::nullopt;
  const std::uint64_t i = static_cast<std::uint64_t>(it - offsets_.begin());
  if (!(key_at(i) == key)) return std::nullopt;
  return at(i);
}

void write_db(const std::string& path, const RecordArena& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatabaseError("cannot open " + path + " for writing");
  std::uint8_t header[kHeaderBytes];
  std::memcpy(header, kDbMagic, 4);
  header[4] = kDbVersion;
  header[5] = static_cast<std::uint8_t>(records.p());
  const std::uint64_t n = records.size();
  for (int i = 0; i < 8; ++i) header[6 + i] = static_cast<std::uint8_t>(n >> (8 * i));
  out.write(reinterpret_cast<const char*>(header), kHeaderBytes);
  for (std::uint64_t i = 0; i < n; ++i) {
    out.write(reinterpret_cast<const char*>(records.data_at(i)), static_cast<std::streamsize>(records.encoded_size(i)));
  }
  if (!out) throw DatabaseError("write failed for " + path);
}

Database read_db(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatabaseError("cannot open " + path);
  std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() < kHeaderBytes || std::memcmp(raw.data(), kDbMagic, 4) != 0) {
    throw DatabaseError("malformed database: bad magic in " + path);
  }
  if (raw[4] != kDbVersion) throw DatabaseError("malformed database: unsupported version");
  Database db(raw[5]);
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= std::uint64_t{raw[6 + i]} << (8 * i);
  db.bytes_.assign(raw.begin() + kHeaderBytes, raw.end());
  db.offsets_.reserve(n);
  std::uint64_t off = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (off + kFixedBytes > db.bytes_.size()) throw DatabaseError("malformed database: truncated record");
    const unsigned twists = db.bytes_[off + kNumInvariants + 1];
    if (twists == 0) throw DatabaseError("malformed database: record without twists");
    db.offsets_.push_back(off);
    off += kFixedBytes + kTwistBytes * twists;
    if (off > db.bytes_.size()) throw DatabaseError("malformed database: truncated record");
    if (i > 0 && !(db.key_at(i - 1) < db.key_at(i))) throw DatabaseError("malformed database: keys not ascending");
  }
  if (off != db.bytes_.size()) throw DatabaseError("malformed database: trailing bytes");
  db.sorted_ = true;
  return db;
}

CensusRecord lookup(const Database& db, const CanonicalKey& key) {
  auto r = db.find(key);
  if (!r) throw KeyNotFound("key-not-found: " + to_text(key));
  return *r;
}

}  // namespace qdb
