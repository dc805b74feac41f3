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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "testing.hpp"

namespace qdb {
namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qdb_database_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Database sample_db(unsigned p, int n, std::mt19937_64& rng) {
  Database db(p);
  for (int i = 0; i < n; ++i) {
    CensusRecord r;
    const auto F = testing::random_smooth_quartic(p, rng);
    r.key = testing::key_of(F);
    r.stratum = static_cast<GroupId>(rng() % kNumStrata);
    const int twists = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < twists; ++t) {
      r.twists.push_back({F, static_cast<std::uint16_t>(count_points(F)), static_cast<std::uint8_t>(1 + rng() % 168)});
    }
    if (db.find(r.key)) continue;
    db.append(r);
    db.sort_by_key();
  }
  return db;
}

TEST(Database, AppendAndAccess) {
  Database db(11);
  CensusRecord r{testing::key_of(testing::klein(11)), GroupId::G168, {{testing::klein(11), 12, 168}}};
  db.append(r);
  EXPECT_EQ(db.size(), 1u);
  EXPECT_EQ(db.at(0), r);
  EXPECT_EQ(db.key_at(0), r.key);
  EXPECT_EQ(db.stratum_at(0), GroupId::G168);
  EXPECT_EQ(db.twist_count_at(0), 1u);
  EXPECT_EQ(db.encoded_size(0), 13u + 2u + 18u);
  EXPECT_THROW(db.append(CensusRecord{r.key, GroupId::C2, {}}), DatabaseError);
}

TEST(Database, SortRejectsDuplicates) {
  Database db(11);
  CensusRecord r{testing::key_of(testing::fermat(11)), GroupId::G96, {{testing::fermat(11), 12, 96}}};
  db.append(r);
  db.append(r);
  EXPECT_THROW(db.sort_by_key(), DatabaseError);
}

TEST(Database, RoundTripIsByteIdentical) {
  std::mt19937_64 rng(60);
  const Database db = sample_db(13, 300, rng);
  const std::string a = temp_path("a.qdb"), b = temp_path("b.qdb");
  write_db(a, db);
  const Database back = read_db(a);
  ASSERT_EQ(back.size(), db.size());
  EXPECT_EQ(back.p(), 13u);
  for (std::uint64_t i = 0; i < db.size(); ++i) ASSERT_EQ(back.at(i), db.at(i));
  write_db(b, back);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Database, Lookup) {
  std::mt19937_64 rng(61);
  const Database db = sample_db(11, 100, rng);
  for (std::uint64_t i = 0; i < db.size(); i += 7) EXPECT_EQ(lookup(db, db.key_at(i)), db.at(i));
  CanonicalKey absent = db.key_at(0);
  for (std::uint8_t v = 0; db.find(absent) && v < 11; ++v) absent.v[0] = v;
  ASSERT_FALSE(db.find(absent).has_value());
  EXPECT_THROW(lookup(db, absent), KeyNotFound);
  Database empty(11);
  EXPECT_THROW(lookup(empty, absent), KeyNotFound);
}

TEST(Database, MalformedFilesAreRejected) {
  std::mt19937_64 rng(62);
  const Database db = sample_db(11, 20, rng);
  const std::string path = temp_path("good.qdb");
  write_db(path, db);
  const std::vector<char> good = slurp(path);
  ASSERT_EQ(good[0], 'Q');
  ASSERT_EQ(good[3], '3');
  ASSERT_EQ(good[4], 1);
  ASSERT_EQ(static_cast<unsigned char>(good[5]), 11);

  const std::string bad = temp_path("bad.qdb");
  auto expect_rejected = [&](std::vector<char> bytes) {
    spit(bad, bytes);
    EXPECT_THROW(read_db(bad), DatabaseError);
  };
  auto v = good;
  v[0] = 'X';
  expect_rejected(v);
  v = good;
  v[4] = 9;
  expect_rejected(v);
  v = good;
  v.resize(v.size() - 3);
  expect_rejected(v);
  v = good;
  v.push_back(0);
  expect_rejected(v);
  EXPECT_THROW(read_db(temp_path("missing.qdb")), DatabaseError);
}

TEST(Database, EmptyRoundTrip) {
  const std::string path = temp_path("empty.qdb");
  write_db(path, Database(17));
  const Database back = read_db(path);
  EXPECT_EQ(back.size(), 0u);
  EXPECT_EQ(back.p(), 17u);
}

}  // namespace
}  // namespace qdb
