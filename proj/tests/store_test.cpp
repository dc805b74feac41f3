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

#include "qdb/dedup_store.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <thread>

namespace qdb {
namespace {

CanonicalKey random_key(unsigned p, std::mt19937_64& rng) {
  CanonicalKey k;
  for (auto& v : k.v) v = static_cast<std::uint8_t>(rng() % p);
  k.v[12] = static_cast<std::uint8_t>(1 + rng() % (p - 1));
  return k;
}

// Capacities frozen from an independent Poisson tail computation.
TEST(Epsilon, PoissonRule) {
  EXPECT_EQ(bucket_capacity(11, epsilon_for(11)), 35u);
  EXPECT_NEAR(epsilon_for(11), 24.0 / 11.0, 1e-12);
  EXPECT_EQ(bucket_capacity(13, epsilon_for(13)), 39u);
  EXPECT_NEAR(epsilon_for(13), 2.0, 1e-12);
  EXPECT_EQ(bucket_capacity(53, epsilon_for(53)), 111u);
  EXPECT_NEAR(epsilon_for(53), 58.0 / 53.0, 1e-12);
  EXPECT_LT(epsilon_for(53), epsilon_for(13));
  EXPECT_GE(epsilon_for(11, 1e-6), epsilon_for(11, 1e-3));
  EXPECT_THROW(epsilon_for(11, 0.0), std::invalid_argument);
}

// p^5 buckets of ceil((1 + eps) p) eight-byte slots: about 346 GiB at p = 53.
TEST(Epsilon, TableSizeAtP53) {
  const double p5 = std::pow(53.0, 5);
  const double bytes = p5 * static_cast<double>(bucket_capacity(53, epsilon_for(53))) * 8.0;
  const double gib = bytes / std::pow(2.0, 30);
  EXPECT_GT(gib, 320.0);
  EXPECT_LT(gib, 380.0);
}

TEST(OpenAddressingStore, InsertSemantics) {
  OpenAddressingStore store(11, epsilon_for(11));
  std::mt19937_64 rng(50);
  const CanonicalKey k = random_key(11, rng);
  EXPECT_FALSE(store.contains(k));
  EXPECT_TRUE(store.insert_if_absent(k));
  EXPECT_FALSE(store.insert_if_absent(k));
  EXPECT_TRUE(store.contains(k));
  EXPECT_EQ(store.size(), 1u);
  EXPECT_EQ(store.bucket_count(), 161051u);
  EXPECT_EQ(store.capacity(), 35u);
  EXPECT_EQ(store.memory_bytes(), 161051u * 35u * 8u);
}

TEST(OpenAddressingStore, KeysDifferingInTheTailShareABucketWithIdentityMixing) {
  OpenAddressingStore store(11, 0.5, BucketMixing::identity());
  CanonicalKey a{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1, 2, 3}};
  CanonicalKey b = a;
  b.v[12] = 4;
  EXPECT_EQ(store.bucket_of(a), store.bucket_of(b));
  EXPECT_TRUE(store.insert_if_absent(a));
  EXPECT_TRUE(store.insert_if_absent(b));
  EXPECT_EQ(store.size(), 2u);
  EXPECT_EQ(store.max_load(), 2u);
}

TEST(OpenAddressingStore, OverflowIsAnError) {
  OpenAddressingStore store(11, 0.1, BucketMixing::identity());
  ASSERT_EQ(store.capacity(), 13u);
  CanonicalKey k{{1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1}};
  for (std::uint64_t i = 0; i < store.capacity(); ++i) {
    k.v[11] = static_cast<std::uint8_t>(i);
    ASSERT_TRUE(store.insert_if_absent(k));
  }
  EXPECT_FALSE(store.insert_if_absent(k));
  k.v[12] = 2;
  EXPECT_THROW(store.insert_if_absent(k), BucketOverflow);
}

TEST(OpenAddressingStore, AgreesWithMapStore) {
  std::mt19937_64 rng(51);
  OpenAddressingStore oa(11, epsilon_for(11));
  MapStore ms;
  std::vector<CanonicalKey> keys;
  for (int i = 0; i < 20000; ++i) keys.push_back(random_key(11, rng));
  for (int i = 0; i < 5000; ++i) keys.push_back(keys[rng() % keys.size()]);
  for (const auto& k : keys) ASSERT_EQ(oa.insert_if_absent(k), ms.insert_if_absent(k));
  EXPECT_EQ(oa.size(), ms.size());
  for (const auto& k : keys) EXPECT_TRUE(oa.contains(k));
}

TEST(BucketMixing, StandardMixingIsDeterministicAndSpreadsTails) {
  const BucketMixing a = BucketMixing::standard(13), b = BucketMixing::standard(13);
  EXPECT_EQ(a.a, b.a);
  OpenAddressingStore store(11, 1.0);
  std::set<std::uint64_t> buckets;
  CanonicalKey k{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1, 2, 3}};
  for (int v = 1; v < 11; ++v) {
    k.v[12] = static_cast<std::uint8_t>(v);
    buckets.insert(store.bucket_of(k));
  }
  EXPECT_GT(buckets.size(), 1u);
}

TEST(OpenAddressingStore, ConcurrentInsertsHaveExactlyOneWinner) {
  std::mt19937_64 rng(52);
  std::vector<CanonicalKey> keys;
  for (int i = 0; i < 20000; ++i) keys.push_back(random_key(11, rng));
  std::set<CanonicalKey> distinct(keys.begin(), keys.end());
  OpenAddressingStore store(11, epsilon_for(11));
  std::atomic<std::uint64_t> wins{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (store.insert_if_absent(keys[(i + 5000 * t) % keys.size()])) wins.fetch_add(1);
      }
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(wins.load(), distinct.size());
  EXPECT_EQ(store.size(), distinct.size());
}

}  // namespace
}  // namespace qdb
