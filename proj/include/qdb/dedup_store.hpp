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
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>

#include "qdb/invariants.hpp"

namespace qdb {

class BucketOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Set of canonical keys with a linearizable insert-if-absent.
class DedupStore {
 public:
  virtual ~DedupStore() = default;
  // True iff the key was absent and is now present.
  virtual bool insert_if_absent(const CanonicalKey& key) = 0;
  virtual bool contains(const CanonicalKey& key) const = 0;
  virtual std::uint64_t size() const = 0;
};

// Smallest overhead eps such that, with p^6 keys spread over p^5 buckets,
// the expected number of buckets holding more than ceil((1+eps)p) keys is
// below `threshold` (Poisson model with mean p).
double epsilon_for(unsigned p, double threshold = 1e-3);
std::uint64_t bucket_capacity(unsigned p, double epsilon);

// Bucket address: the first five invariants after adding a fixed linear
// combination of the last eight. The map is a bijection on key tuples, so the
// bucket together with the stored last eight recovers the key.
struct BucketMixing {
  std::array<std::array<std::uint8_t, 8>, 5> a{};
  static BucketMixing identity() { return {}; }
  static BucketMixing standard(unsigned p);
};

class OpenAddressingStore final : public DedupStore {
 public:
  OpenAddressingStore(unsigned p, double epsilon, BucketMixing mixing);
  OpenAddressingStore(unsigned p, double epsilon) : OpenAddressingStore(p, epsilon, BucketMixing::standard(p)) {}

  bool insert_if_absent(const CanonicalKey& key) override;
  bool contains(const CanonicalKey& key) const override;
  std::uint64_t size() const override { return count_.load(std::memory_order_relaxed); }

  std::uint64_t bucket_count() const { return buckets_; }
  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t memory_bytes() const { return buckets_ * capacity_ * sizeof(std::uint64_t); }
  std::uint64_t bucket_of(const CanonicalKey& key) const;
  // Fill level of the fullest bucket.
  std::uint64_t max_load() const;

 private:
  static std::uint64_t tail(const CanonicalKey& key);

  unsigned p_;
  BucketMixing mixing_;
  std::uint64_t buckets_;
  std::uint64_t capacity_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> slots_;
  std::atomic<std::uint64_t> count_{0};
};

class MapStore final : public DedupStore {
 public:
  bool insert_if_absent(const CanonicalKey& key) override;
  bool contains(const CanonicalKey& key) const override;
  std::uint64_t size() const override;

 private:
  mutable std::mutex mu_;
  std::set<CanonicalKey> keys_;
};

}  // namespace qdb
