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

#include <algorithm>
#include <cmath>
#include <string>

namespace qdb {

namespace {

// log P(X = k) for X ~ Poisson(lambda).
double log_poisson(double lambda, std::uint64_t k) {
  return -lambda + static_cast<double>(k) * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0);
}

double poisson_tail_above(double lambda, std::uint64_t n) {
  double sum = 0.0;
  for (std::uint64_t k = n + 1;; ++k) {
    const double term = std::exp(log_poisson(lambda, k));
    sum += term;
    if (k > lambda && term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

double epsilon_for(unsigned p, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
  const double lambda = p;
  const double buckets = std::pow(lambda, 5);
  for (std::uint64_t n = p;; ++n) {
    if (buckets * poisson_tail_above(lambda, n) < threshold) {
      return static_cast<double>(n - p) / lambda;
    }
  }
}

std::uint64_t bucket_capacity(unsigned p, double epsilon) {
  return static_cast<std::uint64_t>(std::ceil((1.0 + epsilon) * p - 1e-9));
}

BucketMixing BucketMixing::standard(unsigned p) {
  BucketMixing m;
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (auto& row : m.a) {
    for (auto& v : row) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      v = static_cast<std::uint8_t>((state >> 33) % p);
    }
  }
  return m;
}

OpenAddressingStore::OpenAddressingStore(unsigned p, double epsilon, BucketMixing mixing)
    : p_(p), mixing_(mixing) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  buckets_ = 1;
  for (int i = 0; i < 5; ++i) buckets_ *= p;
  capacity_ = bucket_capacity(p, epsilon);
  slots_ = std::make_unique<std::atomic<std::uint64_t>[]>(buckets_ * capacity_);
  for (std::uint64_t i = 0; i < buckets_ * capacity_; ++i) slots_[i].store(0, std::memory_order_relaxed);
}

std::uint64_t OpenAddressingStore::tail(const CanonicalKey& key) {
  std::uint64_t t = 0;
  for (int i = 5; i < kNumInvariants; ++i) t = (t << 8) | key.v[i];
  return t;
}

std::uint64_t OpenAddressingStore::bucket_of(const CanonicalKey& key) const {
  std::uint64_t b = 0;
  for (int j = 0; j < 5; ++j) {
    unsigned u = key.v[j];
    for (int k = 0; k < 8; ++k) u += unsigned{mixing_.a[j][k]} * key.v[5 + k];
    b = b * p_ + u % p_;
  }
  return b;
}

bool OpenAddressingStore::insert_if_absent(const CanonicalKey& key) {
  // A smooth key has I27 != 0, so the packed tail is never the empty marker.
  const std::uint64_t t = tail(key);
  if (t == 0) throw std::invalid_argument("key with vanishing tail cannot be stored");
  std::atomic<std::uint64_t>* bucket = &slots_[bucket_of(key) * capacity_];
  for (std::uint64_t i = 0; i < capacity_; ++i) {
    std::uint64_t cur = bucket[i].load(std::memory_order_acquire);
    if (cur == 0) {
      if (bucket[i].compare_exchange_strong(cur, t, std::memory_order_acq_rel)) {
        count_.fetch_add(1, std::memory_order_relaxed);
        return true;
      }
    }
    if (cur == t) return false;
  }
  throw BucketOverflow("bucket " + std::to_string(bucket_of(key)) + " is full (capacity " +
                       std::to_string(capacity_) + "); increase epsilon");
}

bool OpenAddressingStore::contains(const CanonicalKey& key) const {
  const std::uint64_t t = tail(key);
  const std::atomic<std::uint64_t>* bucket = &slots_[bucket_of(key) * capacity_];
  for (std::uint64_t i = 0; i < capacity_; ++i) {
    const std::uint64_t cur = bucket[i].load(std::memory_order_acquire);
    if (cur == t) return true;
    if (cur == 0) return false;
  }
  return false;
}

std::uint64_t OpenAddressingStore::max_load() const {
  std::uint64_t best = 0;
  for (std::uint64_t b = 0; b < buckets_; ++b) {
    std::uint64_t n = 0;
    while (n < capacity_ && slots_[b * capacity_ + n].load(std::memory_order_relaxed) != 0) ++n;
    best = std::max(best, n);
  }
  return best;
}

bool MapStore::insert_if_absent(const CanonicalKey& key) {
  std::lock_guard lock(mu_);
  return keys_.insert(key).second;
}

bool MapStore::contains(const CanonicalKey& key) const {
  std::lock_guard lock(mu_);
  return keys_.count(key) != 0;
}

std::uint64_t MapStore::size() const {
  std::lock_guard lock(mu_);
  return keys_.size();
}

}  // namespace qdb
