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

#include "qdb/census.hpp"

#include <chrono>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "qdb/dedup_store.hpp"
#include "qdb/invariants.hpp"
#include "qdb/twists.hpp"

namespace qdb {

namespace {

constexpr std::uint64_t kChunk = 1 << 15;

// Runs body(i) for i in [0, n) on `threads` workers with a static interleave.
template <class Body>
void parallel_for(unsigned threads, std::uint64_t n, Body&& body) {
  if (threads <= 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t candidate_seed(std::uint64_t seed, GroupId s, std::uint64_t index) {
  return seed ^ (std::uint64_t{static_cast<std::uint8_t>(s)} << 56) ^ index;
}

}  // namespace

std::vector<TwistEntry> census_twists(const FamilyCandidate& c, std::mt19937_64& rng) {
  std::vector<TwistEntry> out;
  auto entry = [](const TernaryQuartic& q, unsigned aut) {
    return TwistEntry{q, static_cast<std::uint16_t>(count_points(q)), static_cast<std::uint8_t>(aut)};
  };
  if (c.stratum == GroupId::Trivial) {
    out.push_back(entry(c.quartic, 1));
    return out;
  }
  AutDescriptor desc = aut_generators(c);
  AutGroupElements G = group_closure(desc.field, desc.generators);
  for (const auto& t : twists_of(c.quartic, G, rng)) out.push_back(entry(t.quartic, t.rational_aut_order));
  return out;
}

CensusResult run_census(const CensusConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const unsigned p = cfg.p;
  const InvariantEngine& engine = invariant_engine(p);
  const unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());

  std::unique_ptr<DedupStore> store;
  if (cfg.store == StoreKind::Map) {
    store = std::make_unique<MapStore>();
  } else {
    const double eps = cfg.epsilon > 0 ? cfg.epsilon : epsilon_for(p);
    store = std::make_unique<OpenAddressingStore>(
        p, eps, cfg.identity_mixing ? BucketMixing::identity() : BucketMixing::standard(p));
  }

  CensusResult result;
  result.db = Database(p);
  std::uint64_t p6 = 1;
  for (int i = 0; i < 6; ++i) p6 *= p;
  result.expected_records = p6 + 1;

  auto log = [&](const std::string& msg) {
    if (cfg.log) cfg.log(msg);
  };

  bool stop = false;
  for (GroupId s : processing_order()) {
    if (stop) break;
    const Stratum& info = stratum_info(s);
    if (info.dim > cfg.max_dim) continue;
    const auto stratum_start = std::chrono::steady_clock::now();
    const StratumEnumerator en(p, s);
    const std::vector<FamilyCandidate> extra = s == GroupId::Trivial ? exceptional_curves(p) : std::vector<FamilyCandidate>{};
    const std::uint64_t total = extra.size() + en.size();
    auto candidate = [&](std::uint64_t i) { return i < extra.size() ? extra[i] : en.at(i - extra.size()); };
    StratumTally& tally = result.tallies[static_cast<int>(s)];

    std::vector<std::optional<CanonicalKey>> keys;
    for (std::uint64_t base = 0; base < total && !stop; base += kChunk) {
      const std::uint64_t len = std::min(kChunk, total - base);
      keys.assign(len, std::nullopt);
      parallel_for(threads, len, [&](std::uint64_t i) { keys[i] = engine.key_if_smooth(candidate(base + i).quartic); });

      std::vector<std::uint64_t> winners;
      for (std::uint64_t i = 0; i < len; ++i) {
        ++tally.candidates;
        if (!keys[i]) {
          ++tally.singular;
          continue;
        }
        if (store->insert_if_absent(*keys[i])) {
          winners.push_back(i);
          if (store->size() == result.expected_records) {
            stop = true;
            result.early_stopped = base + i + 1 < total || s != processing_order().back();
            break;
          }
        }
      }

      std::vector<std::vector<TwistEntry>> twists(winners.size());
      parallel_for(threads, winners.size(), [&](std::uint64_t w) {
        const std::uint64_t idx = base + winners[w];
        std::mt19937_64 rng(candidate_seed(cfg.seed, s, idx));
        twists[w] = census_twists(candidate(idx), rng);
      });
      for (std::size_t w = 0; w < winners.size(); ++w) {
        tally.records += 1;
        tally.twists += twists[w].size();
        result.db.append(CensusRecord{*keys[winners[w]], s, std::move(twists[w])});
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - stratum_start).count();
    std::ostringstream msg;
    msg << "stratum " << info.name << ": " << tally.candidates << " candidates, " << tally.singular << " singular, "
        << tally.records << " classes, " << tally.twists << " twists, " << secs << " s";
    log(msg.str());
  }

  result.db.sort_by_key();
  result.complete = result.db.size() == result.expected_records;
  if (!cfg.out_path.empty()) write_db(cfg.out_path, result.db);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace qdb
