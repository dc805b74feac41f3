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
#include <random>
#include <stdexcept>
#include <string>

#include "qdb/database.hpp"
#include "qdb/families.hpp"

namespace qdb {

class IncompleteCensus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StoreKind { OpenAddressing, Map };

struct CensusConfig {
  unsigned p = 11;
  double epsilon = 0.0;  // 0 selects epsilon_for(p, 1e-3)
  unsigned threads = 0;  // 0 selects the hardware concurrency
  std::uint64_t seed = 0x5eed;
  std::string out_path;  // empty: keep the result in memory only
  StoreKind store = StoreKind::OpenAddressing;
  bool identity_mixing = false;
  unsigned max_dim = 6;  // strata of larger dimension are skipped
  std::function<void(const std::string&)> log;
};

struct StratumTally {
  std::uint64_t candidates = 0;
  std::uint64_t singular = 0;
  std::uint64_t records = 0;
  std::uint64_t twists = 0;
};

struct CensusResult {
  Database db;
  std::array<StratumTally, kNumStrata> tallies{};  // indexed by GroupId
  std::uint64_t expected_records = 0;              // p^6 + 1
  bool complete = false;
  bool early_stopped = false;
  double seconds = 0.0;
};

// Twists of one census winner with their point counts. `rng` drives the
// coboundary sampling.
std::vector<TwistEntry> census_twists(const FamilyCandidate& c, std::mt19937_64& rng);

// Runs the stratified enumeration. Writes the database when out_path is set.
// With max_dim = 6 an incomplete result (fewer than p^6 + 1 keys) is reported
// through `complete`, never silently.
CensusResult run_census(const CensusConfig& config);

}  // namespace qdb
