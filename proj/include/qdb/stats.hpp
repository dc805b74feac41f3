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
#include <map>
#include <string>
#include <vector>

#include "qdb/database.hpp"
#include "qdb/families.hpp"

namespace qdb {

// Serre bound 3 * floor(2 sqrt(p)).
int trace_bound(unsigned p);

struct TraceHistogram {
  unsigned p = 0;
  std::map<int, std::uint64_t> counts;  // trace -> number of F_p-classes
  std::uint64_t total() const;
};

TraceHistogram trace_histogram(const Database& db);

struct KSPoint {
  double tau;
  double density;
};

struct KSDensity {
  unsigned p = 0;
  std::vector<KSPoint> points;  // one per trace in [-bound, bound], ascending tau
};

// density(t) = sqrt(p) * N(t) / N with N the total class count.
KSDensity ks_density(const TraceHistogram& hist);

// (tau, density(tau) - density(-tau)) over the same grid.
std::vector<KSPoint> asymmetry(const KSDensity& dens);

// Exact mean trace sum / count; the normalized mean divides by sqrt(p).
struct MeanTrace {
  unsigned p = 0;
  long long trace_sum = 0;
  std::uint64_t count = 0;
  double normalized() const;
};

MeanTrace mean_normalized_trace(const Database& db);

// One significant digit, e.g. 0.00437 -> 0.004.
double round_to_one_significant_digit(double x);

struct StratumCountCheck {
  std::string group;
  std::uint64_t observed_geometric = 0;
  std::uint64_t expected_geometric = 0;
  std::uint64_t observed_arithmetic = 0;
  std::uint64_t expected_arithmetic = 0;
  bool match() const {
    return observed_geometric == expected_geometric && observed_arithmetic == expected_arithmetic;
  }
};

struct StratumCountReport {
  unsigned p = 0;
  std::vector<StratumCountCheck> rows;  // processing order, then the "total" row
  bool all_match() const;
};

StratumCountReport verify_stratum_counts(const Database& db);

// trace_hist.csv, ks.csv, asymmetry.csv, strata.csv in out_dir.
void emit_csv(const Database& db, const std::string& out_dir);

}  // namespace qdb
