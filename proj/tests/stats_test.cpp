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

#include "qdb/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qdb/census.hpp"
#include "testing.hpp"

namespace qdb {
namespace {

namespace fs = std::filesystem;

// One record per entry of `traces`, each with a single twist of that trace.
Database synthetic_db(unsigned p, const std::vector<int>& traces) {
  Database db(p);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CanonicalKey key;
    key.v[0] = static_cast<std::uint8_t>(i / (p * p));
    key.v[1] = static_cast<std::uint8_t>(i / p % p);
    key.v[2] = static_cast<std::uint8_t>(i % p);
    key.v[12] = 1;
    const auto points = static_cast<std::uint16_t>(static_cast<int>(p) + 1 - traces[i]);
    db.append({key, GroupId::Trivial, {{testing::fermat(p), points, 1}}});
  }
  db.sort_by_key();
  return db;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qdb_stats_test" / name;
  fs::remove_all(dir);
  return dir;
}

TEST(Stats, TraceBound) {
  EXPECT_EQ(trace_bound(11), 18);
  EXPECT_EQ(trace_bound(13), 21);
  EXPECT_EQ(trace_bound(17), 24);
  EXPECT_EQ(trace_bound(53), 42);
}

TEST(Stats, HistogramAndDensityNormalization) {
  std::mt19937_64 rng(80);
  std::vector<int> traces;
  for (int i = 0; i < 1000; ++i) traces.push_back(static_cast<int>(rng() % 31) - 18);  // t <= p + 1
  const Database db = synthetic_db(11, traces);
  const TraceHistogram h = trace_histogram(db);
  EXPECT_EQ(h.total(), 1000u);
  const KSDensity d = ks_density(h);
  ASSERT_EQ(d.points.size(), 37u);
  double integral = 0.0;
  for (const auto& pt : d.points) integral += pt.density / std::sqrt(11.0);
  EXPECT_NEAR(integral, 1.0, 1e-9);
  EXPECT_NEAR(d.points.front().tau, -18 / std::sqrt(11.0), 1e-12);
}

TEST(Stats, SymmetricInputHasZeroAsymmetry) {
  std::vector<int> traces;
  for (int t = -10; t <= 10; ++t)
    for (int k = 0; k < 5 + std::abs(t); ++k) traces.push_back(t);
  const auto asym = asymmetry(ks_density(trace_histogram(synthetic_db(13, traces))));
  for (const auto& pt : asym) EXPECT_EQ(pt.density, 0.0);
}

TEST(Stats, AsymmetryIsOddAndVanishesAtZero) {
  std::vector<int> traces = {0, 0, 3, 3, 3, -3, 5, -7};
  const auto asym = asymmetry(ks_density(trace_histogram(synthetic_db(11, traces))));
  const std::size_t n = asym.size();
  EXPECT_EQ(asym[n / 2].tau, 0.0);
  EXPECT_EQ(asym[n / 2].density, 0.0);
  for (std::size_t i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(asym[i].density, -asym[n - 1 - i].density);
}

TEST(Stats, MeanTraceFlipsSignWithTheInput) {
  const std::vector<int> traces = {1, 2, 2, -5, 7, 0, 3};
  std::vector<int> flipped;
  for (int t : traces) flipped.push_back(-t);
  const MeanTrace m = mean_normalized_trace(synthetic_db(11, traces));
  const MeanTrace f = mean_normalized_trace(synthetic_db(11, flipped));
  EXPECT_EQ(m.trace_sum, 10);
  EXPECT_EQ(m.count, 7u);
  EXPECT_EQ(f.trace_sum, -10);
  EXPECT_DOUBLE_EQ(m.normalized(), 10.0 / 7.0 / std::sqrt(11.0));
  EXPECT_DOUBLE_EQ(f.normalized(), -m.normalized());
  EXPECT_EQ(mean_normalized_trace(Database(11)).normalized(), 0.0);
}

TEST(Stats, OneSignificantDigit) {
  EXPECT_DOUBLE_EQ(round_to_one_significant_digit(0.00437), 0.004);
  EXPECT_DOUBLE_EQ(round_to_one_significant_digit(0.00351), 0.004);
  EXPECT_DOUBLE_EQ(round_to_one_significant_digit(0.000949), 0.0009);
  EXPECT_DOUBLE_EQ(round_to_one_significant_digit(-0.0026), -0.003);
  EXPECT_EQ(round_to_one_significant_digit(0.0), 0.0);
}

TEST(EmitCsv, EmptyDatabaseWritesHeadersOnly) {
  const fs::path dir = temp_dir("empty");
  emit_csv(Database(11), dir.string());
  EXPECT_EQ(read_csv(dir / "trace_hist.csv"), (std::vector<std::vector<std::string>>{{"p", "t", "count"}}));
  EXPECT_EQ(read_csv(dir / "ks.csv"), (std::vector<std::vector<std::string>>{{"p", "tau", "density"}}));
  EXPECT_EQ(read_csv(dir / "asymmetry.csv"), (std::vector<std::vector<std::string>>{{"p", "tau", "diff"}}));
  EXPECT_EQ(read_csv(dir / "strata.csv"),
            (std::vector<std::vector<std::string>>{
                {"p", "group", "observed_geom", "expected_geom", "observed_arith", "expected_arith"}}));
}

TEST(EmitCsv, KsRoundTrip) {
  std::mt19937_64 rng(81);
  std::vector<int> traces;
  for (int i = 0; i < 500; ++i) traces.push_back(static_cast<int>(rng() % 21) - 10);
  const Database db = synthetic_db(13, traces);
  const fs::path dir = temp_dir("ks");
  emit_csv(db, dir.string());
  const KSDensity d = ks_density(trace_histogram(db));
  const auto rows = read_csv(dir / "ks.csv");
  ASSERT_EQ(rows.size(), d.points.size() + 1);
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    ASSERT_EQ(rows[i + 1][0], "13");
    EXPECT_NEAR(std::stod(rows[i + 1][1]), d.points[i].tau, 1e-11 * std::max(1.0, std::fabs(d.points[i].tau)));
    EXPECT_NEAR(std::stod(rows[i + 1][2]), d.points[i].density, 1e-11 * std::max(1.0, d.points[i].density));
  }
  std::uint64_t total = 0;
  for (std::size_t i = 1; i < read_csv(dir / "trace_hist.csv").size(); ++i) {
    total += std::stoull(read_csv(dir / "trace_hist.csv")[i][2]);
  }
  EXPECT_EQ(total, 500u);
  EXPECT_EQ(read_csv(dir / "strata.csv").size(), 14u);
}

TEST(EmitCsv, UnwritableDirectoryIsAnError) {
  const fs::path file = temp_dir("blocker");
  fs::create_directories(file.parent_path());
  std::ofstream(file.string()) << "x";
  EXPECT_ANY_THROW(emit_csv(Database(11), (file / "sub").string()));
}

TEST(VerifyStratumCounts, SmallCensusRows) {
  CensusConfig cfg;
  cfg.p = 11;
  cfg.max_dim = 1;
  const CensusResult r = run_census(cfg);
  const StratumCountReport rep = verify_stratum_counts(r.db);
  ASSERT_EQ(rep.rows.size(), 14u);
  EXPECT_EQ(rep.rows.back().group, "total");
  EXPECT_FALSE(rep.all_match());
  for (const auto& row : rep.rows) {
    if (row.group == "total" || row.group == "{1}" || row.group == "C2" || row.group == "D4" || row.group == "C3" ||
        row.group == "D8" || row.group == "S3") {
      continue;
    }
    EXPECT_TRUE(row.match()) << row.group;
  }
}

}  // namespace
}  // namespace qdb
