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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace qdb {

int trace_bound(unsigned p) {
  int s = 0;
  while ((s + 1) * (s + 1) <= static_cast<int>(4 * p)) ++s;
  return 3 * s;
}

std::uint64_t TraceHistogram::total() const {
  std::uint64_t n = 0;
  for (const auto& [t, c] : counts) n += c;
  return n;
}

TraceHistogram trace_histogram(const Database& db) {
  TraceHistogram h;
  h.p = db.p();
  for (std::uint64_t i = 0; i < db.size(); ++i) {
    for (const auto& tw : db.at(i).twists) ++h.counts[static_cast<int>(db.p()) + 1 - tw.points];
  }
  return h;
}

KSDensity ks_density(const TraceHistogram& hist) {
  KSDensity d;
  d.p = hist.p;
  const std::uint64_t total = hist.total();
  if (total == 0) return d;
  const double sp = std::sqrt(static_cast<double>(hist.p));
  const int bound = trace_bound(hist.p);
  for (int t = -bound; t <= bound; ++t) {
    auto it = hist.counts.find(t);
    const double n = it == hist.counts.end() ? 0.0 : static_cast<double>(it->second);
    d.points.push_back({t / sp, sp * n / static_cast<double>(total)});
  }
  return d;
}

std::vector<KSPoint> asymmetry(const KSDensity& dens) {
  std::vector<KSPoint> out;
  const std::size_t n = dens.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({dens.points[i].tau, dens.points[i].density - dens.points[n - 1 - i].density});
  }
  return out;
}

double MeanTrace::normalized() const {
  if (count == 0) return 0.0;
  return static_cast<double>(trace_sum) / static_cast<double>(count) / std::sqrt(static_cast<double>(p));
}

MeanTrace mean_normalized_trace(const Database& db) {
  MeanTrace m;
  m.p = db.p();
  for (std::uint64_t i = 0; i < db.size(); ++i) {
    for (const auto& tw : db.at(i).twists) {
      m.trace_sum += static_cast<long long>(db.p()) + 1 - tw.points;
      ++m.count;
    }
  }
  return m;
}

double round_to_one_significant_digit(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double e = std::floor(std::log10(std::fabs(x)));
  const double scale = std::pow(10.0, e);
  return std::round(x / scale) * scale;
}

bool StratumCountReport::all_match() const {
  for (const auto& r : rows) {
    if (!r.match()) return false;
  }
  return !rows.empty();
}

StratumCountReport verify_stratum_counts(const Database& db) {
  StratumCountReport rep;
  rep.p = db.p();
  const StratumCounts expected = expected_stratum_counts(db.p());
  std::array<std::uint64_t, kNumStrata> geo{}, arith{};
  for (std::uint64_t i = 0; i < db.size(); ++i) {
    const int s = static_cast<int>(db.stratum_at(i));
    if (s >= kNumStrata) throw DatabaseError("record with unknown stratum id");
    ++geo[s];
    arith[s] += db.twist_count_at(i);
  }
  StratumCountCheck total{"total", 0, expected.total_geometric, 0, expected.total_arithmetic};
  for (GroupId id : processing_order()) {
    const int s = static_cast<int>(id);
    const auto& row = expected.rows[s];
    rep.rows.push_back({std::string(stratum_info(id).name), geo[s], row.geometric, arith[s], row.arithmetic});
    total.observed_geometric += geo[s];
    total.observed_arithmetic += arith[s];
  }
  rep.rows.push_back(total);
  return rep;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io-failure: cannot write " + path.string());
  out << header << '\n' << std::setprecision(12);
  return out;
}

}  // namespace

void emit_csv(const Database& db, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  const unsigned p = db.p();
  const TraceHistogram hist = trace_histogram(db);
  const KSDensity dens = ks_density(hist);

  auto hist_out = open_csv(dir / "trace_hist.csv", "p,t,count");
  for (const auto& [t, c] : hist.counts) hist_out << p << ',' << t << ',' << c << '\n';

  auto ks_out = open_csv(dir / "ks.csv", "p,tau,density");
  for (const auto& pt : dens.points) ks_out << p << ',' << pt.tau << ',' << pt.density << '\n';

  auto asym_out = open_csv(dir / "asymmetry.csv", "p,tau,diff");
  for (const auto& pt : asymmetry(dens)) asym_out << p << ',' << pt.tau << ',' << pt.density << '\n';

  auto strata_out = open_csv(dir / "strata.csv", "p,group,observed_geom,expected_geom,observed_arith,expected_arith");
  if (!db.empty()) {
    const StratumCountReport rep = verify_stratum_counts(db);
    for (const auto& r : rep.rows) {
      if (r.group == "total") continue;
      strata_out << p << ',' << r.group << ',' << r.observed_geometric << ',' << r.expected_geometric << ','
                 << r.observed_arithmetic << ',' << r.expected_arithmetic << '\n';
    }
  }
  for (auto* f : {&hist_out, &ks_out, &asym_out, &strata_out}) {
    f->flush();
    if (!*f) throw std::runtime_error("io-failure while writing CSV files in " + out_dir);
  }
}

}  // namespace qdb
