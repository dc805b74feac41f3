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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "qdb/census.hpp"
#include "qdb/dedup_store.hpp"
#include "qdb/families.hpp"
#include "qdb/invariants.hpp"
#include "qdb/stats.hpp"
#include "qdb/twists.hpp"

namespace {

using namespace qdb;

void print_record(const CensusRecord& r) {
  std::cout << "key      " << to_text(r.key) << '\n';
  std::cout << "stratum  " << stratum_info(r.stratum).name << '\n';
  std::cout << "twists   " << r.twists.size() << '\n';
  for (const auto& t : r.twists) {
    std::cout << "  " << to_text(t.quartic) << "  points=" << t.points
              << "  rational_aut=" << unsigned{t.rational_aut_order} << '\n';
  }
}

std::vector<std::uint8_t> parse_params(const std::string& text, unsigned p) {
  std::vector<std::uint8_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    long long v = std::stoll(item);
    out.push_back(PrimeField(p).from_int(v));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Census of smooth plane quartics over prime fields"};
  app.require_subcommand(1);

  CensusConfig cfg;
  std::string store_name = "open-addressing";
  bool quiet = false;
  auto* enumerate = app.add_subcommand("enumerate", "Run the census and write a database");
  enumerate->add_option("--p", cfg.p, "prime, 7 < p < 256")->required();
  enumerate->add_option("--out", cfg.out_path, "database path")->required();
  enumerate->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  enumerate->add_option("--epsilon", cfg.epsilon, "bucket overhead (0 = Poisson rule)");
  enumerate->add_option("--seed", cfg.seed, "seed for coboundary sampling");
  enumerate->add_option("--store", store_name, "dedup store")->check(CLI::IsMember({"open-addressing", "map"}));
  enumerate->add_option("--max-dim", cfg.max_dim, "skip strata of larger dimension");
  enumerate->add_flag("--quiet", quiet, "no progress output");

  std::string db_path, key_text, out_dir;
  auto* lookup_cmd = app.add_subcommand("lookup", "Print the record of a canonical key");
  lookup_cmd->add_option("--db", db_path)->required();
  lookup_cmd->add_option("--key", key_text, "\"(v1:...:v13)\"")->required();

  auto* stats_cmd = app.add_subcommand("stats", "Write trace statistics as CSV");
  stats_cmd->add_option("--db", db_path)->required();
  stats_cmd->add_option("--out-dir", out_dir)->required();

  auto* verify_cmd = app.add_subcommand("verify", "Compare stratum counts with the closed formulas");
  verify_cmd->add_option("--db", db_path)->required();

  unsigned p = 0;
  std::string stratum_token, params_text;
  std::size_t family = 0;
  std::uint64_t seed = 0x5eed;
  auto* twists_cmd = app.add_subcommand("twists", "Twists of one family member");
  twists_cmd->add_option("--p", p)->required();
  twists_cmd->add_option("--stratum", stratum_token, "triv, c2, d4, c3, d8, s3, c6, g16, s4, c9, g48, g96, g168")
      ->required();
  twists_cmd->add_option("--family", family, "family index within the stratum");
  twists_cmd->add_option("--params", params_text, "comma-separated parameter values");
  twists_cmd->add_option("--seed", seed);

  std::string curve_text;
  auto* inv_cmd = app.add_subcommand("invariants", "Invariants of a quartic given as \"p=11;c1,...,c15\"");
  inv_cmd->add_option("--curve", curve_text)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enumerate) {
      cfg.store = store_name == "map" ? StoreKind::Map : StoreKind::OpenAddressing;
      if (!quiet) cfg.log = [](const std::string& m) { std::cerr << m << std::endl; };
      CensusResult r = run_census(cfg);
      std::cout << "records " << r.db.size() << " (expected " << r.expected_records << ")\n";
      std::cout << "twists  " << r.db.total_twists() << '\n';
      std::cout << "seconds " << r.seconds << '\n';
      if (cfg.max_dim >= 6 && !r.complete) {
        std::cerr << "incomplete-census: " << r.db.size() << " of " << r.expected_records << " classes found\n";
        return 2;
      }
      return 0;
    }
    if (*lookup_cmd) {
      Database db = read_db(db_path);
      try {
        print_record(lookup(db, parse_key(key_text)));
      } catch (const KeyNotFound& e) {
        std::cerr << e.what() << '\n';
        return 1;
      }
      return 0;
    }
    if (*stats_cmd) {
      Database db = read_db(db_path);
      emit_csv(db, out_dir);
      MeanTrace m = mean_normalized_trace(db);
      std::printf("classes %llu\nmean normalized trace %.12g (sum %lld / %llu / sqrt(%u))\n",
                  static_cast<unsigned long long>(m.count), m.normalized(), m.trace_sum,
                  static_cast<unsigned long long>(m.count), m.p);
      return 0;
    }
    if (*verify_cmd) {
      Database db = read_db(db_path);
      StratumCountReport rep = verify_stratum_counts(db);
      std::printf("%-6s %12s %12s %12s %12s  %s\n", "group", "geom", "expected", "arith", "expected", "ok");
      for (const auto& row : rep.rows) {
        std::printf("%-6s %12llu %12llu %12llu %12llu  %s\n", row.group.c_str(),
                    static_cast<unsigned long long>(row.observed_geometric),
                    static_cast<unsigned long long>(row.expected_geometric),
                    static_cast<unsigned long long>(row.observed_arithmetic),
                    static_cast<unsigned long long>(row.expected_arithmetic), row.match() ? "yes" : "NO");
      }
      return rep.all_match() ? 0 : 1;
    }
    if (*twists_cmd) {
      auto sid = parse_stratum(stratum_token);
      if (!sid) throw std::invalid_argument("unknown stratum token " + stratum_token);
      StratumEnumerator en(p, *sid);
      FamilyCandidate c = en.make(family, parse_params(params_text, p));
      std::cout << "curve    " << to_text(c.quartic) << '\n';
      auto key = invariant_engine(p).key_if_smooth(c.quartic);
      if (!key) throw std::invalid_argument("the curve is singular");
      std::mt19937_64 rng(seed);
      print_record(CensusRecord{*key, *sid, census_twists(c, rng)});
      return 0;
    }
    if (*inv_cmd) {
      TernaryQuartic F = parse_quartic(curve_text);
      DOInvariants inv = dixmier_ohno(F);
      for (int i = 0; i < kNumInvariants; ++i) std::cout << kInvariantNames[i] << " = " << unsigned{inv.v[i]} << '\n';
      if (inv.v[kNumInvariants - 1] == 0) {
        std::cout << "singular\n";
      } else {
        std::cout << "key " << to_text(normalize(inv, F.p)) << '\n';
        std::cout << "points " << count_points(F) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
