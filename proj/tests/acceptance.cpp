// Copyright 2026 The tiknib Authors. All Rights Reserved.
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

// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria. argv[1] is a scratch directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "handcounts.hpp"
#include "helpers.hpp"
#include "tiknib/evaluate.hpp"
#include "tiknib/features.hpp"
#include "tiknib/minibench.hpp"
#include "tiknib/pipeline.hpp"
#include "tiknib/scoring.hpp"
#include "tiknib/search.hpp"
#include "tiknib/store.hpp"
#include "tiknib/util.hpp"

using namespace tiknib;

namespace {

// Tolerances and thresholds.
constexpr double kRealTol = 1e-12;
constexpr double kMetricSeconds = 10.0;
constexpr int kAucInstances = 1000;
constexpr std::size_t kAucMaxScores = 500;
constexpr int kGreedyTrials = 100;
constexpr double kAucO2O3 = 0.90;
constexpr double kAucO0O3 = 0.80;
constexpr double kPipelineSeconds = 300.0;
constexpr double kTypeLift = 0.02;
constexpr int kSearchTrials = 50;
constexpr std::size_t kMinDecoys = 500;
constexpr double kSearchRate = 0.85;
constexpr unsigned kFolds = 10;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

// ---- 1 -------------------------------------------------------------------

double brute_auc(const std::vector<double>& s, const std::vector<bool>& pos) {
  double hits = 0, total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (pos[j]) continue;
      total += 1;
      hits += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return hits / total;
}

Outcome metric_oracles() {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  int checked = 0;
  auto expect = [&](const std::string& what, double got, double want) {
    ++checked;
    if (!(std::abs(got - want) <= kRealTol)) {
      o.pass = false;
      o.detail += what + "=" + std::to_string(got) + " (want " + std::to_string(want) + "); ";
    }
  };
  expect("delta(2,4)", relative_difference(2, 4), 0.5);
  expect("delta(7,7)", relative_difference(7, 7), 0.0);
  expect("delta(0,0)", relative_difference(0, 0), 0.0);
  expect("delta(0,5)", relative_difference(0, 5), 1.0);

  FeatureVector a, b;
  a.set(0, 8);
  b.set(0, 10);
  a.set(1, 6);
  b.set(1, 10);
  expect("sim{0.2,0.4}", similarity(a, b, {0, 1}), 0.7);
  expect("sim(a,a)", similarity(a, a, {0, 1}), 1.0);
  FeatureVector z, f;
  z.set(0, 0);
  f.set(0, 5);
  expect("sim(0,5)", similarity(z, f, {0}), 0.0);

  FeatureVector q4, t4, n8, q10, t10, n9;
  q4.set(0, 4);
  t4.set(0, 4);
  n8.set(0, 8);
  q10.set(0, 10);
  t10.set(0, 10);
  n9.set(0, 9);
  expect("gap one", tp_tn_gap({{&q4, &t4, &n8}}, 0), 0.5);
  expect("gap TP=TN", tp_tn_gap({{&q4, &n8, &n8}, {&q4, &t4, &t4}}, 0), 0.0);
  expect("gap mean", tp_tn_gap({{&q4, &t4, &n8}, {&q10, &t10, &n9}}, 0), 0.3);

  expect("auc perfect", roc_auc({0.9, 0.8, 0.3, 0.2}, {true, true, false, false}), 1.0);
  expect("auc ties", roc_auc({0.5, 0.5, 0.5, 0.5}, {true, false, true, false}), 0.5);
  expect("auc 3/4", roc_auc({0.9, 0.6, 0.4, 0.2}, {true, false, true, false}), 0.75);
  expect("ap perfect", average_precision({4, 3, 2, 1}, {true, true, false, false}), 1.0);
  expect("ap [-,+]", average_precision({2, 1}, {false, true}), 0.5);
  expect("ap [+,-,+]", average_precision({3, 2, 1}, {true, false, true}), (1.0 + 2.0 / 3.0) / 2);

  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int round = 0; round < kAucInstances; ++round) {
    std::size_t n = 2 + rng() % (kAucMaxScores - 1);
    unsigned grid = round % 2 ? 8 : 1u << 30;
    std::vector<double> s(n);
    std::vector<bool> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % grid) / grid;
      pos[i] = rng() % 2;
    }
    pos[rng() % n] = true;
    std::size_t neg = rng() % n;
    while (pos[neg] && std::count(pos.begin(), pos.end(), false) == 0) {
      pos[neg] = false;
    }
    if (std::abs(roc_auc(s, pos) - brute_auc(s, pos)) > kRealTol) ++mismatches;
  }
  double secs = seconds_since(t0);
  if (mismatches) o.pass = false;
  if (secs >= kMetricSeconds) o.pass = false;
  o.detail += std::to_string(checked) + " examples, " + std::to_string(kAucInstances - mismatches) + "/" +
              std::to_string(kAucInstances) + " brute-force AUC matches, " + fmt(secs) + " s";
  return o;
}

// ---- 2 -------------------------------------------------------------------

Outcome feature_oracles() {
  Outcome o;
  int cfg_ok = 0, cg_ok = 0, cfg_total = 0, cg_total = 0;
  auto extract = [](const std::string& rel) {
    std::vector<SkipEntry> skipped;
    CompileConfig cfg = test::config("gcc", OptLevel::O0, "fixtures");
    std::map<std::string, FunctionRecord> out;
    for (auto& r : extract_binary(test::built(rel), cfg, GroupTables::builtin(), skipped)) out[r.symbol] = r;
    return out;
  };
  for (const auto& hc : test::cfg_hand_counts()) {
    auto recs = extract(hc.fixture);
    const auto& fv = recs.at(hc.function).features;
    for (std::size_t i = 0; i < kNumCfgFeatures; ++i) {
      ++cfg_total;
      if (fv.has(i) && std::abs(fv[i] - hc.cfg[i]) <= kRealTol) {
        ++cfg_ok;
      } else {
        o.pass = false;
        o.detail += std::string(hc.function) + "." + std::string(feature_names()[i]) + "; ";
      }
    }
  }
  auto calls = extract("x86/calls.o");
  for (const auto& hc : test::cg_hand_counts()) {
    const auto& fv = calls.at(hc.function).features;
    for (std::size_t i = 0; i < kNumCgFeatures; ++i) {
      ++cg_total;
      if (fv.has(kNumCfgFeatures + i) && fv[kNumCfgFeatures + i] == hc.cg[i]) {
        ++cg_ok;
      } else {
        o.pass = false;
        o.detail += std::string(hc.function) + "." + std::string(feature_names()[kNumCfgFeatures + i]) + "; ";
      }
    }
  }
  o.detail += std::to_string(cfg_ok) + "/" + std::to_string(cfg_total) + " CFG values, " + std::to_string(cg_ok) +
              "/" + std::to_string(cg_total) + " CG values";
  return o;
}

// ---- 3 -------------------------------------------------------------------

Outcome greedy_monotonicity() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> val(0.0, 30.0);
  int monotone = 0, planted_trials = 0, planted_first = 0;
  for (int trial = 0; trial < kGreedyTrials; ++trial) {
    const std::size_t queries = 20 + rng() % 61;
    std::vector<std::size_t> pool = presemantic_features();
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::size_t> candidates(pool.begin(), pool.begin() + 8 + rng() % 8);
    const bool plant = trial % 2 == 0;
    const std::size_t separator = candidates[rng() % candidates.size()];

    std::vector<FunctionRecord> ds;
    PairSet ps;
    auto cfg = test::config("gcc", OptLevel::O0);
    for (std::size_t q = 0; q < queries; ++q) {
      std::array<FunctionRecord, 3> trio;
      for (int role = 0; role < 3; ++role) {
        trio[role] = test::record("f" + std::to_string(q * 3 + role), static_cast<std::uint32_t>(q * 3 + role + 1), cfg);
        for (auto c : candidates) trio[role].features.set(c, std::round(val(rng)));
      }
      // TPs are noisy copies of their query so that features carry signal.
      for (auto c : candidates) {
        if (rng() % 3) trio[1].features.set(c, trio[0].features[c] + static_cast<double>(rng() % 3));
      }
      if (plant) {
        trio[0].features.set(separator, 1);
        trio[1].features.set(separator, 1);
        trio[2].features.set(separator, 0);
      }
      std::size_t base = ds.size();
      for (auto& r : trio) ds.push_back(std::move(r));
      ps.pairs.push_back({base, base + 1, Label::TP});
      ps.pairs.push_back({base, base + 2, Label::TN});
    }
    Model m = greedy_select(ds, ps, candidates);
    bool ok = !m.train_auc_trace.empty() && m.train_auc_trace[0] == 0.5;
    for (std::size_t i = 1; i < m.train_auc_trace.size(); ++i) {
      ok = ok && m.train_auc_trace[i] > m.train_auc_trace[i - 1];
    }
    monotone += ok;
    if (plant) {
      ++planted_trials;
      planted_first += !m.selected.empty() && m.selected[0] == separator;
    }
  }
  o.pass = monotone == kGreedyTrials && planted_first == planted_trials;
  o.detail = std::to_string(monotone) + "/" + std::to_string(kGreedyTrials) + " strictly increasing traces, " +
             std::to_string(planted_first) + "/" + std::to_string(planted_trials) + " planted separators selected first";
  return o;
}

// ---- shared minibench run ------------------------------------------------

struct Bench {
  std::vector<FunctionRecord> records;
  double build_seconds = 0;
  double extract_seconds = 0;
  std::size_t binaries = 0;
  std::size_t skipped_cells = 0;
};

Bench build_bench(const std::filesystem::path& work) {
  Bench b;
  auto t0 = std::chrono::steady_clock::now();
  BuildOptions opt;
  opt.out_dir = work / "bins";
  opt.jobs = 0;
  auto built = build_matrix(std::filesystem::path(TIKNIB_MINIBENCH_DIR) / "default.matrix", opt);
  b.build_seconds = seconds_since(t0);
  b.binaries = built.entries.size();
  b.skipped_cells = built.skipped.size();
  t0 = std::chrono::steady_clock::now();
  auto ex = extract_manifest(built.entries);
  b.extract_seconds = seconds_since(t0);
  b.records = std::move(ex.records);
  return b;
}

KFoldResult run_kfold(const Bench& b, const std::string& test, const std::vector<std::size_t>& feats) {
  KFoldOptions opt;
  opt.k = kFolds;
  opt.seed = kSeed;
  return kfold_evaluate(b.records, *TestSpec::builtin(test), feats, opt);
}

// ---- 4 -------------------------------------------------------------------

Outcome headline(const Bench& b, const KFoldResult& o2o3, const KFoldResult& o0o3, double eval_seconds) {
  Outcome o;
  double total = b.build_seconds + b.extract_seconds + eval_seconds;
  o.pass = b.binaries == 40 && o2o3.mean_auc >= kAucO2O3 && o0o3.mean_auc >= kAucO0O3 &&
           o0o3.mean_auc < o2o3.mean_auc && total < kPipelineSeconds;
  o.detail = std::to_string(b.binaries) + " binaries, " + std::to_string(b.records.size()) +
             " functions; O2-vs-O3 AUC " + fmt(o2o3.mean_auc) + " (>= " + fmt(kAucO2O3) + "), O0-vs-O3 AUC " +
             fmt(o0o3.mean_auc) + " (>= " + fmt(kAucO0O3) + ", below O2-vs-O3); " + fmt(total) + " s";
  return o;
}

// ---- 5 -------------------------------------------------------------------

Outcome type_lift(const KFoldResult& pre, const KFoldResult& all) {
  Outcome o;
  const double lift = all.mean_auc - pre.mean_auc;
  std::size_t full = 0;
  std::string missing;
  for (const auto& f : all.folds) {
    std::set<std::size_t> sel(f.model.selected.begin(), f.model.selected.end());
    std::string absent;
    for (auto t : type_features()) {
      if (!sel.count(t)) absent += (absent.empty() ? "" : ",") + std::string(feature_names()[t]);
    }
    if (absent.empty()) {
      ++full;
    } else {
      missing += " fold " + std::to_string(f.fold) + " lacks " + absent + ";";
    }
  }
  o.pass = lift >= kTypeLift && full == all.folds.size();
  o.detail = "lift " + fmt(lift) + " (" + fmt(pre.mean_auc) + " -> " + fmt(all.mean_auc) + ", need >= " +
             fmt(kTypeLift) + "); all three type features in " + std::to_string(full) + "/" +
             std::to_string(all.folds.size()) + " folds" + missing;
  return o;
}

// ---- 6 -------------------------------------------------------------------

Outcome search_trials(const Bench& b, const KFoldResult& o2o3) {
  Outcome o;
  const auto& ds = b.records;
  auto folds = assign_folds(ds, kFolds, kSeed);
  std::map<unsigned, const Model*> model_of;
  for (const auto& f : o2o3.folds) model_of[f.fold] = &f.model;

  auto with_opt = [](CompileConfig c, OptLevel l) {
    c.opt_level = l;
    return c.options_key();
  };
  // (query index, planted match index) with the match under the same
  // toolchain at O3.
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  std::map<std::pair<std::string, std::string>, std::size_t> o3;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].config.opt_level == OptLevel::O3) o3[{ds[i].identity().key(), ds[i].config.options_key()}] = i;
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].config.opt_level != OptLevel::O2) continue;
    auto it = o3.find({ds[i].identity().key(), with_opt(ds[i].config, OptLevel::O3)});
    if (it != o3.end()) candidates.emplace_back(i, it->second);
  }
  if (candidates.empty()) return {false, "no O2 query has an O3 copy"};

  int hits = 0, tied_misses = 0;
  std::size_t min_decoys = static_cast<std::size_t>(-1);
  for (int trial = 0; trial < kSearchTrials; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
    auto [qi, mi] = candidates[rng() % candidates.size()];
    const auto id = ds[qi].identity();
    std::vector<FunctionRecord> corpus = {ds[mi]};
    for (const auto& r : ds) {
      if (r.identity() != id) corpus.push_back(r);
    }
    std::shuffle(corpus.begin(), corpus.end(), rng);
    min_decoys = std::min(min_decoys, corpus.size() - 1);
    const Model& model = *model_of.at(folds[qi]);
    auto ranking = rank_functions(ds[qi].features, corpus, model,
                                  [&](const FunctionRecord& r) { return r.identity() == id; });
    hits += ranking.rank_of_match == 1u;
    if (ranking.rank_of_match && *ranking.rank_of_match > 1 &&
        ranking.entries[*ranking.rank_of_match - 1].score == ranking.entries[0].score) {
      ++tied_misses;
    }
  }
  const double rate = static_cast<double>(hits) / kSearchTrials;
  o.pass = min_decoys >= kMinDecoys && rate >= kSearchRate;
  o.detail = std::to_string(hits) + "/" + std::to_string(kSearchTrials) + " at rank 1 (" + fmt(rate) + ", need >= " +
             fmt(kSearchRate) + "), at least " + std::to_string(min_decoys) + " decoys per trial; " +
             std::to_string(tied_misses) + " misses are score ties with the top decoy";
  return o;
}

// ---- 7 -------------------------------------------------------------------

Outcome determinism(const std::filesystem::path& work) {
  Outcome o;
  const std::string cli = TIKNIB_CLI;
  const std::string matrix = (std::filesystem::path(TIKNIB_MINIBENCH_DIR) / "default.matrix").string();
  const char* artifacts[] = {"features.jsonl", "features.jsonl.report.json", "report.csv", "models.json",
                             "model.json"};
  for (const char* run : {"run-a", "run-b"}) {
    auto dir = work / run;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string d = "'" + dir.string() + "'";
    const std::string jobs = std::string(run) == "run-a" ? " --jobs 1" : " --jobs 2";
    const std::vector<std::string> steps = {
        cli + " build '" + matrix + "' --out " + d + "/bins" + jobs,
        cli + " extract " + d + "/bins/manifest.jsonl --out " + d + "/features.jsonl" + jobs,
        cli + " eval " + d + "/features.jsonl --test O0-vs-O3 --features all --seed 7 --out " + d +
            "/report.csv --models " + d + "/models.json" + jobs,
        cli + " train " + d + "/features.jsonl --test O2-vs-O3 --seed 7 --out " + d + "/model.json" + jobs,
    };
    for (const auto& step : steps) {
      auto r = test::sh(step, true);
      if (r.status != 0) return {false, "command failed: " + step + "\n" + r.text};
    }
  }
  int same = 0;
  for (const char* a : artifacts) {
    if (read_file(work / "run-a" / a) == read_file(work / "run-b" / a)) {
      ++same;
    } else {
      o.pass = false;
      o.detail += std::string(a) + " differs; ";
    }
  }
  o.detail += std::to_string(same) + "/" + std::to_string(std::size(artifacts)) +
              " artifacts byte-identical across two runs (jobs 1 and 2)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path work = argc > 1 ? argv[1] : "acceptance-work";
  std::filesystem::remove_all(work);
  std::filesystem::create_directories(work);

  report(1, "metric oracles", guarded(metric_oracles));
  report(2, "CFG/CG feature oracles", guarded(feature_oracles));
  report(3, "greedy monotonicity", guarded(greedy_monotonicity));

  Bench bench;
  KFoldResult o2o3, o0o3, o0o3_all;
  double eval_seconds = 0;
  Outcome setup = guarded([&] {
    bench = build_bench(work / "bench");
    auto t0 = std::chrono::steady_clock::now();
    o2o3 = run_kfold(bench, "O2-vs-O3", presemantic_features());
    o0o3 = run_kfold(bench, "O0-vs-O3", presemantic_features());
    eval_seconds = seconds_since(t0);
    o0o3_all = run_kfold(bench, "O0-vs-O3", all_features());
    return Outcome{};
  });
  if (setup.pass) {
    report(4, "minibench optimization ordering", guarded([&] { return headline(bench, o2o3, o0o3, eval_seconds); }));
    report(5, "type-feature lift", guarded([&] { return type_lift(o0o3, o0o3_all); }));
    report(6, "planted-match search", guarded([&] { return search_trials(bench, o2o3); }));
  } else {
    report(4, "minibench optimization ordering", setup);
    report(5, "type-feature lift", setup);
    report(6, "planted-match search", setup);
  }
  report(7, "pipeline determinism", guarded([&] { return determinism(work / "determinism"); }));

  std::printf("%d of 7 criteria failed\n", failures);
  return failures;
}
