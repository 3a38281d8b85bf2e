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

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "tiknib/evaluate.hpp"
#include "tiknib/scoring.hpp"
#include "tiknib/store.hpp"

using namespace tiknib;
using test::config;
using test::error_of;
using test::record;

namespace {

constexpr double kTol = 1e-12;

// O(P*N) pairwise count, ties as one half.
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

// Synthetic dataset: `ids` functions in package "pkg", each under the given
// configs, with features that drift from the function's base values as the
// optimization level grows.
std::vector<FunctionRecord> synthetic(int ids, const std::vector<CompileConfig>& configs,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> base(1.0, 50.0);
  std::uniform_real_distribution<double> noise(0.8, 1.25);
  std::vector<FunctionRecord> out;
  for (int f = 0; f < ids; ++f) {
    std::vector<double> b(kNumPresemantic);
    for (auto& x : b) x = std::round(base(rng));
    std::uint64_t addr = 0x1000;
    for (const auto& cfg : configs) {
      auto r = record("fn" + std::to_string(f), static_cast<std::uint32_t>(10 + f), cfg, addr += 64);
      for (std::size_t i = 0; i < kNumPresemantic; ++i) {
        double scale = static_cast<int>(cfg.opt_level) == 0 ? 1.0 : noise(rng);
        r.features.set(i, std::round(b[i] * scale));
      }
      out.push_back(r);
    }
  }
  return out;
}

std::vector<CompileConfig> four_configs() {
  return {config("gcc", OptLevel::O0), config("gcc", OptLevel::O3), config("clang", OptLevel::O0),
          config("clang", OptLevel::O3)};
}

}  // namespace

TEST_CASE("config filters") {
  auto gcc3 = config("gcc", OptLevel::O3);
  auto clang0 = config("clang", OptLevel::O0);
  clang0.extra = {ExtraFlag::pie};
  auto f = ConfigFilter::parse("opt_level=O3");
  CHECK(f.matches(gcc3));
  CHECK_FALSE(f.matches(clang0));
  CHECK(ConfigFilter::parse("compiler=gcc|clang").matches(clang0));
  CHECK(ConfigFilter::parse("compiler=gcc && opt_level!=O0").matches(gcc3));
  CHECK_FALSE(ConfigFilter::parse("compiler=gcc,opt_level!=O3").matches(gcc3));
  CHECK(ConfigFilter::parse("").matches(gcc3));
  CHECK(ConfigFilter::parse("*").matches(clang0));
  CHECK(ConfigFilter::parse("extra=pie").matches(clang0));
  CHECK_FALSE(ConfigFilter::parse("extra=pie").matches(gcc3));
  CHECK(error_of([] { ConfigFilter::parse("colour=red"); }) == ErrorCode::Parse);
  CHECK(error_of([] { ConfigFilter::parse("opt_level"); }) == ErrorCode::Parse);
}

TEST_CASE("test specs") {
  auto spec = TestSpec::parse("# custom\nname = mine\nsource = compiler=gcc\ntarget = compiler=clang, opt_level=O3\n");
  CHECK(spec.name == "mine");
  CHECK(spec.source.matches(config("gcc", OptLevel::O1)));
  CHECK(spec.target.matches(config("clang", OptLevel::O3)));
  CHECK_FALSE(spec.target.matches(config("clang", OptLevel::O2)));
  CHECK(error_of([] { TestSpec::parse("name = x\nsource = opt_level=O0\n"); }) == ErrorCode::Parse);
  CHECK(error_of([] { TestSpec::parse("colour = red\n"); }) == ErrorCode::Parse);

  auto o0o3 = TestSpec::builtin("O0-vs-O3");
  REQUIRE(o0o3);
  CHECK(o0o3->source.matches(config("gcc", OptLevel::O0)));
  CHECK(o0o3->target.matches(config("clang", OptLevel::O3)));
  CHECK(TestSpec::builtin("gcc-vs-clang"));
  CHECK(TestSpec::builtin("all-vs-all"));
  CHECK_FALSE(TestSpec::builtin("O0-vs-O9"));
  CHECK_FALSE(TestSpec::builtin("gcc-vs-gcc"));
}

TEST_CASE("generate_pairs: only choices") {
  auto o1 = config("gcc", OptLevel::O1);
  auto o2 = config("gcc", OptLevel::O2);
  std::vector<FunctionRecord> ds = {record("f", 1, o1), record("g", 2, o1), record("f", 1, o2),
                                    record("g", 2, o2)};
  auto ps = generate_pairs(ds, ConfigFilter::parse("opt_level=O1"), ConfigFilter::parse("opt_level=O2"), 3);
  REQUIRE(ps.pairs.size() == 4);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_query;
  for (std::size_t i = 0; i < ps.pairs.size(); i += 2) {
    CHECK(ps.pairs[i].label == Label::TP);
    CHECK(ps.pairs[i + 1].label == Label::TN);
    CHECK(ps.pairs[i].query == ps.pairs[i + 1].query);
    by_query[ps.pairs[i].query] = {ps.pairs[i].candidate, ps.pairs[i + 1].candidate};
  }
  CHECK(by_query.at(0) == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(by_query.at(1) == std::pair<std::size_t, std::size_t>{3, 2});
  CHECK(ps.positives() == 2);
  CHECK(ps.negatives() == 2);
}

TEST_CASE("generate_pairs: functions without a target copy are skipped") {
  auto o0 = config("gcc", OptLevel::O0);
  auto o3 = config("gcc", OptLevel::O3);
  std::vector<FunctionRecord> ds = {record("f", 1, o0), record("inlined", 2, o0), record("f", 1, o3),
                                    record("g", 3, o3)};
  auto ps = generate_pairs(ds, ConfigFilter::parse("opt_level=O0"), ConfigFilter::parse("opt_level=O3"), 1);
  REQUIRE(ps.pairs.size() == 2);
  CHECK(ps.pairs[0].query == 0);
  CHECK(ps.pairs[0].candidate == 2);
  CHECK(ps.pairs[1].candidate == 3);
  CHECK(error_of([&] {
          generate_pairs(ds, ConfigFilter::parse("opt_level=O1"), ConfigFilter::parse("opt_level=O3"), 1);
        }) == ErrorCode::EmptySelection);
}

TEST_CASE("generate_pairs invariants and determinism") {
  std::vector<CompileConfig> cfgs = four_configs();
  cfgs.push_back(config("gcc", OptLevel::O2));
  auto ds = synthetic(40, cfgs, 5);
  // Drop some records so that not every identity exists everywhere.
  std::vector<FunctionRecord> sparse;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i % 7 != 3) sparse.push_back(ds[i]);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto any = ConfigFilter::parse("*");
    auto ps = generate_pairs(sparse, any, ConfigFilter::parse("opt_level=O0|O3"), seed);
    auto again = generate_pairs(sparse, any, ConfigFilter::parse("opt_level=O0|O3"), seed);
    REQUIRE(ps.pairs.size() == again.pairs.size());
    std::set<FunctionIdentity> queried;
    for (std::size_t i = 0; i < ps.pairs.size(); i += 2) {
      const auto& tp = ps.pairs[i];
      const auto& tn = ps.pairs[i + 1];
      CHECK(tp.query == again.pairs[i].query);
      CHECK(tp.candidate == again.pairs[i].candidate);
      CHECK(tn.candidate == again.pairs[i + 1].candidate);
      const auto& q = sparse[tp.query];
      CHECK(match_pairs_identity(q, sparse[tp.candidate]));
      CHECK_FALSE(q.config.same_options(sparse[tp.candidate].config));
      CHECK_FALSE(match_pairs_identity(q, sparse[tn.candidate]));
      CHECK(sparse[tn.candidate].config.same_options(sparse[tp.candidate].config));
      CHECK(queried.insert(q.identity()).second);
    }
  }
}

TEST_CASE("roc_auc examples") {
  CHECK(roc_auc({0.9, 0.8, 0.3, 0.2}, {true, true, false, false}) == 1.0);
  CHECK(roc_auc({0.4, 0.4, 0.4}, {true, false, true}) == 0.5);
  CHECK(std::abs(roc_auc({0.9, 0.6, 0.4, 0.2}, {true, false, true, false}) - 0.75) < kTol);
  CHECK(error_of([] { roc_auc({0.1, 0.2}, {true, true}); }) == ErrorCode::DegenerateLabels);
  CHECK(error_of([] { roc_auc({}, {}); }) == ErrorCode::DegenerateLabels);
}

TEST_CASE("roc_auc matches a brute-force pairwise count") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 1000; ++round) {
    std::size_t n = 2 + rng() % 499;
    // Coarse grid for some rounds so that ties are common.
    unsigned grid = round % 2 ? 10 : 1000000;
    std::vector<double> s(n);
    std::vector<bool> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % grid) / grid;
      pos[i] = rng() % 2;
    }
    pos[0] = true;
    pos[1] = false;
    REQUIRE(std::abs(roc_auc(s, pos) - brute_auc(s, pos)) < kTol);
  }
}

TEST_CASE("average_precision examples") {
  CHECK(average_precision({4, 3, 2, 1}, {true, true, false, false}) == 1.0);
  CHECK(std::abs(average_precision({2, 1}, {false, true}) - 0.5) < kTol);
  CHECK(std::abs(average_precision({3, 2, 1}, {true, false, true}) - (1.0 + 2.0 / 3.0) / 2) < kTol);
  // Ties keep input order.
  CHECK(std::abs(average_precision({1, 1}, {false, true}) - 0.5) < kTol);
  CHECK(average_precision({1, 1}, {true, false}) == 1.0);
  CHECK(error_of([] { average_precision({1}, {false}); }) == ErrorCode::DegenerateLabels);
}

namespace {

// Three queries, each with a TP and a TN; per-feature values are chosen
// directly so that the per-pair deltas are known.
struct GreedyFixture {
  std::vector<FunctionRecord> ds;
  PairSet ps;

  // values: {query, tp, tn} for each feature index
  explicit GreedyFixture(const std::map<std::size_t, std::array<double, 3>>& values) {
    auto cfg = config("gcc", OptLevel::O0);
    for (int q = 0; q < 3; ++q) {
      for (int role = 0; role < 3; ++role) {
        auto r = record("f" + std::to_string(q * 3 + role), static_cast<std::uint32_t>(q * 3 + role + 1), cfg);
        for (const auto& [i, v] : values) r.features.set(i, v[role]);
        ds.push_back(r);
      }
      std::size_t b = static_cast<std::size_t>(q) * 3;
      ps.pairs.push_back({b, b + 1, Label::TP});
      ps.pairs.push_back({b, b + 2, Label::TN});
    }
  }
};

}  // namespace

TEST_CASE("greedy_select examples") {
  const std::size_t A = require_feature("num_bbs");
  const std::size_t B = require_feature("num_edges");

  SUBCASE("no candidates") {
    GreedyFixture fx({{A, {1, 1, 0}}});
    auto m = greedy_select(fx.ds, fx.ps, {});
    CHECK(m.selected.empty());
    CHECK(m.train_auc_trace == std::vector<double>{0.5});
  }
  SUBCASE("a separating feature beats a constant one") {
    // A: delta 0 on TPs, 1 on TNs. B: delta 0.5 everywhere.
    GreedyFixture fx({{A, {1, 1, 0}}, {B, {1, 2, 2}}});
    auto tp = fx.ds[0].features, tn = fx.ds[2].features;
    CHECK(relative_difference(tp[A], fx.ds[1].features[A]) == 0.0);
    CHECK(relative_difference(tp[A], tn[A]) == 1.0);
    CHECK(roc_auc(score_pairs(fx.ds, fx.ps, {A}), {true, false, true, false, true, false}) == 1.0);
    CHECK(roc_auc(score_pairs(fx.ds, fx.ps, {A, B}), {true, false, true, false, true, false}) <= 1.0);
    auto m = greedy_select(fx.ds, fx.ps, {B, A});
    CHECK(m.selected == std::vector<std::size_t>{A});
    CHECK(m.train_auc_trace == std::vector<double>{0.5, 1.0});
  }
  SUBCASE("identical features: the lexicographically smaller name wins") {
    GreedyFixture fx({{A, {1, 1, 0}}, {B, {1, 1, 0}}});
    auto m = greedy_select(fx.ds, fx.ps, {B, A});
    CHECK(m.selected == std::vector<std::size_t>{A});
  }
  SUBCASE("empty pair set") {
    GreedyFixture fx({{A, {1, 1, 0}}});
    PairSet none;
    CHECK(error_of([&] { greedy_select(fx.ds, none, {A}); }) == ErrorCode::NoCandidates);
  }
}

TEST_CASE("greedy trace is strictly increasing and independent of jobs") {
  auto ds = synthetic(60, four_configs(), 21);
  auto ps = generate_pairs(ds, ConfigFilter::parse("opt_level=O0"), ConfigFilter::parse("opt_level=O3"), 2);
  auto m1 = greedy_select(ds, ps, presemantic_features(), 1);
  auto m3 = greedy_select(ds, ps, presemantic_features(), 3);
  CHECK(m1.selected == m3.selected);
  CHECK(m1.train_auc_trace == m3.train_auc_trace);
  REQUIRE(m1.train_auc_trace.size() == m1.selected.size() + 1);
  CHECK(m1.train_auc_trace[0] == 0.5);
  for (std::size_t i = 1; i < m1.train_auc_trace.size(); ++i) {
    CHECK(m1.train_auc_trace[i] > m1.train_auc_trace[i - 1] + 1e-6);
  }
  // The trace entries are the AUC of each selected prefix.
  std::vector<bool> labels;
  for (const auto& p : ps.pairs) labels.push_back(p.label == Label::TP);
  for (std::size_t n = 1; n <= m1.selected.size(); ++n) {
    std::vector<std::size_t> prefix(m1.selected.begin(), m1.selected.begin() + n);
    CHECK(std::abs(roc_auc(score_pairs(ds, ps, prefix), labels) - m1.train_auc_trace[n]) < kTol);
  }
}

TEST_CASE("fold assignment") {
  auto cfgs = four_configs();
  cfgs.push_back(config("gcc", OptLevel::O2));
  SUBCASE("ten identities in ten folds") {
    auto ds = synthetic(10, cfgs, 1);
    auto folds = assign_folds(ds, 10, 42);
    std::map<unsigned, std::set<std::string>> ids;
    for (std::size_t i = 0; i < ds.size(); ++i) ids[folds[i]].insert(ds[i].identity().key());
    CHECK(ids.size() == 10);
    for (const auto& [f, s] : ids) CHECK(s.size() == 1);
  }
  SUBCASE("records of one identity share a fold") {
    auto ds = synthetic(37, cfgs, 2);
    auto folds = assign_folds(ds, 10, 5);
    std::map<std::string, std::set<unsigned>> where;
    for (std::size_t i = 0; i < ds.size(); ++i) where[ds[i].identity().key()].insert(folds[i]);
    for (const auto& [id, s] : where) CHECK(s.size() == 1);
    CHECK(assign_folds(ds, 10, 5) == folds);
  }
  SUBCASE("too few groups") {
    auto ds = synthetic(9, cfgs, 3);
    CHECK(error_of([&] { assign_folds(ds, 10, 0); }) == ErrorCode::TooFewGroups);
  }
}

TEST_CASE("kfold_evaluate") {
  auto ds = synthetic(50, four_configs(), 8);
  auto spec = *TestSpec::builtin("O0-vs-O3");
  KFoldOptions opt;
  opt.k = 5;
  opt.seed = 9;
  auto res = kfold_evaluate(ds, spec, presemantic_features(), opt);
  REQUIRE(res.folds.size() == 5);
  double sum = 0;
  std::size_t test_pairs = 0;
  for (const auto& f : res.folds) {
    CHECK(f.test_auc >= 0.0);
    CHECK(f.test_auc <= 1.0);
    CHECK(f.n_train_pairs > 0);
    CHECK(f.n_test_pairs > 0);
    CHECK(f.gaps.size() == presemantic_features().size());
    CHECK(f.model.fold == f.fold);
    sum += f.test_auc;
    test_pairs += f.n_test_pairs;
  }
  CHECK(std::abs(res.mean_auc - sum / 5) < kTol);
  // One query per identity, each with a TP and a TN, across the test folds.
  CHECK(test_pairs == 2 * 50);
  CHECK(res.mean_auc > 0.8);

  opt.jobs = 3;
  auto par = kfold_evaluate(ds, spec, presemantic_features(), opt);
  CHECK(report_to_csv(par) == report_to_csv(res));

  opt.k = 60;
  CHECK(error_of([&] { kfold_evaluate(ds, spec, presemantic_features(), opt); }) == ErrorCode::TooFewGroups);
}
