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

#include "handcounts.hpp"
#include "helpers.hpp"
#include "tiknib/error.hpp"
#include "tiknib/features.hpp"
#include "tiknib/pipeline.hpp"

using namespace tiknib;
using test::built;
using test::insn;

namespace {

std::map<std::string, FunctionRecord> extract(const std::string& rel) {
  std::vector<SkipEntry> skipped;
  CompileConfig cfg = test::config("gcc", OptLevel::O0, "fixtures");
  auto recs = extract_binary(built(rel), cfg, GroupTables::builtin(), skipped);
  REQUIRE(skipped.empty());
  std::map<std::string, FunctionRecord> out;
  for (auto& r : recs) out[r.symbol] = std::move(r);
  return out;
}

}  // namespace

TEST_CASE("feature dictionary") {
  CHECK(feature_names().size() == 50);
  CHECK(feature_names()[0] == "num_bbs");
  CHECK(feature_names()[41] == "num_callers");
  CHECK(feature_names()[49] == "t_ret");
  CHECK(presemantic_features().size() == 47);
  CHECK(type_features() == std::vector<std::size_t>{47, 48, 49});
  CHECK(parse_feature_list("all").size() == 50);
  CHECK(parse_feature_list("+type").size() == 50);
  CHECK(parse_feature_list("type") == type_features());
  CHECK(parse_feature_list("num_bbs,t_ret") == std::vector<std::size_t>{0, 49});
  CHECK_THROWS_AS(parse_feature_list("num_bogus"), Error);
  CHECK_THROWS_AS(parse_feature_list(""), Error);
}

TEST_CASE("CFG features of the assembly fixtures match hand counts") {
  for (const auto& hc : test::cfg_hand_counts()) {
    INFO(hc.function);
    auto recs = extract(hc.fixture);
    const FeatureVector& fv = recs.at(hc.function).features;
    for (std::size_t i = 0; i < 41; ++i) {
      INFO(feature_names()[i]);
      REQUIRE(fv.has(i));
      CHECK(fv[i] == doctest::Approx(hc.cfg[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("CG features of the three-function call fixture match hand counts") {
  auto recs = extract("x86/calls.o");
  for (const auto& hc : test::cg_hand_counts()) {
    INFO(hc.function);
    const FeatureVector& fv = recs.at(hc.function).features;
    for (std::size_t i = 0; i < 6; ++i) {
      INFO(feature_names()[41 + i]);
      CHECK(fv[41 + i] == hc.cg[i]);
    }
  }
}

TEST_CASE("extract_cfg_features: one block of [arith, arith, ret]") {
  auto g = build_cfg({insn(0, Group::arith), insn(1, Group::arith),
                      insn(2, Group::ctransfer_uncond, FlowKind::ret)});
  auto fv = extract_cfg_features(g, analyze_loops(g));
  CHECK(fv.get("num_bbs") == 1);
  CHECK(fv.get("num_edges") == 0);
  CHECK(fv.get("avg_edges_per_bb") == 0);
  CHECK(fv.get("num_arith") == 2);
  CHECK(fv.get("num_ctransfer_uncond") == 1);
  CHECK(fv.get("avg_arith") == 2.0);
  CHECK(fv.get("sum_bb_size") == 3);
  CHECK(fv.get("avg_bb_size") == 3.0);
  CHECK(fv.get("num_loops") == 0);
  CHECK(fv.get("avg_loop_size") == 0);  // empty average
}

TEST_CASE("extract_cfg_features: self loop") {
  auto g = build_cfg({insn(0, Group::arith), insn(1, Group::ctransfer_cond, FlowKind::jump, true, 0),
                      insn(2, Group::ctransfer_uncond, FlowKind::ret)});
  auto fv = extract_cfg_features(g, analyze_loops(g));
  CHECK(fv.get("num_loops") == 1);
  CHECK(fv.get("num_back_edges") == 1);
  CHECK(fv.get("sum_loop_size") == 1);
}

TEST_CASE("extract_cg_features examples") {
  CallGraph cg;
  cg.nodes = {"main", "foo", "f"};
  cg.imported = {"printf"};
  cg.edges[{"main", "foo"}] = 2;
  cg.edges[{"main", "printf"}] = 1;
  cg.edges[{"f", "f"}] = 1;
  auto at = [&](const std::string& fn) { return extract_cg_features(cg, fn); };
  auto m = at("main");
  CHECK(m.get("num_callers") == 0);
  CHECK(m.get("num_callees") == 1);
  CHECK(m.get("num_imported_callees") == 1);
  CHECK(m.get("num_incoming_calls") == 0);
  CHECK(m.get("num_outgoing_calls") == 3);
  CHECK(m.get("num_imported_calls") == 1);
  auto foo = at("foo");
  CHECK(foo.get("num_callers") == 1);
  CHECK(foo.get("num_incoming_calls") == 2);
  CHECK(foo.get("num_outgoing_calls") == 0);
  auto f = at("f");
  CHECK(f.get("num_callers") == 1);
  CHECK(f.get("num_callees") == 1);
  CHECK(f.get("num_incoming_calls") == 1);
  CHECK(f.get("num_outgoing_calls") == 1);
  CHECK_THROWS_AS(at("nope"), Error);
}

TEST_CASE("extract_type_features examples") {
  auto a = extract_type_features({2, {2, 5}, 5});
  CHECK(a.get("t_nargs") == 2);
  CHECK(a.get("t_args") == 10);
  CHECK(a.get("t_ret") == 5);
  auto b = extract_type_features({0, {}, 17});
  CHECK(b.get("t_args") == 1);
  CHECK(b.get("t_ret") == 17);
  auto c = extract_type_features({2, {13, 11}, 7});
  CHECK(c.get("t_args") == 13 * 11);
  CHECK(c.get("t_ret") == 7);
}

TEST_CASE("feature invariants on compiled fixtures") {
  std::size_t checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(built("objs"))) {
    std::vector<SkipEntry> skipped;
    auto recs = extract_binary(entry.path(), test::config("gcc", OptLevel::O2), GroupTables::builtin(), skipped);
    CHECK(skipped.empty());
    for (const auto& r : recs) {
      const auto& fv = r.features;
      for (std::size_t i = 0; i < kNumPresemantic; ++i) {
        REQUIRE(fv.has(i));
        CHECK(std::isfinite(fv[i]));
        CHECK(fv[i] >= 0);
      }
      // 8 non-control groups plus the two control groups add up to the total.
      double groups = 0;
      for (std::size_t i = 14; i <= 21; ++i) groups += fv[i];
      CHECK(groups + fv[25] + fv[26] == fv[13]);
      CHECK(fv.get("avg_bb_size") * fv.get("num_bbs") == doctest::Approx(fv.get("sum_bb_size")));
      CHECK(fv.get("sum_scc_size") == fv.get("num_bbs"));
      CHECK(fv.get("num_loops") <= fv.get("num_back_edges"));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("type features are unavailable without debug info") {
  auto recs = extract("x86/straight.o");
  const auto& fv = recs.at("straight").features;
  for (auto i : type_features()) CHECK_FALSE(fv.has(i));
}
