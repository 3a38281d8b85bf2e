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

#include "tiknib/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tiknib/error.hpp"

namespace tiknib {

namespace {

constexpr std::array<std::string_view, kNumFeatures> kNames = {
    // CFG structure
    "num_bbs", "num_edges", "num_loops", "num_inter_loops", "num_sccs", "num_back_edges",
    "avg_edges_per_bb",
    "sum_bb_size", "avg_bb_size", "sum_loop_size", "avg_loop_size", "sum_scc_size",
    "avg_scc_size",
    // instruction groups
    "num_inst", "num_arith", "num_dtransfer", "num_cmp", "num_logic", "num_shift",
    "num_bitmanip", "num_float", "num_misc", "num_arith_shift", "num_dtransfer_misc",
    "num_ctransfer", "num_ctransfer_cond", "num_ctransfer_uncond",
    "avg_inst", "avg_arith", "avg_dtransfer", "avg_cmp", "avg_logic", "avg_shift",
    "avg_bitmanip", "avg_float", "avg_misc", "avg_arith_shift", "avg_dtransfer_misc",
    "avg_ctransfer", "avg_ctransfer_cond", "avg_ctransfer_uncond",
    // call graph
    "num_callers", "num_callees", "num_imported_callees", "num_incoming_calls",
    "num_outgoing_calls", "num_imported_calls",
    // type signature
    "t_nargs", "t_args", "t_ret"};

static_assert(kNames[kNumFeatures - 1] == "t_ret");
static_assert(kNames[kNumCfgFeatures] == "num_callers");

constexpr std::size_t kInstBase = 13;  // index of num_inst
constexpr std::size_t kAvgBase = kInstBase + 14;

double ratio(double num, std::size_t den) { return den == 0 ? 0.0 : num / static_cast<double>(den); }

}  // namespace

const std::array<std::string_view, kNumFeatures>& feature_names() { return kNames; }

std::optional<std::size_t> feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (kNames[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t require_feature(std::string_view name) {
  auto i = feature_index(name);
  if (!i) throw Error(ErrorCode::MissingFeature, "unknown feature " + std::string(name));
  return *i;
}

std::vector<std::size_t> presemantic_features() {
  std::vector<std::size_t> out(kNumPresemantic);
  for (std::size_t i = 0; i < kNumPresemantic; ++i) out[i] = i;
  return out;
}

std::vector<std::size_t> type_features() { return {47, 48, 49}; }

std::vector<std::size_t> all_features() {
  std::vector<std::size_t> out(kNumFeatures);
  for (std::size_t i = 0; i < kNumFeatures; ++i) out[i] = i;
  return out;
}

std::vector<std::size_t> parse_feature_list(std::string_view spec) {
  std::set<std::size_t> chosen;
  auto add = [&](const std::vector<std::size_t>& v) { chosen.insert(v.begin(), v.end()); };
  bool any = false;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    // `presemantic+type` and `+type` both append the type features.
    if (auto plus = item.find("+type"); plus != std::string_view::npos && plus + 5 == item.size()) {
      add(type_features());
      item = item.substr(0, plus);
      if (item.empty()) {
        if (!any) add(presemantic_features());
        any = true;
        continue;
      }
    }
    any = true;
    if (item == "all") {
      add(all_features());
    } else if (item == "presemantic") {
      add(presemantic_features());
    } else if (item == "type") {
      add(type_features());
    } else {
      chosen.insert(require_feature(item));
    }
  }
  if (chosen.empty()) throw Error(ErrorCode::EmptyFeatureSet, "no features in '" + std::string(spec) + "'");
  return {chosen.begin(), chosen.end()};
}

double FeatureVector::get(std::string_view name) const {
  std::size_t i = require_feature(name);
  if (!has(i)) throw Error(ErrorCode::MissingFeature, std::string(name) + " unavailable");
  return values[i];
}

void FeatureVector::merge(const FeatureVector& other) {
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (other.has(i)) set(i, other.values[i]);
  }
}

FeatureVector extract_cfg_features(const FunctionCFG& cfg, const LoopInfo& loops) {
  FeatureVector fv;
  const std::size_t bbs = cfg.blocks.size();
  std::array<double, kNumGroups> groups{};
  double total = 0;
  for (const auto& bb : cfg.blocks) {
    for (const auto& ins : bb.instrs) {
      groups[static_cast<int>(ins.group)] += 1;
      total += 1;
    }
  }
  double loop_blocks = 0;
  for (const auto& l : loops.loops) loop_blocks += static_cast<double>(l.size());
  double scc_blocks = 0;
  for (const auto& s : loops.sccs) scc_blocks += static_cast<double>(s.size());

  fv.set(0, static_cast<double>(bbs));
  fv.set(1, static_cast<double>(cfg.edges.size()));
  fv.set(2, static_cast<double>(loops.loops.size()));
  fv.set(3, static_cast<double>(loops.inter_loops));
  fv.set(4, static_cast<double>(loops.sccs.size()));
  fv.set(5, static_cast<double>(loops.back_edges.size()));
  fv.set(6, ratio(static_cast<double>(cfg.edges.size()), bbs));
  fv.set(7, total);
  fv.set(8, ratio(total, bbs));
  fv.set(9, loop_blocks);
  fv.set(10, ratio(loop_blocks, loops.loops.size()));
  fv.set(11, scc_blocks);
  fv.set(12, ratio(scc_blocks, loops.sccs.size()));

  auto g = [&](Group x) { return groups[static_cast<int>(x)]; };
  const std::array<double, 14> counts = {
      total,
      g(Group::arith),
      g(Group::data_transfer),
      g(Group::cmp),
      g(Group::logic),
      g(Group::shift),
      g(Group::bitmanip),
      g(Group::fp),
      g(Group::misc),
      g(Group::arith) + g(Group::shift),
      g(Group::data_transfer) + g(Group::misc),
      g(Group::ctransfer_cond) + g(Group::ctransfer_uncond),
      g(Group::ctransfer_cond),
      g(Group::ctransfer_uncond)};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    fv.set(kInstBase + i, counts[i]);
    fv.set(kAvgBase + i, ratio(counts[i], bbs));
  }
  return fv;
}

FeatureVector extract_cg_features(const CallGraph& cg, const std::string& function) {
  if (cg.nodes.count(function) == 0) {
    throw Error(ErrorCode::UnknownFunction, function + " is not in the call graph");
  }
  std::size_t callers = 0, callees = 0, imported_callees = 0;
  double incoming = 0, outgoing = 0, imported_calls = 0;
  for (const auto& [key, count] : cg.edges) {
    const auto& [caller, callee] = key;
    if (callee == function && cg.imported.count(callee) == 0) {
      ++callers;
      incoming += count;
    }
    if (caller == function) {
      outgoing += count;
      if (cg.imported.count(callee)) {
        ++imported_callees;
        imported_calls += count;
      } else {
        ++callees;
      }
    }
  }
  FeatureVector fv;
  fv.set(kNumCfgFeatures + 0, static_cast<double>(callers));
  fv.set(kNumCfgFeatures + 1, static_cast<double>(callees));
  fv.set(kNumCfgFeatures + 2, static_cast<double>(imported_callees));
  fv.set(kNumCfgFeatures + 3, incoming);
  fv.set(kNumCfgFeatures + 4, outgoing);
  fv.set(kNumCfgFeatures + 5, imported_calls);
  return fv;
}

FeatureVector extract_type_features(const TypeSignature& sig) {
  FeatureVector fv;
  double product = 1;
  for (unsigned id : sig.arg_type_ids) product *= id;
  fv.set(47, static_cast<double>(sig.n_args));
  fv.set(48, product);
  fv.set(49, static_cast<double>(sig.return_type_id));
  return fv;
}

}  // namespace tiknib
