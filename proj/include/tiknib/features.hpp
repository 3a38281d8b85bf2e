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

#ifndef TIKNIB_FEATURES_HPP
#define TIKNIB_FEATURES_HPP

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiknib/binloader.hpp"
#include "tiknib/cfg.hpp"

namespace tiknib {

inline constexpr std::size_t kNumFeatures = 50;
inline constexpr std::size_t kNumCfgFeatures = 41;
inline constexpr std::size_t kNumCgFeatures = 6;
inline constexpr std::size_t kNumPresemantic = kNumCfgFeatures + kNumCgFeatures;

// Canonical feature dictionary, in storage order: 41 CFG-level, then 6
// CG-level, then the 3 type features.
const std::array<std::string_view, kNumFeatures>& feature_names();
std::optional<std::size_t> feature_index(std::string_view name);
// Throws Error(MissingFeature) for a name outside the dictionary.
std::size_t require_feature(std::string_view name);

std::vector<std::size_t> presemantic_features();
std::vector<std::size_t> type_features();
std::vector<std::size_t> all_features();

// Parses a --features argument: comma-separated names and the sets `all`,
// `presemantic` and `type`; a leading `+type` (or `...,+type`) appends the
// type features. Result keeps dictionary order and has no duplicates.
std::vector<std::size_t> parse_feature_list(std::string_view spec);

struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  std::bitset<kNumFeatures> available;

  bool has(std::size_t i) const { return available.test(i); }
  double operator[](std::size_t i) const { return values[i]; }
  void set(std::size_t i, double v) {
    values[i] = v;
    available.set(i);
  }
  double get(std::string_view name) const;
  // Copies every feature available in `other`.
  void merge(const FeatureVector& other);

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract_cfg_features(const FunctionCFG& cfg, const LoopInfo& loops);
// Throws Error(UnknownFunction) when `function` is not a node of `cg`.
FeatureVector extract_cg_features(const CallGraph& cg, const std::string& function);
FeatureVector extract_type_features(const TypeSignature& sig);

}  // namespace tiknib

#endif  // TIKNIB_FEATURES_HPP
