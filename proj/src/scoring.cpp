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

#include "tiknib/scoring.hpp"

#include <cmath>
#include <string>

#include "tiknib/error.hpp"

namespace tiknib {

double relative_difference(double a, double b) {
  if (!(a >= 0) || !(b >= 0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::NegativeFeature,
                "relative_difference(" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  const double m = std::max(a, b);
  if (m == 0) return 0.0;
  return std::fabs(a - b) / m;
}

double similarity(const FeatureVector& a, const FeatureVector& b,
                  const std::vector<std::size_t>& feats) {
  if (feats.empty()) throw Error(ErrorCode::EmptyFeatureSet, "similarity over no features");
  double sum = 0;
  for (std::size_t f : feats) {
    if (f >= kNumFeatures || !a.has(f) || !b.has(f)) {
      throw Error(ErrorCode::MissingFeature,
                  f < kNumFeatures ? std::string(feature_names()[f]) : std::to_string(f));
    }
    sum += relative_difference(a[f], b[f]);
  }
  return 1.0 - sum / static_cast<double>(feats.size());
}

double similarity_available(const FeatureVector& a, const FeatureVector& b,
                            const std::vector<std::size_t>& feats) {
  double sum = 0;
  std::size_t used = 0;
  for (std::size_t f : feats) {
    if (!a.has(f) || !b.has(f)) continue;
    sum += relative_difference(a[f], b[f]);
    ++used;
  }
  if (used == 0) return 0.0;
  return 1.0 - sum / static_cast<double>(used);
}

double tp_tn_gap(const std::vector<Triple>& triples, std::size_t feature) {
  double sum = 0;
  std::size_t used = 0;
  for (const auto& t : triples) {
    if (!t.query->has(feature) || !t.tp->has(feature) || !t.tn->has(feature)) continue;
    double q = (*t.query)[feature];
    sum += relative_difference(q, (*t.tn)[feature]) - relative_difference(q, (*t.tp)[feature]);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::EmptyInput, "tp_tn_gap over no triples");
  return sum / static_cast<double>(used);
}

}  // namespace tiknib
