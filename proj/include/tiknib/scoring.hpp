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

#ifndef TIKNIB_SCORING_HPP
#define TIKNIB_SCORING_HPP

#include <cstddef>
#include <vector>

#include "tiknib/features.hpp"

namespace tiknib {

// |a - b| / max(a, b), with 0 for a == b == 0. Throws Error(NegativeFeature)
// for negative or non-finite input.
double relative_difference(double a, double b);

// 1 - mean relative difference over `feats`. Every feature must be available
// in both vectors: Error(EmptyFeatureSet) / Error(MissingFeature) otherwise.
double similarity(const FeatureVector& a, const FeatureVector& b,
                  const std::vector<std::size_t>& feats);

// Same as similarity() but features unavailable on either side are skipped;
// 0 when nothing remains.
double similarity_available(const FeatureVector& a, const FeatureVector& b,
                            const std::vector<std::size_t>& feats);

struct Triple {
  const FeatureVector* query = nullptr;
  const FeatureVector* tp = nullptr;
  const FeatureVector* tn = nullptr;
};

// Mean over triples of delta(query, TN) - delta(query, TP) for one feature.
// Triples lacking the feature on any side are skipped. Throws
// Error(EmptyInput) when no triple remains.
double tp_tn_gap(const std::vector<Triple>& triples, std::size_t feature);

}  // namespace tiknib

#endif  // TIKNIB_SCORING_HPP
