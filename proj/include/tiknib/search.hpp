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

#ifndef TIKNIB_SEARCH_HPP
#define TIKNIB_SEARCH_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "tiknib/evaluate.hpp"
#include "tiknib/features.hpp"
#include "tiknib/groundtruth.hpp"

namespace tiknib {

struct RankedEntry {
  std::size_t record = 0;  // index into the corpus
  double score = 0;
};

struct Ranking {
  std::vector<RankedEntry> entries;        // descending score
  std::optional<std::size_t> rank_of_match;  // 1-based
};

enum class Aggregate { mean, max };

using MatchPredicate = std::function<bool(const FunctionRecord&)>;

// Scores every corpus record against the query with the model's features.
// Ties are broken by (binary, address), then options and symbol, so the order
// is total. Throws Error(EmptyModel) or Error(EmptyCorpus).
Ranking rank_functions(const FeatureVector& query, const std::vector<FunctionRecord>& corpus,
                       const Model& model, const MatchPredicate& is_match = {}, unsigned jobs = 1);

// Several query variants of one function; per-record scores are combined by
// `aggregate` before ranking.
Ranking rank_functions(const std::vector<const FeatureVector*>& queries,
                       const std::vector<FunctionRecord>& corpus, const Model& model,
                       Aggregate aggregate, const MatchPredicate& is_match = {}, unsigned jobs = 1);

// Fraction of rankings whose match is within the top k; absent matches miss.
double precision_at_k(const std::vector<std::optional<std::size_t>>& ranks_of_match, std::size_t k);

}  // namespace tiknib

#endif  // TIKNIB_SEARCH_HPP
