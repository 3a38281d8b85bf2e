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

#include "tiknib/search.hpp"

#include <algorithm>
#include <tuple>

#include "tiknib/error.hpp"
#include "tiknib/scoring.hpp"
#include "tiknib/util.hpp"

namespace tiknib {

Ranking rank_functions(const FeatureVector& query, const std::vector<FunctionRecord>& corpus,
                       const Model& model, const MatchPredicate& is_match, unsigned jobs) {
  return rank_functions(std::vector<const FeatureVector*>{&query}, corpus, model, Aggregate::mean,
                        is_match, jobs);
}

Ranking rank_functions(const std::vector<const FeatureVector*>& queries,
                       const std::vector<FunctionRecord>& corpus, const Model& model,
                       Aggregate aggregate, const MatchPredicate& is_match, unsigned jobs) {
  if (model.selected.empty()) throw Error(ErrorCode::EmptyModel, "model selects no features");
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "search corpus is empty");
  if (queries.empty()) throw Error(ErrorCode::EmptyInput, "no query vectors");

  Ranking ranking;
  ranking.entries.resize(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    double combined = 0;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      double s = similarity_available(*queries[q], corpus[i].features, model.selected);
      if (aggregate == Aggregate::mean) {
        combined += s;
      } else {
        combined = q == 0 ? s : std::max(combined, s);
      }
    }
    if (aggregate == Aggregate::mean) combined /= static_cast<double>(queries.size());
    ranking.entries[i] = {i, combined};
  });

  std::vector<std::string> options(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) options[i] = corpus[i].config.options_key();
  auto key = [&](const RankedEntry& e) {
    const auto& r = corpus[e.record];
    return std::tuple<double, const std::string&, std::uint64_t, const std::string&,
                      const std::string&, std::size_t>(-e.score, r.config.binary, r.start_addr,
                                                       options[e.record], r.symbol, e.record);
  };
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [&](const RankedEntry& a, const RankedEntry& b) { return key(a) < key(b); });

  if (is_match) {
    for (std::size_t pos = 0; pos < ranking.entries.size(); ++pos) {
      if (is_match(corpus[ranking.entries[pos].record])) {
        ranking.rank_of_match = pos + 1;
        break;
      }
    }
  }
  return ranking;
}

double precision_at_k(const std::vector<std::optional<std::size_t>>& ranks_of_match, std::size_t k) {
  if (ranks_of_match.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : ranks_of_match) {
    if (r && *r <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ranks_of_match.size());
}

}  // namespace tiknib
