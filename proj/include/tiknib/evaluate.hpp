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

#ifndef TIKNIB_EVALUATE_HPP
#define TIKNIB_EVALUATE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiknib/config.hpp"
#include "tiknib/groundtruth.hpp"

namespace tiknib {

// Conjunction of config-field clauses such as `opt_level=O0`,
// `compiler=gcc|clang` or `extra!=lto`, separated by commas or `&&`.
// An empty filter (or `*`) accepts every config.
class ConfigFilter {
 public:
  struct Clause {
    std::string field;
    bool negated = false;
    std::vector<std::string> values;
  };

  static ConfigFilter parse(std::string_view text);  // throws Error(Parse)
  bool matches(const CompileConfig& config) const;
  std::string to_string() const;
  const std::vector<Clause>& clauses() const { return clauses_; }

 private:
  std::vector<Clause> clauses_;
};

// A named (source filter, target filter) test. The file form is
//   name   = O0-vs-O3
//   source = opt_level=O0
//   target = opt_level=O3
struct TestSpec {
  std::string name;
  ConfigFilter source;
  ConfigFilter target;

  static TestSpec parse(std::string_view text);
  // Built-in tests: Oi-vs-Oj for any two optimization levels, gcc-vs-clang,
  // clang-vs-gcc, pie-vs-nopie and all-vs-all.
  static std::optional<TestSpec> builtin(std::string_view name);
};

enum class Label { TP, TN };

struct Pair {
  std::size_t query = 0;      // index into the dataset
  std::size_t candidate = 0;  // index into the dataset
  Label label = Label::TP;
};

// Pairs come in (TP, TN) order per query.
struct PairSet {
  std::vector<Pair> pairs;
  std::uint64_t seed = 0;
  ConfigFilter source_filter;
  ConfigFilter target_filter;

  std::size_t positives() const;
  std::size_t negatives() const;
};

struct PairOptions {
  // Restrict queries and candidates to these dataset indices (all when null).
  const std::vector<std::size_t>* pool = nullptr;
  std::size_t max_queries = static_cast<std::size_t>(-1);
};

// One query per unique function identity with a record under `source`. The
// TP is a same-identity record under `target` built with other options; the
// TN is a different-identity record built with the TP's options. Throws
// Error(EmptySelection) when either filter selects nothing.
PairSet generate_pairs(const std::vector<FunctionRecord>& dataset, const ConfigFilter& source,
                       const ConfigFilter& target, std::uint64_t seed,
                       const PairOptions& options = {});

// Mann-Whitney AUC with ties counted as one half. Throws
// Error(DegenerateLabels) unless both classes occur.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& positive);
// Mean precision at each positive, descending score, ties in input order.
double average_precision(const std::vector<double>& scores, const std::vector<bool>& positive);

struct Model {
  std::string test;
  std::vector<std::size_t> selected;  // feature indices, in selection order
  std::vector<double> train_auc_trace;  // baseline 0.5 first
  std::vector<std::size_t> candidates;
  unsigned fold = 0;
  std::uint64_t seed = 0;
};

// Greedy forward selection maximizing training AUC; a candidate is accepted
// only when it raises AUC by more than 1e-6, ties go to the
// lexicographically smallest feature name. Throws Error(NoCandidates) when
// `train` has no pairs and Error(DegenerateLabels) when a class is missing.
Model greedy_select(const std::vector<FunctionRecord>& dataset, const PairSet& train,
                    const std::vector<std::size_t>& candidates, unsigned jobs = 1);

// Similarity scores of every pair under `feats` (unavailable features are
// skipped pairwise).
std::vector<double> score_pairs(const std::vector<FunctionRecord>& dataset, const PairSet& pairs,
                                const std::vector<std::size_t>& feats);

struct FoldResult {
  unsigned fold = 0;
  Model model;
  double test_auc = 0;
  double test_ap = 0;
  std::size_t n_train_pairs = 0;
  std::size_t n_test_pairs = 0;
  std::vector<std::optional<double>> gaps;  // per candidate, on test pairs
};

struct KFoldResult {
  std::string test;
  std::vector<std::size_t> candidates;
  std::vector<FoldResult> folds;
  double mean_auc = 0, std_auc = 0, mean_ap = 0, std_ap = 0;
};

struct KFoldOptions {
  unsigned k = 10;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t train_cap = 200000;
};

// Identity groups sorted by seeded hash and dealt round-robin into k folds.
// Returns fold id per dataset record. Throws Error(TooFewGroups).
std::vector<unsigned> assign_folds(const std::vector<FunctionRecord>& dataset, unsigned k,
                                   std::uint64_t seed);

KFoldResult kfold_evaluate(const std::vector<FunctionRecord>& dataset, const TestSpec& spec,
                           const std::vector<std::size_t>& candidates,
                           const KFoldOptions& options = {});

}  // namespace tiknib

#endif  // TIKNIB_EVALUATE_HPP
