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

#include "tiknib/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tiknib/error.hpp"
#include "tiknib/features.hpp"
#include "tiknib/scoring.hpp"
#include "tiknib/util.hpp"

namespace tiknib {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ConfigFilter ConfigFilter::parse(std::string_view text) {
  ConfigFilter filter;
  std::string normalized(text);
  for (std::size_t at; (at = normalized.find("&&")) != std::string::npos;) normalized.replace(at, 2, ",");
  for (std::string_view part : split(normalized, ',')) {
    part = trim(part);
    if (part.empty() || part == "*") continue;
    Clause clause;
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::Parse, "filter clause '" + std::string(part) + "' lacks field=value");
    }
    std::string_view field = part.substr(0, eq);
    if (field.back() == '!') {
      clause.negated = true;
      field.remove_suffix(1);
    }
    clause.field = std::string(trim(field));
    const auto& names = config_field_names();
    if (std::find(names.begin(), names.end(), clause.field) == names.end()) {
      throw Error(ErrorCode::Parse, "unknown config field '" + clause.field + "'");
    }
    for (std::string_view v : split(part.substr(eq + 1), '|')) {
      v = trim(v);
      if (!v.empty()) clause.values.emplace_back(v);
    }
    if (clause.values.empty()) {
      throw Error(ErrorCode::Parse, "filter clause '" + std::string(part) + "' has no values");
    }
    filter.clauses_.push_back(std::move(clause));
  }
  return filter;
}

bool ConfigFilter::matches(const CompileConfig& config) const {
  for (const auto& c : clauses_) {
    bool hit = false;
    for (const auto& v : c.values) {
      if (c.field == "extra") {
        // `extra=pie` tests membership; `extra=none` tests emptiness.
        if (v == "none") {
          hit = config.extra.empty();
        } else if (auto flag = parse_extra_flag(v)) {
          hit = config.extra.count(*flag) > 0;
        }
      } else {
        hit = config_field(config, c.field) == v;
      }
      if (hit) break;
    }
    if (hit == c.negated) return false;
  }
  return true;
}

std::string ConfigFilter::to_string() const {
  if (clauses_.empty()) return "*";
  std::string out;
  for (const auto& c : clauses_) {
    if (!out.empty()) out += ',';
    out += c.field;
    out += c.negated ? "!=" : "=";
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (i) out += '|';
      out += c.values[i];
    }
  }
  return out;
}

TestSpec TestSpec::parse(std::string_view text) {
  TestSpec spec;
  bool have_source = false, have_target = false;
  int lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "test spec line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key == "name") {
      spec.name = std::string(value);
    } else if (key == "source") {
      spec.source = ConfigFilter::parse(value);
      have_source = true;
    } else if (key == "target") {
      spec.target = ConfigFilter::parse(value);
      have_target = true;
    } else {
      throw Error(ErrorCode::Parse, "test spec line " + std::to_string(lineno) + ": unknown key " +
                                        std::string(key));
    }
  }
  if (!have_source || !have_target) throw Error(ErrorCode::Parse, "test spec needs source and target");
  if (spec.name.empty()) spec.name = spec.source.to_string() + "-vs-" + spec.target.to_string();
  return spec;
}

std::optional<TestSpec> TestSpec::builtin(std::string_view name) {
  auto make = [&](std::string_view src, std::string_view tgt) {
    TestSpec s;
    s.name = std::string(name);
    s.source = ConfigFilter::parse(src);
    s.target = ConfigFilter::parse(tgt);
    return s;
  };
  auto opt = [](std::string_view s) -> std::optional<std::string> {
    if (s.size() == 2 && s[0] == 'O' && parse_opt_level(s)) return std::string(s);
    return std::nullopt;
  };
  if (auto vs = name.find("-vs-"); vs != std::string_view::npos) {
    std::string_view a = name.substr(0, vs), b = name.substr(vs + 4);
    if (opt(a) && opt(b)) {
      return make("opt_level=" + std::string(a), "opt_level=" + std::string(b));
    }
    if ((a == "gcc" || a == "clang") && (b == "gcc" || b == "clang") && a != b) {
      return make("compiler=" + std::string(a), "compiler=" + std::string(b));
    }
  }
  if (name == "pie-vs-nopie") return make("extra=pie", "extra!=pie");
  if (name == "all-vs-all") return make("*", "*");
  return std::nullopt;
}

std::size_t PairSet::positives() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const Pair& p) { return p.label == Label::TP; }));
}

std::size_t PairSet::negatives() const { return pairs.size() - positives(); }

namespace {

PairSet make_pairs(const std::vector<FunctionRecord>& dataset, const ConfigFilter& source,
                   const ConfigFilter& target, std::uint64_t seed, const PairOptions& options,
                   bool strict) {
  std::vector<std::size_t> pool;
  if (options.pool) {
    pool = *options.pool;
  } else {
    pool.resize(dataset.size());
    std::iota(pool.begin(), pool.end(), 0);
  }
  std::sort(pool.begin(), pool.end());

  // Identities and per-option TN pools, both in deterministic order.
  std::map<FunctionIdentity, std::vector<std::size_t>> by_identity;
  std::map<std::string, std::vector<std::size_t>> by_options;
  std::vector<std::string> options_key(dataset.size());
  bool any_source = false, any_target = false;
  for (std::size_t i : pool) {
    const auto& r = dataset[i];
    by_identity[r.identity()].push_back(i);
    options_key[i] = r.config.options_key();
    if (source.matches(r.config)) any_source = true;
    if (target.matches(r.config)) {
      any_target = true;
      by_options[options_key[i]].push_back(i);
    }
  }
  if (strict && (!any_source || !any_target)) {
    throw Error(ErrorCode::EmptySelection,
                std::string("no function matches the ") + (!any_source ? "source" : "target") +
                    " filter " + (!any_source ? source : target).to_string());
  }
  std::vector<std::uint32_t> identity_id(dataset.size(), 0);
  std::vector<const std::vector<std::size_t>*> groups;
  for (const auto& [id, members] : by_identity) {
    for (std::size_t i : members) identity_id[i] = static_cast<std::uint32_t>(groups.size());
    groups.push_back(&members);
  }

  Rng rng(seed);
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  if (order.size() > options.max_queries) {
    rng.shuffle(order);
    order.resize(options.max_queries);
    std::sort(order.begin(), order.end());
  }

  PairSet out;
  out.seed = seed;
  out.source_filter = source;
  out.target_filter = target;
  std::vector<std::size_t> scratch;
  for (std::size_t g : order) {
    const auto& members = *groups[g];
    scratch.clear();
    for (std::size_t i : members) {
      if (source.matches(dataset[i].config)) scratch.push_back(i);
    }
    if (scratch.empty()) continue;
    const std::size_t query = scratch[rng.index(scratch.size())];

    scratch.clear();
    for (std::size_t i : members) {
      if (i != query && target.matches(dataset[i].config) && options_key[i] != options_key[query]) {
        scratch.push_back(i);
      }
    }
    if (scratch.empty()) continue;
    const std::size_t tp = scratch[rng.index(scratch.size())];

    const auto& negatives = by_options[options_key[tp]];
    std::optional<std::size_t> tn;
    for (int attempt = 0; attempt < 32 && !tn; ++attempt) {
      std::size_t c = negatives[rng.index(negatives.size())];
      if (identity_id[c] != g) tn = c;
    }
    if (!tn) {
      scratch.clear();
      for (std::size_t c : negatives) {
        if (identity_id[c] != g) scratch.push_back(c);
      }
      if (scratch.empty()) continue;
      tn = scratch[rng.index(scratch.size())];
    }
    out.pairs.push_back({query, tp, Label::TP});
    out.pairs.push_back({query, *tn, Label::TN});
  }
  return out;
}

}  // namespace

PairSet generate_pairs(const std::vector<FunctionRecord>& dataset, const ConfigFilter& source,
                       const ConfigFilter& target, std::uint64_t seed, const PairOptions& options) {
  return make_pairs(dataset, source, target, seed, options, true);
}

double roc_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw std::invalid_argument("roc_auc: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_total = 0, neg_total = 0;
  for (bool p : positive) (p ? pos_total : neg_total) += 1;
  if (pos_total == 0 || neg_total == 0) {
    throw Error(ErrorCode::DegenerateLabels, "roc_auc needs both positive and negative labels");
  }
  // Walk tie groups in ascending score; every positive beats the negatives
  // strictly below and splits ties in its own group.
  double wins = 0, neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    double pos = 0, neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (positive[order[j]] ? pos : neg) += 1;
      ++j;
    }
    wins += pos * neg_below + 0.5 * pos * neg;
    neg_below += neg;
    i = j;
  }
  return wins / (pos_total * neg_total);
}

double average_precision(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw std::invalid_argument("average_precision: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double hits = 0, sum = 0;
  std::size_t negatives = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (positive[order[rank]]) {
      hits += 1;
      sum += hits / static_cast<double>(rank + 1);
    } else {
      ++negatives;
    }
  }
  if (hits == 0 || negatives == 0) {
    throw Error(ErrorCode::DegenerateLabels, "average_precision needs both positive and negative labels");
  }
  return sum / hits;
}

std::vector<double> score_pairs(const std::vector<FunctionRecord>& dataset, const PairSet& pairs,
                                const std::vector<std::size_t>& feats) {
  std::vector<double> out;
  out.reserve(pairs.pairs.size());
  for (const auto& p : pairs.pairs) {
    out.push_back(similarity_available(dataset[p.query].features, dataset[p.candidate].features, feats));
  }
  return out;
}

Model greedy_select(const std::vector<FunctionRecord>& dataset, const PairSet& train,
                    const std::vector<std::size_t>& candidates, unsigned jobs) {
  Model model;
  model.seed = train.seed;
  model.candidates = candidates;
  model.train_auc_trace.push_back(0.5);
  if (train.pairs.empty()) throw Error(ErrorCode::NoCandidates, "greedy_select: empty training set");
  std::vector<bool> positive;
  positive.reserve(train.pairs.size());
  for (const auto& p : train.pairs) positive.push_back(p.label == Label::TP);
  if (train.positives() == 0 || train.negatives() == 0) {
    throw Error(ErrorCode::DegenerateLabels, "greedy_select needs TP and TN pairs");
  }
  if (candidates.empty()) return model;

  const std::size_t n = train.pairs.size();
  const std::size_t m = candidates.size();
  // delta[c * n + p]; NaN marks a feature missing on either side.
  std::vector<double> delta(m * n);
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t f = candidates[c];
    for (std::size_t p = 0; p < n; ++p) {
      const auto& a = dataset[train.pairs[p].query].features;
      const auto& b = dataset[train.pairs[p].candidate].features;
      delta[c * n + p] = (a.has(f) && b.has(f)) ? relative_difference(a[f], b[f]) : kNaN;
    }
  }

  std::vector<double> sum(n, 0.0);
  std::vector<double> count(n, 0.0);
  std::vector<char> used(m, 0);
  double current = 0.5;
  std::vector<double> aucs(m);
  for (;;) {
    parallel_for(m, jobs, [&](std::size_t c) {
      if (used[c]) return;
      std::vector<double> scores(n);
      for (std::size_t p = 0; p < n; ++p) {
        double d = delta[c * n + p];
        double s = sum[p], k = count[p];
        if (!std::isnan(d)) {
          s += d;
          k += 1;
        }
        scores[p] = k == 0 ? 0.0 : 1.0 - s / k;
      }
      aucs[c] = roc_auc(scores, positive);
    });
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < m; ++c) {
      if (used[c]) continue;
      if (!best || aucs[c] > aucs[*best] ||
          (aucs[c] == aucs[*best] &&
           feature_names()[candidates[c]] < feature_names()[candidates[*best]])) {
        best = c;
      }
    }
    if (!best || !(aucs[*best] > current + 1e-6)) break;
    const std::size_t c = *best;
    used[c] = 1;
    for (std::size_t p = 0; p < n; ++p) {
      double d = delta[c * n + p];
      if (!std::isnan(d)) {
        sum[p] += d;
        count[p] += 1;
      }
    }
    current = aucs[c];
    model.selected.push_back(candidates[c]);
    model.train_auc_trace.push_back(current);
  }
  return model;
}

std::vector<unsigned> assign_folds(const std::vector<FunctionRecord>& dataset, unsigned k,
                                   std::uint64_t seed) {
  if (k == 0) throw Error(ErrorCode::TooFewGroups, "k must be positive");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) groups[dataset[i].identity().key()].push_back(i);
  if (groups.size() < k) {
    throw Error(ErrorCode::TooFewGroups, std::to_string(groups.size()) + " identity groups for " +
                                             std::to_string(k) + " folds");
  }
  std::vector<std::pair<std::uint64_t, const std::string*>> order;
  order.reserve(groups.size());
  for (const auto& [key, members] : groups) order.emplace_back(fnv1a64(key, seed), &key);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : *a.second < *b.second;
  });
  std::vector<unsigned> fold(dataset.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    for (std::size_t i : groups[*order[pos].second]) fold[i] = static_cast<unsigned>(pos % k);
  }
  return fold;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {kNaN, kNaN};
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

KFoldResult kfold_evaluate(const std::vector<FunctionRecord>& dataset, const TestSpec& spec,
                           const std::vector<std::size_t>& candidates, const KFoldOptions& options) {
  KFoldResult result;
  result.test = spec.name;
  result.candidates = candidates;
  auto fold = assign_folds(dataset, options.k, options.seed);
  // Surface an unusable test spec before any fold work.
  {
    bool src = false, tgt = false;
    for (const auto& r : dataset) {
      src = src || spec.source.matches(r.config);
      tgt = tgt || spec.target.matches(r.config);
    }
    if (!src || !tgt) {
      throw Error(ErrorCode::EmptySelection, "test " + spec.name + ": no function matches the " +
                                                 (!src ? "source" : "target") + " filter");
    }
  }

  std::vector<double> aucs, aps;
  for (unsigned f = 0; f < options.k; ++f) {
    std::vector<std::size_t> train_pool, test_pool;
    for (std::size_t i = 0; i < dataset.size(); ++i) (fold[i] == f ? test_pool : train_pool).push_back(i);

    std::set<FunctionIdentity> train_ids, test_ids;
    for (std::size_t i : train_pool) train_ids.insert(dataset[i].identity());
    for (std::size_t i : test_pool) test_ids.insert(dataset[i].identity());
    for (const auto& id : test_ids) {
      if (train_ids.count(id)) throw std::logic_error("fold " + std::to_string(f) + " leaks identity " + id.name);
    }

    PairOptions train_opts{&train_pool, options.train_cap};
    PairOptions test_opts{&test_pool};
    const std::uint64_t base = splitmix64(options.seed + 2ULL * f);
    PairSet train = make_pairs(dataset, spec.source, spec.target, base, train_opts, false);
    PairSet test = make_pairs(dataset, spec.source, spec.target, splitmix64(base + 1), test_opts, false);

    FoldResult fr;
    fr.fold = f;
    fr.model = greedy_select(dataset, train, candidates, options.jobs);
    fr.model.fold = f;
    fr.model.seed = options.seed;
    fr.model.test = spec.name;
    fr.n_train_pairs = train.pairs.size();
    fr.n_test_pairs = test.pairs.size();
    fr.test_auc = fr.test_ap = kNaN;
    if (test.positives() > 0 && test.negatives() > 0) {
      auto scores = score_pairs(dataset, test, fr.model.selected);
      std::vector<bool> positive;
      for (const auto& p : test.pairs) positive.push_back(p.label == Label::TP);
      fr.test_auc = roc_auc(scores, positive);
      fr.test_ap = average_precision(scores, positive);
      aucs.push_back(fr.test_auc);
      aps.push_back(fr.test_ap);
    }
    std::vector<Triple> triples;
    for (std::size_t p = 0; p + 1 < test.pairs.size(); p += 2) {
      triples.push_back({&dataset[test.pairs[p].query].features,
                         &dataset[test.pairs[p].candidate].features,
                         &dataset[test.pairs[p + 1].candidate].features});
    }
    for (std::size_t c : candidates) {
      try {
        fr.gaps.push_back(tp_tn_gap(triples, c));
      } catch (const Error&) {
        fr.gaps.push_back(std::nullopt);
      }
    }
    result.folds.push_back(std::move(fr));
  }
  std::tie(result.mean_auc, result.std_auc) = mean_std(aucs);
  std::tie(result.mean_ap, result.std_ap) = mean_std(aps);
  return result;
}

}  // namespace tiknib
