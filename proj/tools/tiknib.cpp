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

// tiknib: build, extract, eval, train, search and report subcommands.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include "tiknib/error.hpp"
#include "tiknib/evaluate.hpp"
#include "tiknib/features.hpp"
#include "tiknib/minibench.hpp"
#include "tiknib/pipeline.hpp"
#include "tiknib/search.hpp"
#include "tiknib/store.hpp"
#include "tiknib/util.hpp"

namespace fs = std::filesystem;
using namespace tiknib;

namespace {

struct Common {
  std::uint64_t seed = 0;
  unsigned folds = 10;
  unsigned jobs = 1;
  std::string features = "presemantic";
  std::string out;
};

TestSpec resolve_test(const std::string& name) {
  if (auto spec = TestSpec::builtin(name)) return *spec;
  if (fs::exists(name)) {
    TestSpec spec = TestSpec::parse(read_file(name));
    if (spec.name.empty()) spec.name = fs::path(name).stem().string();
    return spec;
  }
  throw Error(ErrorCode::Parse, "unknown test '" + name + "' (not a builtin and no such file)");
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    write_file_atomic(out, content);
}

int cmd_build(const std::string& matrix, const Common& c) {
  BuildOptions opts;
  opts.out_dir = c.out.empty() ? "minibench-out" : c.out;
  opts.jobs = c.jobs;
  BuildResult r = build_matrix(fs::path(matrix), opts);
  for (const auto& s : r.skipped) std::cerr << "skipped: " << s.cell << ": " << s.reason << "\n";
  std::cout << r.entries.size() << " binaries, " << r.skipped.size() << " skipped; manifest "
            << r.manifest.string() << "\n";
  return 0;
}

int cmd_extract(const std::string& manifest, const std::string& report, const std::string& truth,
                const Common& c) {
  ExtractOptions opts;
  opts.jobs = c.jobs;
  std::optional<GroupTables> tables;
  if (const char* env = std::getenv("TIKNIB_GROUP_TABLES"); env && *env) {
    tables = GroupTables::load(env);
    opts.tables = &*tables;
  }
  ExtractResult r = extract_manifest(read_manifest(manifest), opts);
  std::string out = c.out.empty() ? "features.jsonl" : c.out;
  write_file_atomic(out, records_to_jsonl(r.records));
  std::string report_path = report.empty() ? out + ".report.json" : report;
  write_file_atomic(report_path, extract_report_json(r));
  if (!truth.empty()) write_file_atomic(truth, groundtruth_to_jsonl(r.records));
  for (const auto& e : r.file_errors) std::cerr << "file error: " << e.binary << ": " << e.message << "\n";
  std::cout << r.records.size() << " functions kept of " << r.drops.input << "; "
            << r.decode_errors.size() << " decode errors, " << r.file_errors.size()
            << " file errors; report " << report_path << "\n";
  return 0;
}

int cmd_eval(const std::string& store, const std::string& test, const std::string& models_out,
             const Common& c) {
  auto dataset = read_store(store);
  KFoldOptions opts;
  opts.k = c.folds;
  opts.seed = c.seed;
  opts.jobs = c.jobs;
  KFoldResult r = kfold_evaluate(dataset, resolve_test(test), parse_feature_list(c.features), opts);
  emit(c.out, report_to_csv(r));
  if (!models_out.empty()) {
    std::vector<Model> models;
    for (const auto& f : r.folds) models.push_back(f.model);
    write_file_atomic(models_out, models_to_json(models));
  }
  std::cerr << r.test << ": auc " << format_double(r.mean_auc) << " +- " << format_double(r.std_auc)
            << ", ap " << format_double(r.mean_ap) << "\n";
  return 0;
}

int cmd_train(const std::string& store, const std::string& test, const Common& c) {
  auto dataset = read_store(store);
  TestSpec spec = resolve_test(test);
  PairSet pairs = generate_pairs(dataset, spec.source, spec.target, c.seed);
  Model m = greedy_select(dataset, pairs, parse_feature_list(c.features), c.jobs);
  m.test = spec.name;
  m.seed = c.seed;
  emit(c.out.empty() ? "model.json" : c.out, model_to_json(m));
  return 0;
}

int cmd_search(const std::string& store, const std::string& model_path, const std::string& name,
               const std::string& query_filter, const std::string& corpus_filter, unsigned fold,
               std::size_t k, const std::string& aggregate, const Common& c) {
  auto records = read_store(store);
  auto models = read_models(model_path);
  const Model* model = &models.front();
  for (const auto& m : models)
    if (m.fold == fold) model = &m;
  ConfigFilter qf = ConfigFilter::parse(query_filter);
  ConfigFilter cf = ConfigFilter::parse(corpus_filter);

  std::vector<const FunctionRecord*> queries;
  for (const auto& r : records)
    if ((r.name == name || r.symbol == name) && qf.matches(r.config)) queries.push_back(&r);
  if (queries.empty()) throw Error(ErrorCode::EmptySelection, "no record matches query '" + name + "'");
  const FunctionIdentity id = queries.front()->identity();

  std::vector<FunctionRecord> corpus;
  for (const auto& r : records) {
    bool is_query = false;
    for (const auto* q : queries) is_query |= q == &r;
    if (!is_query && cf.matches(r.config)) corpus.push_back(r);
  }
  std::vector<const FeatureVector*> qv;
  for (const auto* q : queries) qv.push_back(&q->features);
  auto match = [&](const FunctionRecord& r) { return r.identity() == id; };
  Ranking ranking = rank_functions(qv, corpus, *model, aggregate == "max" ? Aggregate::max : Aggregate::mean,
                                   match, c.jobs);

  std::ostringstream out;
  out << "rank\tscore\tpackage\tbinary\tfunction\tsource\toptions\taddr\tmatch\n";
  for (std::size_t i = 0; i < ranking.entries.size() && i < k; ++i) {
    const auto& e = ranking.entries[i];
    const auto& r = corpus[e.record];
    out << i + 1 << "\t" << format_double(e.score) << "\t" << r.config.package << "\t" << r.config.binary
        << "\t" << r.symbol << "\t" << r.source_file << ":" << r.source_line << "\t"
        << r.config.options_key() << "\t0x" << std::hex << r.start_addr << std::dec << "\t"
        << (match(r) ? 1 : 0) << "\n";
  }
  nlohmann::ordered_json summary;
  summary["query"] = name;
  summary["query_records"] = queries.size();
  summary["corpus"] = corpus.size();
  summary["rank_of_match"] = ranking.rank_of_match ? nlohmann::ordered_json(*ranking.rank_of_match)
                                                   : nlohmann::ordered_json(nullptr);
  summary["precision_at_1"] = precision_at_k({ranking.rank_of_match}, 1);
  summary["precision_at_k"] = precision_at_k({ranking.rank_of_match}, k);
  out << summary.dump() << "\n";
  emit(c.out, out.str());
  return 0;
}

// Collects the closing mean row of each eval CSV into one summary table.
int cmd_report(const std::vector<std::string>& csvs, const Common& c) {
  std::string out = "test,auc,auc_std,ap,ap_std,n_selected,selected\n";
  for (const auto& path : csvs) {
    std::istringstream in(read_file(path));
    std::string header, line, last;
    std::getline(in, header);
    while (std::getline(in, line))
      if (!line.empty()) last = line;
    if (last.empty()) throw Error(ErrorCode::Parse, path + ": no rows");
    std::vector<std::string> cols;
    std::stringstream ls(last);
    for (std::string f; std::getline(ls, f, ',');) cols.push_back(f);
    if (cols.size() < 10) throw Error(ErrorCode::Parse, path + ": malformed report row");
    out += cols[0] + "," + cols[2] + "," + cols[4] + "," + cols[3] + "," + cols[5] + "," + cols[8] + "," +
           cols[9] + "\n";
  }
  emit(c.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tiknib: interpretable binary code similarity with presemantic features"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub, bool with_features) {
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
    sub->add_option("--out", c.out, "output path");
    if (with_features) {
      sub->add_option("--folds", c.folds, "number of cross-validation folds");
      sub->add_option("--features", c.features, "feature list: names, all, presemantic, type or +type");
    }
  };

  std::string matrix = "minibench/default.matrix";
  auto* build = app.add_subcommand("build", "compile the fixture matrix into labeled binaries");
  build->add_option("matrix", matrix, "matrix file");
  common(build, false);

  std::string manifest, report, truth;
  auto* extract = app.add_subcommand("extract", "extract the feature store from a manifest");
  extract->add_option("manifest", manifest, "manifest JSONL")->required();
  extract->add_option("--report", report, "drop and error report (default <out>.report.json)");
  extract->add_option("--groundtruth", truth, "also write the ground-truth manifest");
  common(extract, false);

  std::string store, test, models_out;
  auto* eval = app.add_subcommand("eval", "k-fold greedy selection and test AUC for one test");
  eval->add_option("store", store, "feature store")->required();
  eval->add_option("--test", test, "builtin test name or test spec file")->required();
  eval->add_option("--models", models_out, "write the per-fold models");
  common(eval, true);

  auto* train = app.add_subcommand("train", "select features on the whole store for one test");
  train->add_option("store", store, "feature store")->required();
  train->add_option("--test", test, "builtin test name or test spec file")->required();
  common(train, true);

  std::string model, name, qfilter, cfilter, aggregate = "mean";
  unsigned fold = 0;
  std::size_t k = 10;
  auto* search = app.add_subcommand("search", "rank the corpus against a query function");
  search->add_option("store", store, "feature store")->required();
  search->add_option("--model", model, "model JSON")->required();
  search->add_option("--query", name, "function name or symbol")->required();
  search->add_option("--query-config", qfilter, "config filter selecting the query records");
  search->add_option("--corpus", cfilter, "config filter selecting the corpus");
  search->add_option("--fold", fold, "model fold to use from a multi-model file");
  search->add_option("-k", k, "rows to print");
  search->add_option("--aggregate", aggregate, "mean or max over query variants")
      ->check(CLI::IsMember({"mean", "max"}));
  common(search, false);

  std::vector<std::string> csvs;
  auto* rep = app.add_subcommand("report", "summarize eval CSVs into one table");
  rep->add_option("csv", csvs, "eval CSV files")->required();
  common(rep, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*build) return cmd_build(matrix, c);
    if (*extract) return cmd_extract(manifest, report, truth, c);
    if (*eval) return cmd_eval(store, test, models_out, c);
    if (*train) return cmd_train(store, test, c);
    if (*search) return cmd_search(store, model, name, qfilter, cfilter, fold, k, aggregate, c);
    if (*rep) return cmd_report(csvs, c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
