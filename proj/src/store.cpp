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

#include "tiknib/store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tiknib/error.hpp"
#include "tiknib/features.hpp"
#include "tiknib/util.hpp"

namespace tiknib {

using ojson = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

ojson number(double v) {
  if (std::floor(v) == v && std::fabs(v) < 9007199254740992.0) {
    return v < 0 ? ojson(static_cast<std::int64_t>(v)) : ojson(static_cast<std::uint64_t>(v));
  }
  return ojson(v);
}

ojson config_json(const CompileConfig& c) {
  ojson j;
  j["package"] = c.package;
  j["binary"] = c.binary;
  j["arch"] = std::string(to_string(c.arch));
  j["bits"] = c.bits;
  j["endianness"] = std::string(to_string(c.endianness));
  j["compiler"] = c.compiler;
  j["compiler_version"] = c.compiler_version;
  j["opt_level"] = std::string(to_string(c.opt_level));
  ojson extra = ojson::array();
  for (ExtraFlag f : c.extra) extra.push_back(std::string(to_string(f)));
  j["extra"] = extra;
  return j;
}

template <typename T>
T parsed(std::optional<T> v, const std::string& what, const std::string& text) {
  if (!v) throw Error(ErrorCode::Parse, "bad " + what + " '" + text + "'");
  return *v;
}

CompileConfig config_from(const ojson& j) {
  try {
    CompileConfig c;
    c.package = j.at("package").get<std::string>();
    c.binary = j.at("binary").get<std::string>();
    auto arch = j.at("arch").get<std::string>();
    c.arch = parsed(parse_arch(arch), "arch", arch);
    c.bits = j.at("bits").get<unsigned>();
    auto endian = j.at("endianness").get<std::string>();
    c.endianness = parsed(parse_endianness(endian), "endianness", endian);
    c.compiler = j.at("compiler").get<std::string>();
    c.compiler_version = j.at("compiler_version").get<std::string>();
    auto opt = j.at("opt_level").get<std::string>();
    c.opt_level = parsed(parse_opt_level(opt), "opt_level", opt);
    if (j.contains("extra")) {
      for (const auto& e : j.at("extra")) {
        auto s = e.get<std::string>();
        c.extra.insert(parsed(parse_extra_flag(s), "extra flag", s));
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
}

const char* kFunctionColumns[] = {"name", "symbol", "section", "start_addr", "size",
                                  "source_file", "source_line"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string extra_text(const CompileConfig& c) {
  if (c.extra.empty()) return "none";
  std::string out;
  for (ExtraFlag f : c.extra) {
    if (!out.empty()) out += '+';
    out += to_string(f);
  }
  return out;
}

}  // namespace

std::vector<std::string> store_columns() {
  std::vector<std::string> cols = config_field_names();
  for (const char* c : kFunctionColumns) cols.emplace_back(c);
  for (auto name : feature_names()) cols.emplace_back(name);
  return cols;
}

std::string config_to_json(const CompileConfig& config) { return config_json(config).dump(); }

std::string record_to_json(const FunctionRecord& r) {
  ojson j = config_json(r.config);
  j["name"] = r.name;
  j["symbol"] = r.symbol;
  j["section"] = r.section;
  j["start_addr"] = r.start_addr;
  j["size"] = r.size;
  j["source_file"] = r.source_file;
  j["source_line"] = r.source_line;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    j[std::string(feature_names()[i])] = r.features.has(i) ? number(r.features[i]) : ojson(nullptr);
  }
  return j.dump();
}

FunctionRecord record_from_json(const std::string& line) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("feature store: ") + e.what());
  }
  FunctionRecord r;
  r.config = config_from(j);
  try {
    r.name = j.at("name").get<std::string>();
    r.symbol = j.at("symbol").get<std::string>();
    r.section = j.at("section").get<std::string>();
    r.start_addr = j.at("start_addr").get<std::uint64_t>();
    r.size = j.at("size").get<std::uint64_t>();
    r.source_file = j.at("source_file").get<std::string>();
    r.source_line = j.at("source_line").get<std::uint32_t>();
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      const auto& v = j.at(std::string(feature_names()[i]));
      if (!v.is_null()) r.features.set(i, v.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("feature store: ") + e.what());
  }
  return r;
}

std::string records_to_jsonl(const std::vector<FunctionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r);
    out += '\n';
  }
  return out;
}

std::string records_to_csv(const std::vector<FunctionRecord>& records) {
  std::string out;
  auto cols = store_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& r : records) {
    std::vector<std::string> row;
    for (const auto& f : config_field_names()) {
      row.push_back(f == "extra" ? extra_text(r.config) : *config_field(r.config, f));
    }
    row.push_back(r.name);
    row.push_back(r.symbol);
    row.push_back(r.section);
    row.push_back(std::to_string(r.start_addr));
    row.push_back(std::to_string(r.size));
    row.push_back(r.source_file);
    row.push_back(std::to_string(r.source_line));
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      row.push_back(r.features.has(i) ? format_double(r.features[i]) : "");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<FunctionRecord> read_store(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<FunctionRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(record_from_json(line));
  }
  return out;
}

std::string groundtruth_to_jsonl(const std::vector<FunctionRecord>& records) {
  std::vector<const FunctionRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const FunctionRecord* a, const FunctionRecord* b) {
    auto ka = std::tie(a->config.package, a->source_file, a->source_line);
    auto kb = std::tie(b->config.package, b->source_file, b->source_line);
    if (ka != kb) return ka < kb;
    auto oa = a->config.options_key(), ob = b->config.options_key();
    if (oa != ob) return oa < ob;
    return std::tie(a->config.binary, a->name) < std::tie(b->config.binary, b->name);
  });
  std::string out;
  for (const auto* r : sorted) {
    ojson j;
    j["package"] = r->config.package;
    j["source_file"] = r->source_file;
    j["source_line"] = r->source_line;
    j["name"] = r->name;
    j["config"] = config_json(r->config);
    j["symbol"] = r->symbol;
    j["start_addr"] = r->start_addr;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string manifest_to_jsonl(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    ojson j;
    j["path"] = e.path.generic_string();
    ojson cj = config_json(e.config);
    for (auto& [k, v] : cj.items()) j[k] = v;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    ManifestEntry e;
    try {
      e.path = j.at("path").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
    }
    if (e.path.is_relative()) e.path = path.parent_path() / e.path;
    e.config = config_from(j);
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

ojson model_json(const Model& m) {
  ojson j;
  j["test"] = m.test;
  j["fold"] = m.fold;
  j["seed"] = m.seed;
  ojson sel = ojson::array();
  for (std::size_t f : m.selected) sel.push_back(std::string(feature_names()[f]));
  j["selected"] = sel;
  j["train_auc_trace"] = m.train_auc_trace;
  ojson cand = ojson::array();
  for (std::size_t f : m.candidates) cand.push_back(std::string(feature_names()[f]));
  j["candidates"] = cand;
  return j;
}

Model model_from(const ojson& j) {
  try {
    Model m;
    m.test = j.value("test", std::string());
    m.fold = j.value("fold", 0u);
    m.seed = j.value("seed", std::uint64_t{0});
    for (const auto& s : j.at("selected")) m.selected.push_back(require_feature(s.get<std::string>()));
    if (j.contains("train_auc_trace")) m.train_auc_trace = j.at("train_auc_trace").get<std::vector<double>>();
    if (j.contains("candidates")) {
      for (const auto& s : j.at("candidates")) m.candidates.push_back(require_feature(s.get<std::string>()));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model: ") + e.what());
  }
}

}  // namespace

std::string model_to_json(const Model& model) { return model_json(model).dump(2) + "\n"; }

Model model_from_json(const std::string& text) {
  try {
    return model_from(ojson::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model: ") + e.what());
  }
}

std::string models_to_json(const std::vector<Model>& models) {
  ojson j;
  j["models"] = ojson::array();
  for (const auto& m : models) j["models"].push_back(model_json(m));
  return j.dump(2) + "\n";
}

std::vector<Model> read_models(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::EmptyModel, "model file " + path.string() + " does not exist");
  }
  ojson j;
  try {
    j = ojson::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  std::vector<Model> out;
  if (j.is_object() && j.contains("models")) {
    for (const auto& m : j.at("models")) out.push_back(model_from(m));
  } else {
    out.push_back(model_from(j));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyModel, path.string() + " holds no model");
  return out;
}

std::string report_to_csv(const KFoldResult& r) {
  std::string out = "test,fold,auc,ap,auc_std,ap_std,n_train_pairs,n_test_pairs,n_selected,selected";
  for (std::size_t c : r.candidates) {
    out += ",gap_";
    out += feature_names()[c];
  }
  out += '\n';
  std::vector<double> gap_sum(r.candidates.size(), 0.0);
  std::vector<std::size_t> gap_n(r.candidates.size(), 0);
  double train = 0, test = 0, selected = 0;
  for (const auto& f : r.folds) {
    std::string names;
    for (std::size_t s : f.model.selected) {
      if (!names.empty()) names += ';';
      names += feature_names()[s];
    }
    out += csv_field(r.test) + "," + std::to_string(f.fold) + "," + format_double(f.test_auc) + "," +
           format_double(f.test_ap) + ",,," + std::to_string(f.n_train_pairs) + "," +
           std::to_string(f.n_test_pairs) + "," + std::to_string(f.model.selected.size()) + "," +
           csv_field(names);
    for (std::size_t c = 0; c < r.candidates.size(); ++c) {
      out += ',';
      if (f.gaps[c]) {
        out += format_double(*f.gaps[c]);
        gap_sum[c] += *f.gaps[c];
        ++gap_n[c];
      }
    }
    out += '\n';
    train += static_cast<double>(f.n_train_pairs);
    test += static_cast<double>(f.n_test_pairs);
    selected += static_cast<double>(f.model.selected.size());
  }
  const double k = r.folds.empty() ? 1.0 : static_cast<double>(r.folds.size());
  out += csv_field(r.test) + ",mean," + format_double(r.mean_auc) + "," + format_double(r.mean_ap) + "," +
         format_double(r.std_auc) + "," + format_double(r.std_ap) + "," + format_double(train / k) + "," +
         format_double(test / k) + "," + format_double(selected / k) + ",";
  for (std::size_t c = 0; c < r.candidates.size(); ++c) {
    out += ',';
    if (gap_n[c]) out += format_double(gap_sum[c] / static_cast<double>(gap_n[c]));
  }
  out += '\n';
  return out;
}

}  // namespace tiknib
