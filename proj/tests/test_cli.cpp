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

#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "tiknib/store.hpp"
#include "tiknib/util.hpp"

using namespace tiknib;
using test::sh;

namespace {

const std::string kCli = TIKNIB_CLI;

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

test::Output cli(const std::string& args) { return sh(kCli + " " + args, true); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

// Manifest over the compiled minibench objects (5 programs x 2 compilers x
// O0,O2), labeled from the file names.
std::filesystem::path objects_manifest(const std::filesystem::path& dir) {
  std::vector<ManifestEntry> es;
  for (const auto& entry : std::filesystem::directory_iterator(test::built("objs"))) {
    std::vector<std::string> parts;
    std::istringstream stem(entry.path().stem().string());
    for (std::string part; std::getline(stem, part, '-');) parts.push_back(part);
    REQUIRE(parts.size() == 3);
    CompileConfig cfg = test::config(parts[1], *parse_opt_level(parts[2]), parts[0]);
    es.push_back({entry.path(), cfg});
  }
  std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  auto m = dir / "manifest.jsonl";
  write_file_atomic(m, manifest_to_jsonl(es));
  return m;
}

// Independent oracle for the surviving-function count: FUNC symbols with a
// body, as listed by readelf, minus compiler-split parts (names with a dot),
// since every remaining symbol of these fixtures has its own source line.
std::size_t readelf_function_count() {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(test::built("objs"))) {
    for (const auto& l : lines(sh("readelf -Ws " + q(entry.path())).text)) {
      std::istringstream f(l);
      std::string num, value, size, type, bind, vis, ndx, name;
      if (!(f >> num >> value >> size >> type >> bind >> vis >> ndx >> name)) continue;
      if (type != "FUNC" || ndx == "UND" || std::stoul(size) == 0) continue;
      if (name.find('.') != std::string::npos) continue;
      ++n;
    }
  }
  return n;
}

struct Workspace {
  std::filesystem::path dir, manifest, store;

  Workspace() {
    dir = test::scratch("cli");
    manifest = objects_manifest(dir);
    store = dir / "features.jsonl";
    auto r = cli("extract " + q(manifest) + " --out " + q(store) + " --groundtruth " + q(dir / "gt.jsonl"));
    REQUIRE_MESSAGE(r.status == 0, r.text);
  }
};

Workspace& workspace() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_CASE("extract writes one line per surviving function") {
  auto& w = workspace();
  auto records = read_store(w.store);
  CHECK(records.size() == readelf_function_count());
  CHECK(lines(read_file(w.dir / "gt.jsonl")).size() == records.size());
  auto report = nlohmann::json::parse(read_file(w.store.string() + ".report.json"));
  CHECK(report["kept"] == records.size());
  CHECK(report["file_errors"].empty());
  std::size_t dropped = 0;
  for (const auto& [rule, n] : report["dropped"].items()) dropped += n.get<std::size_t>();
  CHECK(dropped + records.size() == report["input_functions"].get<std::size_t>());
  for (const auto& r : records) {
    CHECK(r.features.has(0));
    CHECK(r.features.has(46));
    CHECK(r.features.has(49));
  }
}

TEST_CASE("extract error handling") {
  auto dir = test::scratch("cli-errors");
  write_file_atomic(dir / "empty.jsonl", "");
  auto r = cli("extract " + q(dir / "empty.jsonl") + " --out " + q(dir / "o.jsonl"));
  CHECK(r.status == 1);
  CHECK(r.text.find("EmptySelection") != std::string::npos);

  // A non-ELF entry is recorded and the run continues.
  write_file_atomic(dir / "notes.txt", "not a binary\n");
  auto cfg = test::config("gcc", OptLevel::O0, "tiny");
  write_file_atomic(dir / "mixed.jsonl",
                    manifest_to_jsonl({{dir / "notes.txt", cfg}, {test::built("c/tiny.elf"), cfg}}));
  r = cli("extract " + q(dir / "mixed.jsonl") + " --out " + q(dir / "mixed-out.jsonl"));
  CHECK_MESSAGE(r.status == 0, r.text);
  auto report = nlohmann::json::parse(read_file(dir / "mixed-out.jsonl.report.json"));
  REQUIRE(report["file_errors"].size() == 1);
  CHECK(report["file_errors"][0].dump().find("notes.txt") != std::string::npos);
  CHECK(report["file_errors"][0].dump().find("NotElf") != std::string::npos);
  CHECK_FALSE(read_store(dir / "mixed-out.jsonl").empty());
}

TEST_CASE("eval writes fold rows and a summary row, deterministically") {
  auto& w = workspace();
  auto a = cli("eval " + q(w.store) + " --test O0-vs-O2 --folds 4 --seed 3 --out " + q(w.dir / "a.csv") +
               " --models " + q(w.dir / "models.json"));
  REQUIRE_MESSAGE(a.status == 0, a.text);
  auto b = cli("eval " + q(w.store) + " --test O0-vs-O2 --folds 4 --seed 3 --jobs 2 --out " + q(w.dir / "b.csv"));
  REQUIRE(b.status == 0);
  auto csv = read_file(w.dir / "a.csv");
  CHECK(csv == read_file(w.dir / "b.csv"));
  auto rows = lines(csv);
  REQUIRE(rows.size() == 6);
  CHECK(rows[5].rfind("O0-vs-O2,mean,", 0) == 0);
  CHECK(read_models(w.dir / "models.json").size() == 4);

  auto spec = w.dir / "custom.test";
  write_file_atomic(spec, "name = gcc-O0-to-clang\nsource = compiler=gcc, opt_level=O0\ntarget = compiler=clang\n");
  auto c = cli("eval " + q(w.store) + " --test " + q(spec) + " --folds 3 --features presemantic --out -");
  CHECK_MESSAGE(c.status == 0, c.text);
  CHECK(c.text.find("gcc-O0-to-clang,mean,") != std::string::npos);

  auto few = cli("eval " + q(w.store) + " --test O0-vs-O2 --folds 100000 --out " + q(w.dir / "few.csv"));
  CHECK(few.status == 1);
  CHECK(few.text.find("TooFewGroups") != std::string::npos);

  auto rep = cli("report " + q(w.dir / "a.csv"));
  CHECK(rep.status == 0);
  CHECK(rep.text.find("O0-vs-O2,") != std::string::npos);
}

TEST_CASE("train and search") {
  auto& w = workspace();
  auto model = w.dir / "model.json";
  auto t = cli("train " + q(w.store) + " --test O0-vs-O2 --out " + q(model));
  REQUIRE_MESSAGE(t.status == 0, t.text);
  CHECK_FALSE(read_models(model).front().selected.empty());

  auto s = cli("search " + q(w.store) + " --model " + q(model) +
               " --query kmp_search --query-config 'compiler=gcc,opt_level=O2' -k 5");
  REQUIRE_MESSAGE(s.status == 0, s.text);
  auto out = lines(s.text);
  REQUIRE(out.size() >= 3);
  CHECK(out[0] == "rank\tscore\tpackage\tbinary\tfunction\tsource\toptions\taddr\tmatch");
  auto summary = nlohmann::json::parse(out.back());
  CHECK(summary["query_records"] == 1);
  REQUIRE(summary["rank_of_match"].is_number());
  CHECK(summary["rank_of_match"].get<int>() >= 1);

  auto missing = cli("search " + q(w.store) + " --model " + q(w.dir / "absent.json") + " --query kmp_search");
  CHECK(missing.status == 1);
  CHECK(missing.text.find("EmptyModel") != std::string::npos);
}

TEST_CASE("search ranks a planted exact copy first") {
  auto dir = test::scratch("cli-planted");
  std::vector<FunctionRecord> rs;
  auto o0 = test::config("gcc", OptLevel::O0);
  auto o3 = test::config("gcc", OptLevel::O3);
  for (int i = 0; i < 30; ++i) {
    auto r = test::record(i == 0 ? "needle" : "hay" + std::to_string(i), static_cast<std::uint32_t>(i + 1), o3,
                          0x1000 + 16 * i);
    for (std::size_t f = 0; f < kNumPresemantic; ++f) r.features.set(f, static_cast<double>((i * 7 + f * 3) % 11));
    rs.push_back(r);
  }
  auto query = rs[0];
  query.config = o0;
  rs.push_back(query);
  write_file_atomic(dir / "store.jsonl", records_to_jsonl(rs));
  Model m;
  m.selected = presemantic_features();
  write_file_atomic(dir / "model.json", model_to_json(m));
  auto s = cli("search " + q(dir / "store.jsonl") + " --model " + q(dir / "model.json") +
               " --query needle --query-config opt_level=O0");
  REQUIRE_MESSAGE(s.status == 0, s.text);
  auto summary = nlohmann::json::parse(lines(s.text).back());
  CHECK(summary["rank_of_match"] == 1);
  CHECK(summary["precision_at_1"] == 1.0);
  CHECK(summary["corpus"] == 30);
}
