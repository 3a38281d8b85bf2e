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

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "tiknib/groundtruth.hpp"
#include "tiknib/pipeline.hpp"

using namespace tiknib;
using test::config;
using test::record;

namespace {

std::vector<std::string> symbols(const std::vector<FunctionRecord>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.symbol);
  return out;
}

}  // namespace

TEST_CASE("sanitize drops import stubs") {
  auto cfg = config("gcc", OptLevel::O2);
  auto stub = record("printf@plt", 0, cfg, 0x1030);
  stub.section = ".plt.sec";
  stub.source_file.clear();
  auto plt = record("puts", 0, cfg, 0x1020);
  plt.section = ".plt";
  auto body = record("main", 3, cfg, 0x1100);
  auto res = sanitize({stub, plt, body});
  CHECK(symbols(res.records) == std::vector<std::string>{"main"});
  CHECK(res.report.dropped.at("non_code_section") == 2);
  CHECK(res.report.input == 3);
  CHECK(res.report.kept == 1);
}

TEST_CASE("sanitize drops compiler intrinsics by source path") {
  auto cfg = config("gcc", OptLevel::O2);
  auto udiv = record("__udivdi3", 1331, cfg, 0x2000);
  udiv.source_file = "../../../libgcc/libgcc2.c";
  auto crt = record("deregister_tm_clones", 10, cfg, 0x2100);
  crt.source_file = "crtstuff.c";
  auto mine = record("work", 5, cfg, 0x2200);
  auto res = sanitize({udiv, crt, mine});
  CHECK(symbols(res.records) == std::vector<std::string>{"work"});
  CHECK(res.report.dropped.at("intrinsic") == 2);

  auto patterns = IntrinsicPatterns::parse("# runtime\n*libgcc*\n\n");
  CHECK(patterns.patterns().size() == 1);
  CHECK(patterns.matches("/build/gcc/libgcc/libgcc2.c"));
  CHECK_FALSE(patterns.matches("src/main.c"));
  CHECK_FALSE(patterns.matches(""));
}

TEST_CASE("sanitize drops sources outside the package tree") {
  auto cfg = config("gcc", OptLevel::O2);
  auto libc = record("memcpy", 40, cfg, 0x2000);
  libc.source_file = "/usr/src/glibc/string/memcpy.c";
  auto res = sanitize({libc, record("work", 5, cfg, 0x2200)});
  CHECK(symbols(res.records) == std::vector<std::string>{"work"});
  CHECK(res.report.dropped.at("out_of_tree") == 1);
}

TEST_CASE("sanitize keeps one copy per locus, preferring the smallest non-cold name") {
  auto cfg = config("gcc", OptLevel::O3);
  auto isra = record("foo.isra.0", 7, cfg, 0x1000);
  isra.name = "foo";
  auto foo = record("foo", 7, cfg, 0x1100);
  auto cold = record("bar.cold", 9, cfg, 0x1200);
  cold.name = "bar";
  auto bar = record("bar", 9, cfg, 0x1300);
  auto other = config("gcc", OptLevel::O0);
  auto foo0 = record("foo", 7, other, 0x1000);
  auto res = sanitize({isra, foo, cold, bar, foo0});
  CHECK(symbols(res.records) == std::vector<std::string>{"foo", "bar", "foo"});
  CHECK(res.origin == std::vector<std::size_t>{1, 3, 4});
  CHECK(res.report.dropped.at("duplicate") == 2);
}

TEST_CASE("sanitize drops functions without a locus") {
  auto cfg = config("gcc", OptLevel::O2);
  auto anon = record("_start", 0, cfg, 0x1000);
  anon.source_file.clear();
  auto res = sanitize({anon, record("work", 5, cfg)});
  CHECK(res.report.dropped.at("no_source") == 1);
  CHECK(res.report.kept == 1);
}

TEST_CASE("compiler-split copies in a real binary collapse to one record") {
  auto path = test::built("c/clones.elf");
  // Oracle: the ELF symbol table, independent of the loader.
  auto syms = test::sh("readelf -Ws " + path.string()).text;
  REQUIRE(syms.find(" check\n") != std::string::npos);
  REQUIRE(syms.find(" check.cold\n") != std::string::npos);

  auto bin = load_binary(path);
  CompileConfig cfg = config("gcc", OptLevel::O2, "clones");
  std::vector<std::pair<RawFunction, CompileConfig>> raw;
  std::uint32_t check_line = 0;
  for (const auto& fn : bin.functions) {
    raw.emplace_back(fn, cfg);
    if (fn.name == "check") check_line = fn.source_line.value_or(0);
  }
  auto cold = std::find_if(bin.functions.begin(), bin.functions.end(),
                           [](const RawFunction& f) { return f.name == "check.cold"; });
  REQUIRE(cold != bin.functions.end());
  CHECK(cold->source_line == check_line);
  CHECK(identity_name(*cold) == "check");

  auto res = sanitize(raw);
  auto kept = symbols(res.records);
  CHECK(std::count(kept.begin(), kept.end(), "check") == 1);
  CHECK(std::count(kept.begin(), kept.end(), "check.cold") == 0);
  CHECK(res.report.dropped.at("duplicate") >= 1);
}

TEST_CASE("identity_name strips clone suffixes without debug info") {
  RawFunction fn;
  fn.name = "foo.isra.0";
  CHECK(identity_name(fn) == "foo");
  fn.name = "bar.part.1";
  CHECK(identity_name(fn) == "bar");
  fn.name = "baz";
  CHECK(identity_name(fn) == "baz");
  fn.debug_name = "real";
  CHECK(identity_name(fn) == "real");
}

TEST_CASE("sanitize properties on random record sets") {
  std::mt19937_64 rng(7);
  const char* sections[] = {".text", ".text", ".text", ".plt", ".plt.sec"};
  const char* files[] = {"a.c", "b.c", "", "/usr/lib/x.c", "libgcc2.c"};
  for (int round = 0; round < 200; ++round) {
    std::vector<FunctionRecord> rs;
    int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      auto cfg = config(rng() % 2 ? "gcc" : "clang", static_cast<OptLevel>(rng() % 4),
                        rng() % 2 ? "p" : "q");
      auto r = record("f" + std::to_string(rng() % 6) + (rng() % 4 == 0 ? ".cold" : ""),
                      static_cast<std::uint32_t>(rng() % 5), cfg, 0x1000 + 16 * i);
      r.section = sections[rng() % 5];
      r.source_file = files[rng() % 5];
      rs.push_back(r);
    }
    auto once = sanitize(rs);
    auto twice = sanitize(once.records);
    REQUIRE(symbols(twice.records) == symbols(once.records));
    CHECK(twice.report.kept == once.report.kept);
    std::set<std::tuple<std::string, std::string, std::string, std::uint32_t>> keys;
    for (const auto& r : once.records) {
      CHECK(r.has_locus());
      CHECK(keys.emplace(r.config.package, r.config.options_key(), r.source_file, r.source_line).second);
    }
    std::size_t dropped = 0;
    for (const auto& [rule, count] : once.report.dropped) dropped += count;
    CHECK(dropped + once.report.kept == once.report.input);
  }
}

TEST_CASE("match_pairs_identity") {
  auto o0 = config("gcc", OptLevel::O0);
  auto o3 = config("gcc", OptLevel::O3);
  CHECK(match_pairs_identity(record("f", 10, o0), record("f", 10, o3)));
  auto other_pkg = config("gcc", OptLevel::O3, "other");
  auto moved = record("f", 10, other_pkg);
  moved.source_file = "pkg.c";
  CHECK_FALSE(match_pairs_identity(record("f", 10, o0), moved));
  CHECK_FALSE(match_pairs_identity(record("f", 10, o0), record("f", 20, o0)));
}
