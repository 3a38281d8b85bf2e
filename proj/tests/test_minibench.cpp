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

#include "helpers.hpp"
#include "tiknib/binloader.hpp"
#include "tiknib/minibench.hpp"

using namespace tiknib;
using test::error_of;

TEST_CASE("parse_matrix expands comma lists") {
  auto cells = parse_matrix("# comment\n\nfixtures/a.c gcc,clang O0,O3 pie+noinline\nb.c gcc O2\n", "/m");
  REQUIRE(cells.size() == 5);
  CHECK(cells[0].source == "/m/fixtures/a.c");
  CHECK(cells[0].compiler == "gcc");
  CHECK(cells[0].opt == OptLevel::O0);
  CHECK(cells[0].extra == std::set<ExtraFlag>{ExtraFlag::pie, ExtraFlag::noinline});
  CHECK(cells[1].opt == OptLevel::O3);
  CHECK(cells[2].compiler == "clang");
  CHECK(cells[4].source == "/m/b.c");
  CHECK(cells[4].extra.empty());
  CHECK(parse_matrix("/abs/x.c gcc O1", "/m")[0].source == "/abs/x.c");
  CHECK(error_of([] { parse_matrix("a.c gcc", "/m"); }) == ErrorCode::Parse);
  CHECK(error_of([] { parse_matrix("a.c gcc O7", "/m"); }) == ErrorCode::Parse);
  CHECK(error_of([] { parse_matrix("a.c gcc O2 turbo", "/m"); }) == ErrorCode::Parse);
}

TEST_CASE("compiler_family") {
  CHECK(compiler_family("gcc") == "gcc");
  CHECK(compiler_family("/usr/bin/arm-linux-gnueabihf-gcc-11") == "gcc");
  CHECK(compiler_family("clang-14") == "clang");
  CHECK(compiler_family("g++") == "gcc");
  CHECK(compiler_family("/opt/tcc") == "tcc");
}

TEST_CASE("tiny.c with gcc at O0 and O3") {
  const std::string tiny = test::source("c/tiny.c").string();
  auto out = test::scratch("mb-tiny");
  auto res = build_matrix(parse_matrix(tiny + " gcc O0,O3", "/"), {out, 2});
  REQUIRE(res.entries.size() == 2);
  CHECK(res.skipped.empty());
  CHECK(res.entries[0].config.opt_level == OptLevel::O0);
  CHECK(res.entries[1].config.opt_level == OptLevel::O3);
  for (const auto& e : res.entries) {
    CHECK(e.config.compiler == "gcc");
    CHECK(e.config.package == "tiny");
    CHECK(e.config.arch == Arch::x86);
    CHECK(e.config.bits == 64);
    CHECK_FALSE(e.config.compiler_version.empty());
    auto bin = load_binary(e.path);
    CHECK(bin.debug);
    CHECK_FALSE(bin.functions.empty());
  }
  CHECK(res.manifest == out / "manifest.jsonl");
  auto back = read_manifest(res.manifest);
  REQUIRE(back.size() == 2);
  CHECK(back[0].path == res.entries[0].path);
  CHECK(back[1].config == res.entries[1].config);

  // Same labels on a rebuild.
  auto again = build_matrix(parse_matrix(tiny + " gcc O0,O3", "/"), {out, 1});
  REQUIRE(again.entries.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(again.entries[i].path == res.entries[i].path);
    CHECK(again.entries[i].config == res.entries[i].config);
  }
}

TEST_CASE("cells of an absent compiler are skipped and reported") {
  const std::string tiny = test::source("c/tiny.c").string();
  auto out = test::scratch("mb-absent");
  auto res = build_matrix(parse_matrix(tiny + " gcc,no-such-cc-1 O1", "/"), {out, 1});
  REQUIRE(res.entries.size() == 1);
  REQUIRE(res.skipped.size() == 1);
  CHECK(res.skipped[0].reason.find("CompilerNotFound") != std::string::npos);
  CHECK(res.skipped[0].cell.find("no-such-cc-1") != std::string::npos);
}

TEST_CASE("build errors") {
  const std::string tiny = test::source("c/tiny.c").string();
  auto out = test::scratch("mb-errors");
  CHECK(error_of([&] { build_matrix(parse_matrix(tiny + " no-such-cc-1,no-such-cc-2 O1", "/"), {out, 1}); }) ==
        ErrorCode::CompilerNotFound);
  std::ofstream(out / "broken.c") << "int main( { return }\n";
  CHECK(error_of([&] { build_matrix(parse_matrix((out / "broken.c").string() + " gcc O0,O2", "/"), {out, 1}); }) ==
        ErrorCode::AllCellsFailed);
  CHECK_FALSE(std::filesystem::exists(out / "manifest.jsonl"));
}
