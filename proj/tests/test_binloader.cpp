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
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include "helpers.hpp"
#include "tiknib/binloader.hpp"
#include "tiknib/error.hpp"

using namespace tiknib;
using tiknib::test::built;

namespace {

// name -> decl_line for every subprogram with code, read with readelf.
std::map<std::string, unsigned> readelf_decl_lines(const std::filesystem::path& file) {
  auto out = test::sh("readelf --debug-dump=info " + file.string());
  std::map<std::string, unsigned> lines;
  std::istringstream in(out.text);
  std::string line, name;
  unsigned decl = 0;
  bool in_sub = false, has_code = false;
  auto flush = [&] {
    if (in_sub && has_code && !name.empty()) lines[name] = decl;
    in_sub = has_code = false;
    name.clear();
    decl = 0;
  };
  std::regex abbrev(R"(^\s*<\d+><[0-9a-f]+>: Abbrev Number: \d+ \((DW_TAG_\w+)\))");
  std::regex name_re(R"(DW_AT_name\s*:\s*(?:\(indirect string, offset: 0x[0-9a-f]+\): )?(\S+))");
  std::regex line_re(R"(DW_AT_decl_line\s*:\s*(\d+))");
  std::smatch m;
  while (std::getline(in, line)) {
    if (std::regex_search(line, m, abbrev)) {
      flush();
      in_sub = m[1] == "DW_TAG_subprogram";
    } else if (in_sub && std::regex_search(line, m, name_re)) {
      name = m[1];
    } else if (in_sub && std::regex_search(line, m, line_re)) {
      decl = static_cast<unsigned>(std::stoul(m[1]));
    } else if (in_sub && line.find("DW_AT_low_pc") != std::string::npos) {
      has_code = true;
    }
  }
  flush();
  return lines;
}

// FUNC symbols with nonzero size in executable sections, read with readelf.
std::set<std::tuple<std::string, std::uint64_t, std::string>> readelf_functions(const std::filesystem::path& file) {
  std::set<std::string> exec_sections;
  {
    auto out = test::sh("readelf -SW " + file.string());
    std::regex sec(R"(\[\s*(\d+)\]\s+(\S+)\s+\S+\s+[0-9a-f]+\s+[0-9a-f]+\s+[0-9a-f]+\s+[0-9a-f]+\s+(\S*))");
    std::istringstream in(out.text);
    std::smatch m;
    for (std::string line; std::getline(in, line);) {
      if (std::regex_search(line, m, sec) && std::string(m[3]).find('X') != std::string::npos)
        exec_sections.insert(m[1]);
    }
  }
  std::set<std::tuple<std::string, std::uint64_t, std::string>> out;
  auto sym = test::sh("readelf -sW " + file.string());
  std::istringstream in(sym.text);
  std::regex row(R"(^\s*\d+:\s+([0-9a-f]+)\s+(\d+)\s+FUNC\s+\S+\s+\S+\s+(\S+)\s+(\S+))");
  std::smatch m;
  bool in_symtab = false;
  for (std::string line; std::getline(in, line);) {
    if (line.find("'.symtab'") != std::string::npos) in_symtab = true;
    if (line.find("'.dynsym'") != std::string::npos) in_symtab = false;
    if (!in_symtab || !std::regex_search(line, m, row)) continue;
    if (std::stoul(m[2]) == 0 || !exec_sections.count(m[3])) continue;
    out.emplace(m[3], std::stoull(m[1], nullptr, 16), m[4]);
  }
  return out;
}

}  // namespace

TEST_CASE("load_binary reads target fields and DWARF loci of tiny.c") {
  LoadedBinary bin = load_binary(built("c/tiny.elf"));
  CHECK(bin.config.arch == Arch::x86);
  CHECK(bin.config.bits == 64);
  CHECK(bin.config.endianness == Endianness::little);

  auto oracle = readelf_decl_lines(built("c/tiny.elf"));
  REQUIRE(oracle.size() >= 6);
  std::map<std::string, const RawFunction*> by_name;
  for (const auto& f : bin.functions) by_name[f.name] = &f;
  for (const auto& [name, decl] : oracle) {
    INFO(name);
    REQUIRE(by_name.count(name));
    const RawFunction& f = *by_name[name];
    REQUIRE(f.source_file);
    CHECK(*f.source_file == "tiny.c");
    REQUIRE(f.source_line);
    CHECK(*f.source_line == decl);
  }
  CHECK(*by_name["add_scaled"]->source_line == 10);
}

// name -> line of its definition in a C file: the first line starting at
// column 0 with `name(` that opens a body or does not end in `;`.
std::map<std::string, unsigned> source_definitions(const std::filesystem::path& file) {
  std::map<std::string, unsigned> out;
  std::ifstream in(file);
  std::regex def(R"(^[A-Za-z_][^;=(]*?\b([A-Za-z_]\w*)\s*\()");
  std::smatch m;
  unsigned n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (line.empty()) continue;
    bool body = line.find('{') != std::string::npos || line.back() != ';';
    if (body && std::regex_search(line, m, def) && !out.count(m[1])) out[m[1]] = n;
  }
  return out;
}

TEST_CASE("relocatable objects: debug relocations give the definition loci") {
  std::size_t checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(built("objs"))) {
    INFO(entry.path().filename().string());
    LoadedBinary bin = load_binary(entry.path());
    CHECK(bin.relocatable);
    const std::string stem = entry.path().stem().string();
    const std::string file = stem.substr(0, stem.find('-')) + ".c";
    auto oracle = source_definitions(std::filesystem::path(TIKNIB_MINIBENCH_DIR) / "fixtures" / file);
    REQUIRE_FALSE(oracle.empty());
    for (const auto& f : bin.functions) {
      INFO(f.name);
      const std::string base = f.name.substr(0, f.name.find('.'));
      CHECK(f.debug_name == base);
      REQUIRE(oracle.count(base));
      REQUIRE(f.source_file);
      CHECK(*f.source_file == file);
      CHECK(f.source_line == oracle[base]);
      ++checked;
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("load_binary returns exactly the sized FUNC symbols in executable sections") {
  for (const char* rel : {"c/tiny.elf", "c/clones.elf", "objs/strtools-gcc-O2.o", "x86/calls.o"}) {
    INFO(rel);
    LoadedBinary bin = load_binary(built(rel));
    auto oracle = readelf_functions(built(rel));
    // Aliases at one address collapse to the smallest name.
    std::map<std::pair<std::string, std::uint64_t>, std::string> smallest;
    for (const auto& [sec, addr, name] : oracle)
      if (!smallest.count({sec, addr})) smallest[{sec, addr}] = name;
    std::set<std::string> expect, got;
    for (const auto& [key, name] : smallest) expect.insert(name);
    for (const auto& f : bin.functions) got.insert(f.name);
    CHECK(got == expect);
  }
}

TEST_CASE("load_binary invariants: sorted, disjoint, inside their section, bytes match size") {
  for (const char* rel : {"c/tiny.elf", "c/clones.elf", "objs/numeric-clang-O2.o", "cross/thumb.o",
                          "cross/mips.o"}) {
    INFO(rel);
    if (!std::filesystem::exists(built(rel))) continue;
    LoadedBinary bin = load_binary(built(rel));
    REQUIRE(!bin.functions.empty());
    for (std::size_t i = 0; i < bin.functions.size(); ++i) {
      const auto& f = bin.functions[i];
      CHECK(f.size > 0);
      CHECK(f.bytes.size() == f.size);
      const ElfSection* sec = nullptr;
      for (const auto& s : bin.elf->sections())
        if (s.name == f.section && s.executable()) sec = &s;
      REQUIRE(sec);
      if (!bin.relocatable) {
        CHECK(f.start_addr >= sec->addr);
        CHECK(f.start_addr + f.size <= sec->addr + sec->size);
      }
      if (i > 0) CHECK(bin.functions[i - 1].start_addr + bin.functions[i - 1].size <= f.start_addr);
    }
  }
}

TEST_CASE("load_binary is deterministic") {
  LoadedBinary a = load_binary(built("c/clones.elf"));
  LoadedBinary b = load_binary(built("c/clones.elf"));
  REQUIRE(a.functions.size() == b.functions.size());
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    CHECK(a.functions[i].name == b.functions[i].name);
    CHECK(a.functions[i].start_addr == b.functions[i].start_addr);
    CHECK(a.functions[i].bytes == b.functions[i].bytes);
  }
}

TEST_CASE("load_binary errors") {
  auto dir = test::scratch("binloader");
  {
    std::ofstream(dir / "text.txt") << "not an elf file at all\n";
    try {
      load_binary(dir / "text.txt");
      FAIL("expected NotElf");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotElf);
    }
  }
  if (test::have_tool("strip")) {
    test::sh("strip -o " + (dir / "stripped.elf").string() + " " + built("c/tiny.elf").string());
    try {
      load_binary(dir / "stripped.elf");
      FAIL("expected NoSymbols");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoSymbols);
    }
  }
  {
    // Patch e_machine of a copy to an unsupported value (EM_SPARC = 2).
    std::filesystem::copy_file(built("x86/straight.o"), dir / "sparc.o");
    std::fstream f(dir / "sparc.o", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(18);
    const char em[2] = {2, 0};
    f.write(em, 2);
    f.close();
    try {
      load_binary(dir / "sparc.o");
      FAIL("expected UnsupportedArch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedArch);
    }
  }
}

TEST_CASE("read_type_signature applies the prime table and collapse rules") {
  LoadedBinary bin = load_binary(built("c/tiny.elf"));
  REQUIRE(bin.debug);
  std::map<std::string, TypeSignature> sigs;
  for (const auto& f : bin.functions)
    if (auto s = read_type_signature(f, *bin.debug)) sigs[f.name] = *s;

  // int add_scaled(char, int)
  CHECK(sigs.at("add_scaled") == TypeSignature{2, {2, 5}, 5});
  // void nothing(void)
  CHECK(sigs.at("nothing") == TypeSignature{0, {}, 17});
  // char *first_label(struct item *)
  CHECK(sigs.at("first_label") == TypeSignature{1, {19}, 19});
  // float blend(struct item, enum tone)
  CHECK(sigs.at("blend") == TypeSignature{2, {13, 11}, 7});
  // int main(int, char **)
  CHECK(sigs.at("main") == TypeSignature{2, {5, 19}, 5});
  // crt code without debug entries has no signature
  CHECK(sigs.count("_start") == 0);
}

TEST_CASE("type primes cover the eight basic types") {
  std::set<unsigned> primes;
  for (auto t : {BasicType::Char, BasicType::Short, BasicType::Int, BasicType::Float,
                 BasicType::Enum, BasicType::Struct, BasicType::Void, BasicType::VoidPtr})
    primes.insert(type_prime(t));
  CHECK(primes == std::set<unsigned>{2, 3, 5, 7, 11, 13, 17, 19});
}
