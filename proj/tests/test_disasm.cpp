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

#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "tiknib/binloader.hpp"
#include "tiknib/disasm.hpp"
#include "tiknib/error.hpp"
#include "tiknib/group_table.hpp"

using namespace tiknib;
using tiknib::test::built;

namespace {

std::vector<Instruction> decode_bytes(std::vector<std::uint8_t> bytes, Arch arch = Arch::x86,
                                      unsigned bits = 64, Endianness end = Endianness::little) {
  RawFunction fn;
  fn.name = "f";
  fn.start_addr = 0x1000;
  fn.size = bytes.size();
  fn.section = ".text";
  fn.bytes = std::move(bytes);
  CompileConfig cfg;
  cfg.arch = arch;
  cfg.bits = bits;
  cfg.endianness = end;
  return disassemble(fn, cfg, GroupTables::builtin().of(arch));
}

using Listing = std::map<std::string, std::vector<std::pair<std::uint64_t, std::string>>>;

// Per-function (address, mnemonic) from objdump in Intel syntax, prefixes dropped.
Listing objdump_listing(const std::filesystem::path& obj) {
  static const std::set<std::string> prefixes = {
      "rep", "repz", "repnz", "repe", "repne", "lock", "notrack", "bnd", "data16", "cs", "ds",
      "ss", "es", "fs", "gs", "addr32", "xacquire", "xrelease"};
  Listing out;
  auto text = test::sh("objdump -d -M intel --no-show-raw-insn " + obj.string()).text;
  std::istringstream in(text);
  std::regex fn_re(R"(^[0-9a-f]+ <([^>]+)>:)");
  std::regex ins_re(R"(^\s+([0-9a-f]+):\s+(.*)$)");
  std::smatch m;
  std::string cur;
  for (std::string line; std::getline(in, line);) {
    if (std::regex_search(line, m, fn_re)) {
      cur = m[1];
      continue;
    }
    if (cur.empty() || !std::regex_match(line, m, ins_re)) continue;
    std::istringstream toks(m[2].str());
    std::string t;
    while (toks >> t && (prefixes.count(t) || t.rfind("rex", 0) == 0)) {
    }
    out[cur].emplace_back(std::stoull(m[1], nullptr, 16), t);
  }
  return out;
}

// Per-function mnemonics from a compiler-generated assembly listing.
std::map<std::string, std::vector<std::string>> asm_listing(const std::filesystem::path& s,
                                                            char comment) {
  std::map<std::string, std::vector<std::string>> out;
  std::string text = test::sh("cat " + s.string()).text;
  std::set<std::string> typed;
  std::regex type_re(R"(\.type\s+([\w.$]+),\s*[@%]function)");
  for (std::sregex_iterator it(text.begin(), text.end(), type_re), end; it != end; ++it)
    typed.insert((*it)[1]);
  std::istringstream in(text);
  std::regex label_re(R"(^([A-Za-z_$.][\w.$]*):)");
  std::smatch m;
  std::string cur;
  for (std::string line; std::getline(in, line);) {
    if (std::regex_search(line, m, label_re)) {
      std::string label = m[1];
      if (typed.count(label))
        cur = label;
      else if (label.find("func_end") != std::string::npos)
        cur.clear();
      continue;
    }
    if (cur.empty()) continue;
    auto cut = line.find(comment);
    if (cut != std::string::npos) line.erase(cut);
    std::istringstream toks(line);
    std::string mnem;
    if (!(toks >> mnem) || mnem[0] == '.') continue;
    for (auto& c : mnem) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    // The assembler encodes 64-bit shifts by 32..63 as the *32 forms.
    if (mnem == "dsll" || mnem == "dsrl" || mnem == "dsra") {
      auto last = line.find_last_of(", \t");
      std::string amount = line.substr(last + 1);
      if (!amount.empty() && std::isdigit(static_cast<unsigned char>(amount[0])) && std::stoi(amount) >= 32)
        mnem += "32";
    }
    out[cur].push_back(mnem);
  }
  return out;
}

std::string strip_width(std::string m) {
  for (const char* suffix : {".w", ".n"}) {
    if (m.size() > 2 && m.compare(m.size() - 2, 2, suffix) == 0) m.resize(m.size() - 2);
  }
  return m;
}

}  // namespace

TEST_CASE("x86 examples: ret and add; ret") {
  auto r = decode_bytes({0xc3});
  REQUIRE(r.size() == 1);
  CHECK(r[0].group == Group::ctransfer_uncond);

  auto ar = decode_bytes({0x48, 0x01, 0xd8, 0xc3});  // add rax, rbx; ret
  REQUIRE(ar.size() == 2);
  CHECK(ar[0].mnemonic == "add");
  CHECK(ar[0].group == Group::arith);
  CHECK(ar[1].group == Group::ctransfer_uncond);
}

TEST_CASE("classify_instruction examples") {
  auto jne = decode_bytes({0x75, 0x00, 0xc3});
  CHECK(jne[0].mnemonic == "jne");
  CHECK(jne[0].group == Group::ctransfer_cond);

  auto movaps = decode_bytes({0x0f, 0x28, 0xc1});
  CHECK(movaps[0].mnemonic == "movaps");
  CHECK(movaps[0].group == Group::fp);

  // sll $t0, $t1, 2
  auto sll = decode_bytes({0x00, 0x09, 0x40, 0x80}, Arch::mips, 32, Endianness::big);
  CHECK(sll[0].mnemonic == "sll");
  CHECK(sll[0].group == Group::shift);

  GroupTable empty = GroupTable::parse("");
  Instruction odd;
  odd.mnemonic = "frobnicate";
  CHECK(classify_instruction(odd, empty) == Group::misc);
}

TEST_CASE("group table files parse with longest-prefix lookup") {
  GroupTable t = GroupTable::parse("mov data_transfer\nmovs float # longer prefix wins\n");
  CHECK(t.lookup("mov") == Group::data_transfer);
  CHECK(t.lookup("movzx") == Group::data_transfer);
  CHECK(t.lookup("movsd") == Group::fp);
  CHECK(t.lookup("xyz") == Group::misc);
  CHECK_THROWS_AS(GroupTable::parse("mov nonsense"), Error);
  CHECK_THROWS_AS(GroupTable::parse("mov data_transfer extra"), Error);
}

TEST_CASE("undecodable bytes raise DecodeError with the address") {
  // 0F 0B is ud2 (valid); 0F 04 is undefined in 64-bit mode.
  try {
    decode_bytes({0x90, 0x0f, 0x04});
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.code() == ErrorCode::DecodeError);
    CHECK(e.addr() == 0x1001);
  }
}

TEST_CASE("x86 decoder agrees with objdump on compiled fixtures") {
  if (!test::have_tool("objdump")) return;
  std::size_t total = 0;
  for (const auto& entry : std::filesystem::directory_iterator(built("objs"))) {
    if (entry.path().extension() != ".o") continue;
    INFO(entry.path().filename().string());
    LoadedBinary bin = load_binary(entry.path());
    Listing oracle = objdump_listing(entry.path());
    for (const auto& fn : bin.functions) {
      INFO(fn.name);
      auto ours = disassemble(fn, bin.config, GroupTables::builtin().of(Arch::x86), &bin);
      // objdump runs on to the next symbol; padding past st_size is not part of fn.
      std::vector<std::pair<std::uint64_t, std::string>> want;
      for (const auto& w : oracle[fn.name])
        if (w.first - oracle[fn.name].front().first < fn.size) want.push_back(w);
      REQUIRE(ours.size() == want.size());
      for (std::size_t i = 0; i < ours.size(); ++i) {
        CHECK(ours[i].addr - fn.start_addr == want[i].first - want.front().first);
        CHECK(ours[i].mnemonic == want[i].second);
      }
      total += ours.size();
    }
  }
  CHECK(total > 1000);
}

TEST_CASE("ARM and MIPS decoders match the assembler listings") {
  struct Case {
    const char* name;
    char comment;
  };
  for (Case c : {Case{"arm", '@'}, Case{"thumb", '@'}, Case{"mips", '#'}, Case{"mipsel", '#'},
                 Case{"mips64el", '#'}}) {
    auto obj = built(std::string("cross/") + c.name + ".o");
    if (!std::filesystem::exists(obj)) continue;
    INFO(std::string(c.name));
    LoadedBinary bin = load_binary(obj);
    auto listing = asm_listing(test::source(std::string("cross/") + c.name + ".s"), c.comment);
    REQUIRE(listing.size() == bin.functions.size());
    for (const auto& fn : bin.functions) {
      INFO(fn.name);
      auto ours = disassemble(fn, bin.config, GroupTables::builtin().of(bin.config.arch), &bin);
      const auto& want = listing.at(fn.name);
      REQUIRE(ours.size() == want.size());
      std::size_t same = 0;
      for (std::size_t i = 0; i < ours.size(); ++i) {
        INFO(i << ": " << ours[i].mnemonic << " vs " << want[i]);
        CHECK(strip_width(ours[i].mnemonic) == strip_width(want[i]));
      }
    }
  }
}

TEST_CASE("every instruction gets exactly one group and direct calls carry a target") {
  LoadedBinary bin = load_binary(built("c/tiny.elf"));
  for (const auto& fn : bin.functions) {
    for (const auto& ins : disassemble(fn, bin.config, GroupTables::builtin().of(Arch::x86), &bin)) {
      int g = static_cast<int>(ins.group);
      CHECK((g >= 0 && g < kNumGroups));
      if (ins.call_target) CHECK(ins.flow == FlowKind::call);
      if (ins.flow == FlowKind::call && !ins.indirect) CHECK(ins.call_target.has_value());
    }
  }
}
