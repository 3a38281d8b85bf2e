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

#include "tiknib/group_table.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "tiknib/error.hpp"

#ifndef TIKNIB_DATA_DIR
#define TIKNIB_DATA_DIR "data"
#endif

namespace tiknib {

namespace {
constexpr std::array<std::string_view, kNumGroups> kGroupNames = {
    "arith", "data_transfer", "cmp", "logic", "shift",
    "bitmanip", "float", "ctransfer_cond", "ctransfer_uncond", "misc"};
}  // namespace

std::string_view to_string(Group group) { return kGroupNames[static_cast<int>(group)]; }

std::optional<Group> parse_group(std::string_view text) {
  for (int i = 0; i < kNumGroups; ++i) {
    if (kGroupNames[i] == text) return static_cast<Group>(i);
  }
  return std::nullopt;
}

GroupTable GroupTable::parse(std::string_view text, const std::string& origin) {
  GroupTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string prefix, group, extra;
    if (!(fields >> prefix)) continue;
    if (!(fields >> group) || (fields >> extra)) {
      throw Error(ErrorCode::Parse, origin + ":" + std::to_string(lineno) +
                                        ": expected `<mnemonic-prefix> <group>`");
    }
    auto g = parse_group(group);
    if (!g) {
      throw Error(ErrorCode::Parse, origin + ":" + std::to_string(lineno) + ": unknown group " + group);
    }
    table.entries_[prefix] = *g;
  }
  return table;
}

GroupTable GroupTable::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open group table " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), file.string());
}

Group GroupTable::lookup(std::string_view mnemonic) const {
  for (std::size_t len = mnemonic.size(); len > 0; --len) {
    auto it = entries_.find(mnemonic.substr(0, len));
    if (it != entries_.end()) return it->second;
  }
  return Group::misc;
}

GroupTables GroupTables::load(const std::filesystem::path& dir) {
  GroupTables t;
  t.x86_ = GroupTable::load(dir / "x86.txt");
  t.arm_ = GroupTable::load(dir / "arm.txt");
  t.mips_ = GroupTable::load(dir / "mips.txt");
  return t;
}

std::filesystem::path GroupTables::default_dir() {
  if (const char* env = std::getenv("TIKNIB_GROUP_TABLES"); env && *env) return env;
  return std::filesystem::path(TIKNIB_DATA_DIR) / "groups";
}

const GroupTables& GroupTables::builtin() {
  static const GroupTables tables = load(default_dir());
  return tables;
}

const GroupTable& GroupTables::of(Arch arch) const {
  switch (arch) {
    case Arch::x86: return x86_;
    case Arch::arm: return arm_;
    case Arch::mips: return mips_;
  }
  return x86_;
}

Group classify_instruction(const Instruction& insn, const GroupTable& table) {
  switch (insn.flow) {
    case FlowKind::jump:
      return insn.conditional ? Group::ctransfer_cond : Group::ctransfer_uncond;
    case FlowKind::call:
    case FlowKind::ret:
      return Group::ctransfer_uncond;
    default:
      return table.lookup(insn.mnemonic);
  }
}

}  // namespace tiknib
