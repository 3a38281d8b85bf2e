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

#ifndef TIKNIB_GROUP_TABLE_HPP
#define TIKNIB_GROUP_TABLE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "tiknib/config.hpp"
#include "tiknib/instruction.hpp"

namespace tiknib {

// Mnemonic-prefix -> group table for one architecture. Text format: one
// `<mnemonic-prefix> <group>` entry per line, `#` starts a comment.
class GroupTable {
 public:
  static GroupTable parse(std::string_view text, const std::string& origin = "<string>");
  static GroupTable load(const std::filesystem::path& file);

  // Longest matching prefix; misc when nothing matches.
  Group lookup(std::string_view mnemonic) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Group, std::less<>> entries_;
};

// One table per architecture, read from <dir>/{x86,arm,mips}.txt.
class GroupTables {
 public:
  static GroupTables load(const std::filesystem::path& dir);
  // $TIKNIB_GROUP_TABLES when set, otherwise the data directory compiled in.
  static std::filesystem::path default_dir();
  static const GroupTables& builtin();

  const GroupTable& of(Arch arch) const;

 private:
  GroupTable x86_, arm_, mips_;
};

// Total classification: explicit control transfers take the ctransfer
// groups; everything else goes through the table.
Group classify_instruction(const Instruction& insn, const GroupTable& table);

}  // namespace tiknib

#endif  // TIKNIB_GROUP_TABLE_HPP
