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

#ifndef TIKNIB_DWARF_HPP
#define TIKNIB_DWARF_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tiknib/elf.hpp"

namespace tiknib {

// The eight basic C type classes plain function signatures are collapsed to.
enum class BasicType { Char, Short, Int, Float, Enum, Struct, Void, VoidPtr };

struct AddressRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;  // exclusive
  bool contains(std::uint64_t a) const { return a >= begin && a < end; }
};

// A DW_TAG_subprogram that owns machine code, with name, declaration locus
// and type references already resolved through abstract_origin and
// specification links.
struct DwarfFunction {
  std::string name;
  std::optional<std::string> decl_file;
  std::optional<std::uint32_t> decl_line;
  std::vector<AddressRange> ranges;  // sorted by begin
  std::uint64_t entry = 0;           // low_pc, or begin of the first range
  std::optional<std::uint64_t> return_type;            // DIE offset; absent = void
  std::vector<std::optional<std::uint64_t>> param_types;  // absent = unknown
};

struct LineRow {
  std::uint64_t address = 0;
  std::uint32_t line = 0;
  std::string file;
  bool end_sequence = false;
};

// Subset of DWARF 2-5 (.debug_info, .debug_abbrev, .debug_line and their
// string/address/range companions) needed to label functions with source
// loci and basic-type signatures.
class DebugInfo {
 public:
  // Empty result when the image has no .debug_info. Throws
  // Error(MalformedDebugInfo) on structural damage.
  static DebugInfo parse(const ElfFile& elf);

  bool empty() const { return functions_.empty() && rows_.empty(); }
  const std::vector<DwarfFunction>& functions() const { return functions_; }

  // Function whose entry equals `address`; otherwise the function with a
  // range covering it (split hot/cold parts). Null when nothing matches.
  const DwarfFunction* function_at(std::uint64_t address) const;

  // Line-table row in effect at `address`, if any sequence covers it.
  std::optional<LineRow> line_at(std::uint64_t address) const;

  // Collapse a type DIE to a basic type. Absent offset means `void`.
  BasicType classify_type(std::optional<std::uint64_t> die) const;

  struct TypeDie {
    std::uint16_t tag = 0;
    std::optional<std::uint64_t> type;
    std::uint8_t encoding = 0;
    std::uint64_t byte_size = 0;
  };

 private:
  std::vector<DwarfFunction> functions_;
  std::unordered_map<std::uint64_t, TypeDie> types_;
  std::vector<LineRow> rows_;  // sorted by address, stable within sequences
  friend class DwarfParser;
};

}  // namespace tiknib

#endif  // TIKNIB_DWARF_HPP
