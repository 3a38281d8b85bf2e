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

#ifndef TIKNIB_BINLOADER_HPP
#define TIKNIB_BINLOADER_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tiknib/config.hpp"
#include "tiknib/dwarf.hpp"
#include "tiknib/elf.hpp"

namespace tiknib {

// Instruction-set state of a byte range inside a function (ARM only; other
// architectures have a single mode).
enum class CodeMode { Native, Thumb, Data };

struct ModeSwitch {
  std::uint64_t addr = 0;
  CodeMode mode = CodeMode::Native;
};

struct RawFunction {
  std::string name;
  std::uint64_t start_addr = 0;
  std::uint64_t size = 0;
  std::string section;
  std::optional<std::string> source_file;
  std::optional<std::uint32_t> source_line;
  // Source-level name from debug info (differs from `name` for compiler
  // clones such as foo.isra.0); empty when there is no debug entry.
  std::string debug_name;
  std::vector<std::uint8_t> bytes;
  CodeMode entry_mode = CodeMode::Native;
  std::vector<ModeSwitch> mode_switches;  // ARM mapping symbols inside the body
};

// Collapsed basic-type signature; identifiers are the fixed type primes.
struct TypeSignature {
  unsigned n_args = 0;
  std::vector<unsigned> arg_type_ids;
  unsigned return_type_id = 0;

  bool operator==(const TypeSignature&) const = default;
};

unsigned type_prime(BasicType type);

// A loaded image: partial config (target fields only), the function list and
// the parsed ELF/DWARF kept for call-target and PLT resolution.
struct LoadedBinary {
  std::filesystem::path path;
  CompileConfig config;
  std::vector<RawFunction> functions;  // sorted by start_addr, non-overlapping
  std::shared_ptr<const ElfFile> elf;
  std::shared_ptr<const DebugInfo> debug;
  // Import stubs: stub address -> imported symbol name.
  std::map<std::uint64_t, std::string> plt_stubs;
  // Executable sections that hold only import stubs (.plt, .plt.sec, ...).
  std::vector<AddressRange> stub_ranges;
  // Relocatable objects: address of a relocated field -> target symbol.
  std::map<std::uint64_t, std::string> code_relocations;
  bool relocatable = false;

  const RawFunction* function_at(std::uint64_t addr) const;
  // Name of an import called at `target`, if `target` is a stub or an
  // undefined symbol.
  std::optional<std::string> import_at(std::uint64_t target) const;
};

// Throws Error with NotElf, UnsupportedArch, NoSymbols, MalformedElf or
// MalformedDebugInfo.
LoadedBinary load_binary(const std::filesystem::path& path);
LoadedBinary load_binary(ElfFile elf, const std::filesystem::path& path = {});

// Absent when the function has no debug entry.
std::optional<TypeSignature> read_type_signature(const RawFunction& fn,
                                                 const DebugInfo& debug_info);

}  // namespace tiknib

#endif  // TIKNIB_BINLOADER_HPP
