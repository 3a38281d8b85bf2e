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

#ifndef TIKNIB_ELF_HPP
#define TIKNIB_ELF_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tiknib/bytes.hpp"

namespace tiknib {

struct ElfSection {
  std::size_t index = 0;
  std::string name;
  std::uint32_t type = 0;
  std::uint64_t flags = 0;
  std::uint64_t addr = 0;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  std::uint32_t link = 0;
  std::uint32_t info = 0;
  std::uint64_t entsize = 0;

  bool executable() const;  // SHF_EXECINSTR
  bool allocated() const;   // SHF_ALLOC
  bool contains(std::uint64_t address) const {
    return address >= addr && address - addr < size;
  }
};

struct ElfSymbol {
  std::string name;
  std::uint64_t value = 0;
  std::uint64_t size = 0;
  std::uint8_t type = 0;  // STT_*
  std::uint8_t bind = 0;  // STB_*
  std::uint16_t shndx = 0;

  bool is_function() const;
  bool is_undefined() const { return shndx == 0; }
};

struct ElfRelocation {
  std::uint64_t offset = 0;  // r_offset
  std::uint32_t type = 0;
  std::uint32_t symbol = 0;  // index into the linked symbol table
  std::int64_t addend = 0;
  std::string symbol_name;   // resolved from the linked table, may be empty
};

// A relocation section plus the section it applies to (sh_info).
struct ElfRelocationTable {
  std::size_t section = 0;
  std::size_t target_section = 0;
  bool dynamic = false;  // linked against .dynsym
  std::vector<ElfRelocation> entries;
};

// Read-only view of an ELF32/ELF64 image of either byte order. The file bytes
// are owned by the object; sections and symbols are decoded eagerly.
class ElfFile {
 public:
  static ElfFile open(const std::filesystem::path& path);
  static ElfFile parse(std::vector<std::uint8_t> bytes);

  bool is64() const { return is64_; }
  bool big_endian() const { return big_endian_; }
  std::uint16_t machine() const { return machine_; }
  std::uint16_t file_type() const { return file_type_; }
  std::uint32_t flags() const { return eflags_; }
  std::uint64_t entry() const { return entry_; }

  const std::vector<ElfSection>& sections() const { return sections_; }
  const ElfSection* section(std::string_view name) const;
  const ElfSection* section_containing(std::uint64_t address) const;
  ByteSpan section_data(const ElfSection& section) const;
  ByteSpan section_data(std::string_view name) const;

  const std::vector<ElfSymbol>& symbols() const { return symbols_; }
  const std::vector<ElfSymbol>& dynamic_symbols() const { return dynsyms_; }
  const std::vector<ElfRelocationTable>& relocations() const { return relocs_; }

  // Relocatable objects only: a copy whose non-allocated sections (debug
  // info) have their absolute relocations applied, with `section_base[i]`
  // as the address of section i. Other relocation types are left alone.
  ElfFile with_applied_debug_relocations(const std::vector<std::uint64_t>& section_base) const;

  // Bytes at a virtual address inside an allocated PROGBITS section.
  std::optional<ByteSpan> bytes_at(std::uint64_t address, std::size_t count) const;

  ByteReader reader(ByteSpan data, ErrorCode code) const {
    return ByteReader(data, big_endian_, code);
  }

 private:
  ElfFile() = default;
  void decode();
  std::vector<ElfSymbol> decode_symbols(const ElfSection& table) const;
  void decode_relocations();

  std::shared_ptr<const std::vector<std::uint8_t>> bytes_;
  bool is64_ = false;
  bool big_endian_ = false;
  std::uint16_t machine_ = 0;
  std::uint16_t file_type_ = 0;
  std::uint32_t eflags_ = 0;
  std::uint64_t entry_ = 0;
  std::vector<ElfSection> sections_;
  std::vector<ElfSymbol> symbols_;
  std::vector<ElfSymbol> dynsyms_;
  std::vector<ElfRelocationTable> relocs_;
};

}  // namespace tiknib

#endif  // TIKNIB_ELF_HPP
