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

#include "tiknib/elf.hpp"

#include <elf.h>

#include <fstream>
#include <iterator>

namespace tiknib {

bool ElfSection::executable() const { return (flags & SHF_EXECINSTR) != 0; }
bool ElfSection::allocated() const { return (flags & SHF_ALLOC) != 0; }

bool ElfSymbol::is_function() const {
  return type == STT_FUNC || type == STT_GNU_IFUNC;
}

ElfFile ElfFile::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse(std::move(bytes));
}

ElfFile ElfFile::parse(std::vector<std::uint8_t> bytes) {
  ElfFile file;
  file.bytes_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes));
  file.decode();
  return file;
}

void ElfFile::decode() {
  const auto& raw = *bytes_;
  if (raw.size() < EI_NIDENT || raw[EI_MAG0] != ELFMAG0 || raw[EI_MAG1] != ELFMAG1 ||
      raw[EI_MAG2] != ELFMAG2 || raw[EI_MAG3] != ELFMAG3) {
    throw Error(ErrorCode::NotElf, "missing ELF magic");
  }
  if (raw[EI_CLASS] == ELFCLASS32) {
    is64_ = false;
  } else if (raw[EI_CLASS] == ELFCLASS64) {
    is64_ = true;
  } else {
    throw Error(ErrorCode::NotElf, "unknown ELF class");
  }
  if (raw[EI_DATA] == ELFDATA2LSB) {
    big_endian_ = false;
  } else if (raw[EI_DATA] == ELFDATA2MSB) {
    big_endian_ = true;
  } else {
    throw Error(ErrorCode::NotElf, "unknown ELF data encoding");
  }

  ByteSpan all(raw.data(), raw.size());
  ByteReader r = reader(all, ErrorCode::MalformedElf);
  r.seek(EI_NIDENT);
  file_type_ = r.u16();
  machine_ = r.u16();
  r.u32();  // e_version
  const std::size_t word = is64_ ? 8 : 4;
  entry_ = r.uint_n(word);
  r.uint_n(word);  // e_phoff
  std::uint64_t shoff = r.uint_n(word);
  eflags_ = r.u32();
  r.u16();  // e_ehsize
  r.u16();  // e_phentsize
  r.u16();  // e_phnum
  std::uint16_t shentsize = r.u16();
  std::uint64_t shnum = r.u16();
  std::uint32_t shstrndx = r.u16();

  if (shoff == 0) return;  // no section headers: nothing we can use
  if (shentsize < (is64_ ? sizeof(Elf64_Shdr) : sizeof(Elf32_Shdr))) {
    throw Error(ErrorCode::MalformedElf, "section header entry too small");
  }

  auto read_header = [&](std::uint64_t index) {
    ElfSection s;
    s.index = index;
    std::uint64_t at = shoff + index * shentsize;
    if (at > raw.size()) throw Error(ErrorCode::MalformedElf, "section header out of range");
    ByteReader h = reader(all, ErrorCode::MalformedElf);
    h.seek(at);
    std::uint32_t name_offset = h.u32();
    s.type = h.u32();
    s.flags = h.uint_n(word);
    s.addr = h.uint_n(word);
    s.offset = h.uint_n(word);
    s.size = h.uint_n(word);
    s.link = h.u32();
    s.info = h.u32();
    h.uint_n(word);  // sh_addralign
    s.entsize = h.uint_n(word);
    s.name = std::to_string(name_offset);  // resolved below
    return s;
  };

  ElfSection first = read_header(0);
  if (shnum == 0) shnum = first.size;
  if (shstrndx == SHN_XINDEX) shstrndx = first.link;
  if (shnum > 65536 * 16) throw Error(ErrorCode::MalformedElf, "too many sections");

  sections_.reserve(shnum);
  for (std::uint64_t i = 0; i < shnum; ++i) sections_.push_back(read_header(i));

  ByteSpan shstr;
  if (shstrndx < sections_.size()) shstr = section_data(sections_[shstrndx]);
  for (auto& s : sections_) {
    s.name = std::string(string_at(shstr, std::stoul(s.name)));
  }

  for (const auto& s : sections_) {
    if (s.type == SHT_SYMTAB) symbols_ = decode_symbols(s);
    if (s.type == SHT_DYNSYM) dynsyms_ = decode_symbols(s);
  }
  decode_relocations();
}

ByteSpan ElfFile::section_data(const ElfSection& section) const {
  if (section.type == SHT_NOBITS) return {};
  const auto& raw = *bytes_;
  if (section.offset > raw.size() || section.size > raw.size() - section.offset) {
    throw Error(ErrorCode::MalformedElf, "section " + section.name + " out of range");
  }
  return ByteSpan(raw.data() + section.offset, section.size);
}

ByteSpan ElfFile::section_data(std::string_view name) const {
  const ElfSection* s = section(name);
  return s ? section_data(*s) : ByteSpan{};
}

const ElfSection* ElfFile::section(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ElfSection* ElfFile::section_containing(std::uint64_t address) const {
  for (const auto& s : sections_) {
    if (s.allocated() && s.type != SHT_NOBITS && s.contains(address)) return &s;
  }
  return nullptr;
}

std::optional<ByteSpan> ElfFile::bytes_at(std::uint64_t address, std::size_t count) const {
  const ElfSection* s = section_containing(address);
  if (!s) return std::nullopt;
  std::uint64_t rel = address - s->addr;
  if (count > s->size - rel) return std::nullopt;
  return section_data(*s).subspan(rel, count);
}

std::vector<ElfSymbol> ElfFile::decode_symbols(const ElfSection& table) const {
  std::vector<ElfSymbol> out;
  const std::size_t entsize = is64_ ? sizeof(Elf64_Sym) : sizeof(Elf32_Sym);
  ByteSpan data = section_data(table);
  ByteSpan strings;
  if (table.link < sections_.size()) strings = section_data(sections_[table.link]);
  const std::size_t count = data.size() / entsize;
  out.reserve(count);
  ByteReader r = reader(data, ErrorCode::MalformedElf);
  for (std::size_t i = 0; i < count; ++i) {
    r.seek(i * entsize);
    ElfSymbol sym;
    std::uint32_t name = r.u32();
    std::uint8_t info = 0;
    if (is64_) {
      info = r.u8();
      r.u8();  // st_other
      sym.shndx = r.u16();
      sym.value = r.u64();
      sym.size = r.u64();
    } else {
      sym.value = r.u32();
      sym.size = r.u32();
      info = r.u8();
      r.u8();
      sym.shndx = r.u16();
    }
    sym.type = info & 0xf;
    sym.bind = info >> 4;
    sym.name = std::string(string_at(strings, name));
    out.push_back(std::move(sym));
  }
  return out;
}

void ElfFile::decode_relocations() {
  for (const auto& s : sections_) {
    if (s.type != SHT_RELA && s.type != SHT_REL) continue;
    const bool rela = s.type == SHT_RELA;
    const std::size_t entsize =
        is64_ ? (rela ? sizeof(Elf64_Rela) : sizeof(Elf64_Rel))
              : (rela ? sizeof(Elf32_Rela) : sizeof(Elf32_Rel));
    ElfRelocationTable table;
    table.section = s.index;
    table.target_section = s.info;
    const std::vector<ElfSymbol>* syms = nullptr;
    if (s.link < sections_.size()) {
      if (sections_[s.link].type == SHT_DYNSYM) {
        syms = &dynsyms_;
        table.dynamic = true;
      } else if (sections_[s.link].type == SHT_SYMTAB) {
        syms = &symbols_;
      }
    }
    ByteSpan data = section_data(s);
    ByteReader r = reader(data, ErrorCode::MalformedElf);
    for (std::size_t i = 0; i + entsize <= data.size(); i += entsize) {
      r.seek(i);
      ElfRelocation rel;
      if (is64_) {
        rel.offset = r.u64();
        std::uint64_t info = r.u64();
        if (machine_ == EM_MIPS) {
          // MIPS64 packs r_info as (sym:32, ssym:8, type3:8, type2:8, type:8)
          // in file byte order; only the primary type matters here.
          rel.symbol = big_endian_ ? static_cast<std::uint32_t>(info >> 32)
                                   : static_cast<std::uint32_t>(info & 0xffffffff);
          rel.type = big_endian_ ? static_cast<std::uint32_t>(info & 0xff)
                                 : static_cast<std::uint32_t>((info >> 56) & 0xff);
        } else {
          rel.symbol = static_cast<std::uint32_t>(info >> 32);
          rel.type = static_cast<std::uint32_t>(info & 0xffffffff);
        }
        if (rela) rel.addend = static_cast<std::int64_t>(r.u64());
      } else {
        rel.offset = r.u32();
        std::uint32_t info = r.u32();
        rel.symbol = info >> 8;
        rel.type = info & 0xff;
        if (rela) rel.addend = static_cast<std::int32_t>(r.u32());
      }
      if (syms && rel.symbol < syms->size()) {
        const ElfSymbol& sym = (*syms)[rel.symbol];
        rel.symbol_name = sym.name;
        if (rel.symbol_name.empty() && sym.type == STT_SECTION && sym.shndx < sections_.size()) {
          rel.symbol_name = sections_[sym.shndx].name;
        }
      }
      table.entries.push_back(std::move(rel));
    }
    relocs_.push_back(std::move(table));
  }
}

namespace {

// Width in bytes of an absolute data relocation, 0 for anything else.
unsigned absolute_width(std::uint16_t machine, std::uint32_t type) {
  switch (machine) {
    case EM_X86_64:
      if (type == R_X86_64_64) return 8;
      if (type == R_X86_64_32 || type == R_X86_64_32S) return 4;
      return 0;
    case EM_386:
      return type == R_386_32 ? 4 : 0;
    case EM_ARM:
      return type == R_ARM_ABS32 ? 4 : 0;
    case EM_MIPS:
      if (type == R_MIPS_64) return 8;
      return type == R_MIPS_32 ? 4 : 0;
    default:
      return 0;
  }
}

}  // namespace

ElfFile ElfFile::with_applied_debug_relocations(const std::vector<std::uint64_t>& section_base) const {
  std::vector<std::uint8_t> raw = *bytes_;
  auto load = [&](std::size_t at, unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
      unsigned shift = big_endian_ ? 8 * (width - 1 - i) : 8 * i;
      v |= static_cast<std::uint64_t>(raw[at + i]) << shift;
    }
    return v;
  };
  auto store = [&](std::size_t at, unsigned width, std::uint64_t v) {
    for (unsigned i = 0; i < width; ++i) {
      unsigned shift = big_endian_ ? 8 * (width - 1 - i) : 8 * i;
      raw[at + i] = static_cast<std::uint8_t>(v >> shift);
    }
  };
  for (const auto& table : relocs_) {
    if (table.dynamic || table.target_section >= sections_.size()) continue;
    const ElfSection& target = sections_[table.target_section];
    if (target.allocated() || target.type == SHT_NOBITS) continue;
    const bool rela = sections_[table.section].type == SHT_RELA;
    for (const auto& rel : table.entries) {
      unsigned width = absolute_width(machine_, rel.type);
      if (width == 0 || rel.offset > target.size || width > target.size - rel.offset) continue;
      if (rel.symbol >= symbols_.size()) continue;
      const ElfSymbol& sym = symbols_[rel.symbol];
      std::uint64_t s = sym.value;
      if (sym.shndx != SHN_UNDEF && sym.shndx < section_base.size()) s += section_base[sym.shndx];
      const std::size_t at = target.offset + rel.offset;
      std::uint64_t a = rela ? static_cast<std::uint64_t>(rel.addend) : load(at, width);
      store(at, width, s + a);
    }
  }
  return parse(std::move(raw));
}

}  // namespace tiknib
