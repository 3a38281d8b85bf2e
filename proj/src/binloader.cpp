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

#include "tiknib/binloader.hpp"

#include <elf.h>

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace tiknib {

unsigned type_prime(BasicType type) {
  switch (type) {
    case BasicType::Char: return 2;
    case BasicType::Short: return 3;
    case BasicType::Int: return 5;
    case BasicType::Float: return 7;
    case BasicType::Enum: return 11;
    case BasicType::Struct: return 13;
    case BasicType::Void: return 17;
    case BasicType::VoidPtr: return 19;
  }
  return 5;
}

const RawFunction* LoadedBinary::function_at(std::uint64_t addr) const {
  auto it = std::upper_bound(functions.begin(), functions.end(), addr,
                             [](std::uint64_t a, const RawFunction& f) { return a < f.start_addr; });
  if (it == functions.begin()) return nullptr;
  --it;
  if (addr == it->start_addr) return &*it;
  return nullptr;
}

std::optional<std::string> LoadedBinary::import_at(std::uint64_t target) const {
  if (auto it = plt_stubs.find(target); it != plt_stubs.end()) return it->second;
  for (const auto& r : stub_ranges) {
    if (r.contains(target)) {
      std::ostringstream name;
      name << "stub@0x" << std::hex << target;
      return name.str();
    }
  }
  return std::nullopt;
}

namespace {

bool is_stub_section(std::string_view name) {
  return name == ".plt" || name == ".plt.sec" || name == ".plt.got" || name == ".iplt" ||
         name == ".MIPS.stubs" || name == ".plt.bnd";
}

std::int32_t read_i32_le(ByteSpan bytes, std::size_t at) {
  std::uint32_t v = static_cast<std::uint32_t>(bytes[at]) | (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
                    (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
                    (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
  return static_cast<std::int32_t>(v);
}

std::uint32_t read_word(ByteSpan bytes, std::size_t at, bool big_endian) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    std::uint32_t b = bytes[at + i];
    v |= big_endian ? b << (8 * (3 - i)) : b << (8 * i);
  }
  return v;
}

std::uint32_t arm_rotated_imm(std::uint32_t insn) {
  std::uint32_t imm = insn & 0xff;
  std::uint32_t rot = ((insn >> 8) & 0xf) * 2;
  return rot == 0 ? imm : (imm >> rot) | (imm << (32 - rot));
}

// GOT slot address -> imported symbol name, from dynamic relocations.
std::unordered_map<std::uint64_t, std::string> got_slots(const ElfFile& elf) {
  std::unordered_map<std::uint64_t, std::string> slots;
  for (const auto& table : elf.relocations()) {
    if (!table.dynamic) continue;
    for (const auto& rel : table.entries) {
      if (!rel.symbol_name.empty()) slots.emplace(rel.offset, rel.symbol_name);
    }
  }
  return slots;
}

void resolve_stubs(const ElfFile& elf, LoadedBinary& out) {
  const auto slots = got_slots(elf);
  const ElfSection* got_plt = elf.section(".got.plt");
  const std::uint16_t machine = elf.machine();
  for (const auto& s : elf.sections()) {
    if (!s.executable() || !is_stub_section(s.name)) continue;
    out.stub_ranges.push_back({s.addr, s.addr + s.size});
    ByteSpan data = elf.section_data(s);
    const std::uint64_t entsize = s.entsize ? s.entsize : 16;
    auto entry_of = [&](std::uint64_t at) { return s.addr + (at - at % entsize); };

    if (machine == EM_X86_64 || machine == EM_386) {
      for (std::size_t i = 0; i + 6 <= data.size(); ++i) {
        if (data[i] != 0xff || (data[i + 1] != 0x25 && data[i + 1] != 0xa3)) continue;
        std::int32_t disp = read_i32_le(data, i + 2);
        std::uint64_t slot = 0;
        if (machine == EM_X86_64 && data[i + 1] == 0x25) {
          slot = s.addr + i + 6 + static_cast<std::int64_t>(disp);
        } else if (machine == EM_386 && data[i + 1] == 0x25) {
          slot = static_cast<std::uint32_t>(disp);
        } else if (machine == EM_386 && got_plt) {
          slot = static_cast<std::uint32_t>(got_plt->addr + disp);
        } else {
          continue;
        }
        auto it = slots.find(slot);
        if (it != slots.end()) out.plt_stubs.emplace(entry_of(i), it->second);
      }
    } else if (machine == EM_ARM) {
      // add ip, pc, #A ; add ip, ip, #B ; ldr pc, [ip, #C]!
      for (std::size_t i = 0; i + 12 <= data.size(); i += 4) {
        std::uint32_t w0 = read_word(data, i, elf.big_endian());
        std::uint32_t w1 = read_word(data, i + 4, elf.big_endian());
        std::uint32_t w2 = read_word(data, i + 8, elf.big_endian());
        if ((w0 & 0x0ffff000) != 0x028fc000 || (w1 & 0x0ffff000) != 0x028cc000 ||
            (w2 & 0x0ffff000) != 0x05bcf000) {
          continue;
        }
        std::uint64_t ip = s.addr + i + 8 + arm_rotated_imm(w0);
        ip += arm_rotated_imm(w1);
        std::uint64_t slot = (ip + (w2 & 0xfff)) & 0xffffffff;
        auto it = slots.find(slot);
        if (it != slots.end()) out.plt_stubs.emplace(s.addr + i, it->second);
      }
    } else if (machine == EM_MIPS && s.name == ".MIPS.stubs") {
      // Each lazy stub loads its .dynsym index into $t8 (register 24).
      const auto& dynsyms = elf.dynamic_symbols();
      std::uint64_t stub_start = s.addr;
      for (std::size_t i = 0; i + 4 <= data.size(); i += 4) {
        std::uint32_t w = read_word(data, i, elf.big_endian());
        std::uint32_t op = w >> 26;
        std::uint32_t rt = (w >> 16) & 0x1f;
        std::uint32_t rs = (w >> 21) & 0x1f;
        if ((op == 0x09 || op == 0x0d) && rt == 24 && rs == 0) {  // addiu/ori $t8, $zero, idx
          std::uint32_t idx = w & 0xffff;
          if (idx < dynsyms.size()) out.plt_stubs.emplace(stub_start, dynsyms[idx].name);
          stub_start = s.addr + i + 4;
        }
      }
    }
  }
}

}  // namespace

LoadedBinary load_binary(const std::filesystem::path& path) {
  return load_binary(ElfFile::open(path), path);
}

LoadedBinary load_binary(ElfFile elf_in, const std::filesystem::path& path) {
  auto elf = std::make_shared<const ElfFile>(std::move(elf_in));
  LoadedBinary out;
  out.path = path;
  out.elf = elf;
  out.relocatable = elf->file_type() == ET_REL;

  CompileConfig& cfg = out.config;
  cfg.bits = elf->is64() ? 64 : 32;
  cfg.endianness = elf->big_endian() ? Endianness::big : Endianness::little;
  switch (elf->machine()) {
    case EM_386:
    case EM_X86_64:
      cfg.arch = Arch::x86;
      break;
    case EM_ARM:
      cfg.arch = Arch::arm;
      break;
    case EM_MIPS:
      cfg.arch = Arch::mips;
      break;
    default:
      throw Error(ErrorCode::UnsupportedArch, "ELF machine " + std::to_string(elf->machine()));
  }
  if (!supported_target(cfg.arch, cfg.bits, cfg.endianness)) {
    throw Error(ErrorCode::UnsupportedArch, std::string(to_string(cfg.arch)) + "/" +
                                                std::to_string(cfg.bits) + "/" +
                                                std::string(to_string(cfg.endianness)));
  }
  if (!path.empty()) cfg.binary = path.filename().string();

  // Relocatable objects map every section at address zero; lay executable
  // sections out back to back so addresses stay unique.
  const auto& sections = elf->sections();
  std::vector<std::uint64_t> base(sections.size(), 0);
  {
    std::uint64_t next = 0;
    for (const auto& s : sections) {
      if (out.relocatable) {
        if (s.executable()) {
          next = (next + 15) & ~static_cast<std::uint64_t>(15);
          base[s.index] = next;
          next += s.size;
        }
      } else {
        base[s.index] = s.addr;
      }
    }
  }

  const bool arm = cfg.arch == Arch::arm;
  struct Candidate {
    std::string name;
    std::uint64_t addr;
    std::uint64_t size;
    std::size_t section;
    bool thumb;
  };
  std::vector<Candidate> candidates;
  std::map<std::size_t, std::vector<ModeSwitch>> mapping;  // section -> $a/$t/$d
  for (const auto& sym : elf->symbols()) {
    if (sym.shndx == SHN_UNDEF || sym.shndx >= sections.size()) continue;
    const ElfSection& sec = sections[sym.shndx];
    if (!sec.executable()) continue;
    std::uint64_t value = out.relocatable ? base[sec.index] + sym.value
                                          : sym.value;
    if (arm && sym.type == STT_NOTYPE && sym.name.size() >= 2 && sym.name[0] == '$') {
      char kind = sym.name[1];
      if ((kind == 'a' || kind == 't' || kind == 'd') &&
          (sym.name.size() == 2 || sym.name[2] == '.')) {
        CodeMode mode = kind == 'a' ? CodeMode::Native : kind == 't' ? CodeMode::Thumb : CodeMode::Data;
        mapping[sec.index].push_back({value, mode});
      }
      continue;
    }
    if (!sym.is_function() || sym.size == 0) continue;
    bool thumb = arm && (value & 1);
    if (arm) value &= ~static_cast<std::uint64_t>(1);
    candidates.push_back({sym.name, value, sym.size, sec.index, thumb});
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoSymbols, "no sized FUNC symbols in executable sections");
  }
  for (auto& [idx, list] : mapping) {
    std::stable_sort(list.begin(), list.end(),
                     [](const ModeSwitch& a, const ModeSwitch& b) { return a.addr < b.addr; });
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.addr != b.addr) return a.addr < b.addr;
    return a.name < b.name;
  });

  std::shared_ptr<DebugInfo> debug = std::make_shared<DebugInfo>(
      DebugInfo::parse(out.relocatable ? elf->with_applied_debug_relocations(base) : *elf));
  out.debug = debug;

  std::uint64_t covered_end = 0;
  bool have_prev = false;
  for (const Candidate& c : candidates) {
    if (have_prev && c.addr < covered_end) continue;  // alias or overlap
    const ElfSection& sec = sections[c.section];
    const std::uint64_t sec_base = base[sec.index];
    if (c.addr < sec_base || c.size > sec.size || c.addr - sec_base > sec.size - c.size) continue;
    RawFunction f;
    f.name = c.name;
    f.start_addr = c.addr;
    f.size = c.size;
    f.section = sec.name;
    ByteSpan data = elf->section_data(sec);
    if (!data.empty()) {
      auto first = data.begin() + static_cast<std::ptrdiff_t>(c.addr - sec_base);
      f.bytes.assign(first, first + static_cast<std::ptrdiff_t>(c.size));
    } else {
      continue;  // NOBITS executable section: nothing to decode
    }
    if (arm) {
      f.entry_mode = c.thumb ? CodeMode::Thumb : CodeMode::Native;
      auto it = mapping.find(c.section);
      if (it != mapping.end()) {
        for (const ModeSwitch& m : it->second) {
          if (m.addr < c.addr) {
            if (!c.thumb) f.entry_mode = m.mode == CodeMode::Data ? f.entry_mode : m.mode;
            continue;
          }
          if (m.addr >= c.addr + c.size) break;
          if (m.addr == c.addr && m.mode != CodeMode::Data) {
            f.entry_mode = m.mode;
            continue;
          }
          f.mode_switches.push_back(m);
        }
      }
      if (c.thumb) f.entry_mode = CodeMode::Thumb;
    }
    if (const DwarfFunction* df = debug->function_at(c.addr)) {
      f.debug_name = df->name;
      f.source_file = df->decl_file;
      f.source_line = df->decl_line;
    }
    if (!f.source_file || !f.source_line) {
      if (auto row = debug->line_at(c.addr); row && row->address == c.addr && !row->file.empty()) {
        f.source_file = row->file;
        f.source_line = row->line;
      }
    }
    covered_end = c.addr + c.size;
    have_prev = true;
    out.functions.push_back(std::move(f));
  }
  if (out.functions.empty()) {
    throw Error(ErrorCode::NoSymbols, "no loadable function bodies");
  }

  resolve_stubs(*elf, out);
  if (out.relocatable) {
    for (const auto& table : elf->relocations()) {
      if (table.target_section >= sections.size()) continue;
      if (!sections[table.target_section].executable()) continue;
      const std::uint64_t sec_base = base[table.target_section];
      for (const auto& rel : table.entries) {
        if (!rel.symbol_name.empty() && !elf->section(rel.symbol_name)) {
          out.code_relocations.emplace(sec_base + rel.offset, rel.symbol_name);
        }
      }
    }
  }
  return out;
}

std::optional<TypeSignature> read_type_signature(const RawFunction& fn,
                                                 const DebugInfo& debug_info) {
  const DwarfFunction* df = debug_info.function_at(fn.start_addr);
  if (!df) return std::nullopt;
  TypeSignature sig;
  sig.n_args = static_cast<unsigned>(df->param_types.size());
  for (const auto& p : df->param_types) {
    // A parameter without a type reference is an untyped (K&R) int.
    sig.arg_type_ids.push_back(p ? type_prime(debug_info.classify_type(p))
                                 : type_prime(BasicType::Int));
  }
  sig.return_type_id = type_prime(debug_info.classify_type(df->return_type));
  return sig;
}

}  // namespace tiknib
