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

#include "tiknib/dwarf.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

namespace tiknib {

namespace {

// Tags.
constexpr std::uint16_t kTagArrayType = 0x01;
constexpr std::uint16_t kTagClassType = 0x02;
constexpr std::uint16_t kTagEnumerationType = 0x04;
constexpr std::uint16_t kTagFormalParameter = 0x05;
constexpr std::uint16_t kTagPointerType = 0x0f;
constexpr std::uint16_t kTagReferenceType = 0x10;
constexpr std::uint16_t kTagCompileUnit = 0x11;
constexpr std::uint16_t kTagStringType = 0x12;
constexpr std::uint16_t kTagStructureType = 0x13;
constexpr std::uint16_t kTagSubroutineType = 0x15;
constexpr std::uint16_t kTagTypedef = 0x16;
constexpr std::uint16_t kTagUnionType = 0x17;
constexpr std::uint16_t kTagPtrToMemberType = 0x1f;
constexpr std::uint16_t kTagBaseType = 0x24;
constexpr std::uint16_t kTagConstType = 0x26;
constexpr std::uint16_t kTagPackedType = 0x2d;
constexpr std::uint16_t kTagSubprogram = 0x2e;
constexpr std::uint16_t kTagVolatileType = 0x35;
constexpr std::uint16_t kTagRestrictType = 0x37;
constexpr std::uint16_t kTagUnspecifiedType = 0x3b;
constexpr std::uint16_t kTagPartialUnit = 0x3c;
constexpr std::uint16_t kTagSharedType = 0x40;
constexpr std::uint16_t kTagRvalueReferenceType = 0x42;
constexpr std::uint16_t kTagAtomicType = 0x47;
constexpr std::uint16_t kTagSkeletonUnit = 0x4a;
constexpr std::uint16_t kTagImmutableType = 0x4b;

// Attributes.
constexpr std::uint64_t kAtName = 0x03;
constexpr std::uint64_t kAtByteSize = 0x0b;
constexpr std::uint64_t kAtStmtList = 0x10;
constexpr std::uint64_t kAtLowPc = 0x11;
constexpr std::uint64_t kAtHighPc = 0x12;
constexpr std::uint64_t kAtCompDir = 0x1b;
constexpr std::uint64_t kAtAbstractOrigin = 0x31;
constexpr std::uint64_t kAtDeclFile = 0x3a;
constexpr std::uint64_t kAtDeclLine = 0x3b;
constexpr std::uint64_t kAtEncoding = 0x3e;
constexpr std::uint64_t kAtSpecification = 0x47;
constexpr std::uint64_t kAtType = 0x49;
constexpr std::uint64_t kAtRanges = 0x55;
constexpr std::uint64_t kAtStrOffsetsBase = 0x72;
constexpr std::uint64_t kAtAddrBase = 0x73;
constexpr std::uint64_t kAtRnglistsBase = 0x74;
constexpr std::uint64_t kAtGnuRangesBase = 0x2132;
constexpr std::uint64_t kAtGnuAddrBase = 0x2133;

// Forms.
constexpr std::uint64_t kFormAddr = 0x01;
constexpr std::uint64_t kFormBlock2 = 0x03;
constexpr std::uint64_t kFormBlock4 = 0x04;
constexpr std::uint64_t kFormData2 = 0x05;
constexpr std::uint64_t kFormData4 = 0x06;
constexpr std::uint64_t kFormData8 = 0x07;
constexpr std::uint64_t kFormString = 0x08;
constexpr std::uint64_t kFormBlock = 0x09;
constexpr std::uint64_t kFormBlock1 = 0x0a;
constexpr std::uint64_t kFormData1 = 0x0b;
constexpr std::uint64_t kFormFlag = 0x0c;
constexpr std::uint64_t kFormSdata = 0x0d;
constexpr std::uint64_t kFormStrp = 0x0e;
constexpr std::uint64_t kFormUdata = 0x0f;
constexpr std::uint64_t kFormRefAddr = 0x10;
constexpr std::uint64_t kFormRef1 = 0x11;
constexpr std::uint64_t kFormRef2 = 0x12;
constexpr std::uint64_t kFormRef4 = 0x13;
constexpr std::uint64_t kFormRef8 = 0x14;
constexpr std::uint64_t kFormRefUdata = 0x15;
constexpr std::uint64_t kFormIndirect = 0x16;
constexpr std::uint64_t kFormSecOffset = 0x17;
constexpr std::uint64_t kFormExprloc = 0x18;
constexpr std::uint64_t kFormFlagPresent = 0x19;
constexpr std::uint64_t kFormStrx = 0x1a;
constexpr std::uint64_t kFormAddrx = 0x1b;
constexpr std::uint64_t kFormRefSup4 = 0x1c;
constexpr std::uint64_t kFormStrpSup = 0x1d;
constexpr std::uint64_t kFormData16 = 0x1e;
constexpr std::uint64_t kFormLineStrp = 0x1f;
constexpr std::uint64_t kFormRefSig8 = 0x20;
constexpr std::uint64_t kFormImplicitConst = 0x21;
constexpr std::uint64_t kFormLoclistx = 0x22;
constexpr std::uint64_t kFormRnglistx = 0x23;
constexpr std::uint64_t kFormRefSup8 = 0x24;
constexpr std::uint64_t kFormStrx1 = 0x25;
constexpr std::uint64_t kFormStrx2 = 0x26;
constexpr std::uint64_t kFormStrx3 = 0x27;
constexpr std::uint64_t kFormStrx4 = 0x28;
constexpr std::uint64_t kFormAddrx1 = 0x29;
constexpr std::uint64_t kFormAddrx2 = 0x2a;
constexpr std::uint64_t kFormAddrx3 = 0x2b;
constexpr std::uint64_t kFormAddrx4 = 0x2c;
constexpr std::uint64_t kFormGnuAddrIndex = 0x1f01;
constexpr std::uint64_t kFormGnuStrIndex = 0x1f02;
constexpr std::uint64_t kFormGnuRefAlt = 0x1f20;
constexpr std::uint64_t kFormGnuStrpAlt = 0x1f21;

// Line-table content types.
constexpr std::uint64_t kLnctPath = 0x1;
constexpr std::uint64_t kLnctDirectoryIndex = 0x2;

// Base type encodings.
constexpr std::uint8_t kAteBoolean = 0x02;
constexpr std::uint8_t kAteComplexFloat = 0x03;
constexpr std::uint8_t kAteFloat = 0x04;
constexpr std::uint8_t kAteSigned = 0x05;
constexpr std::uint8_t kAteSignedChar = 0x06;
constexpr std::uint8_t kAteUnsigned = 0x07;
constexpr std::uint8_t kAteUnsignedChar = 0x08;
constexpr std::uint8_t kAteImaginaryFloat = 0x09;
constexpr std::uint8_t kAteDecimalFloat = 0x0f;
constexpr std::uint8_t kAteUtf = 0x10;

bool is_type_tag(std::uint16_t tag) {
  switch (tag) {
    case kTagArrayType: case kTagClassType: case kTagEnumerationType:
    case kTagPointerType: case kTagReferenceType: case kTagStringType:
    case kTagStructureType: case kTagSubroutineType: case kTagTypedef:
    case kTagUnionType: case kTagPtrToMemberType: case kTagBaseType:
    case kTagConstType: case kTagPackedType: case kTagVolatileType:
    case kTagRestrictType: case kTagUnspecifiedType: case kTagSharedType:
    case kTagRvalueReferenceType: case kTagAtomicType: case kTagImmutableType:
      return true;
    default:
      return false;
  }
}

std::string make_path(std::string_view dir, std::string_view name,
                      const std::string& comp_dir) {
  namespace fs = std::filesystem;
  fs::path p{std::string(name)};
  if (!p.is_absolute()) {
    fs::path d{std::string(dir)};
    if (!d.is_absolute() && !comp_dir.empty()) d = fs::path(comp_dir) / d;
    p = d / p;
  }
  p = p.lexically_normal();
  if (!comp_dir.empty()) {
    fs::path base = fs::path(comp_dir).lexically_normal();
    fs::path rel = p.lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  }
  return p.generic_string();
}

}  // namespace

class DwarfParser {
 public:
  explicit DwarfParser(const ElfFile& elf) : elf_(elf) {
    info_ = elf.section_data(".debug_info");
    abbrev_ = elf.section_data(".debug_abbrev");
    str_ = elf.section_data(".debug_str");
    line_str_ = elf.section_data(".debug_line_str");
    str_offsets_ = elf.section_data(".debug_str_offsets");
    addr_ = elf.section_data(".debug_addr");
    ranges_ = elf.section_data(".debug_ranges");
    rnglists_ = elf.section_data(".debug_rnglists");
    line_ = elf.section_data(".debug_line");
    for (const auto& s : elf.sections()) {
      if ((s.flags & 0x800) != 0 && s.name.rfind(".debug_", 0) == 0) {
        // SHF_COMPRESSED sections would need zlib; report instead of misparsing.
        throw Error(ErrorCode::MalformedDebugInfo, "compressed debug section " + s.name);
      }
    }
  }

  DebugInfo run() {
    ByteReader r = reader(info_);
    while (r.remaining() > 0) parse_unit(r);
    finish();
    std::stable_sort(out_.rows_.begin(), out_.rows_.end(),
                     [](const LineRow& a, const LineRow& b) { return a.address < b.address; });
    return std::move(out_);
  }

 private:
  struct AttrSpec {
    std::uint64_t attr;
    std::uint64_t form;
    std::int64_t implicit_const;
  };
  struct Abbrev {
    std::uint16_t tag = 0;
    bool children = false;
    std::vector<AttrSpec> specs;
  };
  using AbbrevTable = std::unordered_map<std::uint64_t, Abbrev>;

  struct Unit {
    std::uint64_t offset = 0;
    std::uint64_t end = 0;
    bool dwarf64 = false;
    std::uint16_t version = 0;
    std::uint8_t addr_size = 8;
    std::uint64_t str_offsets_base = 8;
    std::uint64_t addr_base = 8;
    std::uint64_t rnglists_base = 0;
    bool has_rnglists_base = false;
    std::uint64_t ranges_base = 0;
    std::uint64_t base_address = 0;
    std::string comp_dir;
    std::vector<std::string> files;
  };

  struct Value {
    std::uint64_t form = 0;
    std::uint64_t u = 0;
    std::int64_t s = 0;
    std::string_view str;
    bool is_str = false;
    bool pending_strx = false;
    bool pending_addrx = false;
  };

  struct RawParam {
    std::optional<std::uint64_t> type;
    std::optional<std::uint64_t> origin;
  };

  struct RawSub {
    std::optional<std::string> name;
    std::optional<std::string> decl_file;
    std::optional<std::uint32_t> decl_line;
    std::optional<std::uint64_t> type;
    std::optional<std::uint64_t> origin;
    std::vector<RawParam> params;
    std::vector<AddressRange> ranges;
    std::optional<std::uint64_t> low_pc;
  };

  ByteReader reader(ByteSpan data) const {
    return elf_.reader(data, ErrorCode::MalformedDebugInfo);
  }

  [[noreturn]] static void fail(const std::string& what) {
    throw Error(ErrorCode::MalformedDebugInfo, what);
  }

  const AbbrevTable& abbrevs(std::uint64_t offset) {
    auto it = abbrev_cache_.find(offset);
    if (it != abbrev_cache_.end()) return it->second;
    AbbrevTable table;
    ByteReader r = reader(abbrev_);
    r.seek(offset);
    while (true) {
      std::uint64_t code = r.uleb128();
      if (code == 0) break;
      Abbrev a;
      a.tag = static_cast<std::uint16_t>(r.uleb128());
      a.children = r.u8() != 0;
      while (true) {
        std::uint64_t attr = r.uleb128();
        std::uint64_t form = r.uleb128();
        std::int64_t implicit = 0;
        if (form == kFormImplicitConst) implicit = r.sleb128();
        if (attr == 0 && form == 0) break;
        a.specs.push_back({attr, form, implicit});
      }
      table.emplace(code, std::move(a));
    }
    return abbrev_cache_.emplace(offset, std::move(table)).first->second;
  }

  std::uint64_t offset_size(const Unit& u) const { return u.dwarf64 ? 8 : 4; }

  std::string_view strp(ByteSpan table, std::uint64_t offset) const {
    if (offset >= table.size()) fail("string offset out of range");
    return string_at(table, offset);
  }

  std::string_view strx(const Unit& u, std::uint64_t index) const {
    std::uint64_t width = offset_size(u);
    std::uint64_t at = u.str_offsets_base + index * width;
    ByteReader r = reader(str_offsets_);
    r.seek(at);
    return strp(str_, r.uint_n(width));
  }

  std::uint64_t addrx(const Unit& u, std::uint64_t index) const {
    ByteReader r = reader(addr_);
    r.seek(u.addr_base + index * u.addr_size);
    return r.uint_n(u.addr_size);
  }

  Value read_form(ByteReader& r, std::uint64_t form, const Unit& u, std::int64_t implicit) {
    Value v;
    v.form = form;
    switch (form) {
      case kFormAddr: v.u = r.uint_n(u.addr_size); break;
      case kFormBlock2: r.skip(r.u16()); break;
      case kFormBlock4: r.skip(r.u32()); break;
      case kFormData2: v.u = r.u16(); break;
      case kFormData4: v.u = r.u32(); break;
      case kFormData8: v.u = r.u64(); break;
      case kFormData16: r.skip(16); break;
      case kFormString: v.str = r.cstr(); v.is_str = true; break;
      case kFormBlock: case kFormExprloc: r.skip(r.uleb128()); break;
      case kFormBlock1: r.skip(r.u8()); break;
      case kFormData1: case kFormFlag: v.u = r.u8(); break;
      case kFormSdata: v.s = r.sleb128(); v.u = static_cast<std::uint64_t>(v.s); break;
      case kFormUdata: v.u = r.uleb128(); break;
      case kFormStrp: v.str = strp(str_, r.uint_n(offset_size(u))); v.is_str = true; break;
      case kFormLineStrp: v.str = strp(line_str_, r.uint_n(offset_size(u))); v.is_str = true; break;
      case kFormStrpSup: case kFormGnuStrpAlt: r.uint_n(offset_size(u)); break;
      case kFormRefAddr:
        v.u = r.uint_n(u.version <= 2 ? u.addr_size : offset_size(u));
        break;
      case kFormRef1: v.u = u.offset + r.u8(); break;
      case kFormRef2: v.u = u.offset + r.u16(); break;
      case kFormRef4: v.u = u.offset + r.u32(); break;
      case kFormRef8: v.u = u.offset + r.u64(); break;
      case kFormRefUdata: v.u = u.offset + r.uleb128(); break;
      case kFormRefSup4: r.u32(); break;
      case kFormRefSup8: case kFormRefSig8: r.u64(); break;
      case kFormGnuRefAlt: r.uint_n(offset_size(u)); break;
      case kFormIndirect: {
        std::uint64_t actual = r.uleb128();
        return read_form(r, actual, u, implicit);
      }
      case kFormSecOffset: v.u = r.uint_n(offset_size(u)); break;
      case kFormFlagPresent: v.u = 1; break;
      case kFormImplicitConst: v.s = implicit; v.u = static_cast<std::uint64_t>(implicit); break;
      case kFormStrx: case kFormGnuStrIndex: v.u = r.uleb128(); v.pending_strx = true; break;
      case kFormStrx1: v.u = r.u8(); v.pending_strx = true; break;
      case kFormStrx2: v.u = r.u16(); v.pending_strx = true; break;
      case kFormStrx3: v.u = r.uint_n(3); v.pending_strx = true; break;
      case kFormStrx4: v.u = r.u32(); v.pending_strx = true; break;
      case kFormAddrx: case kFormGnuAddrIndex: v.u = r.uleb128(); v.pending_addrx = true; break;
      case kFormAddrx1: v.u = r.u8(); v.pending_addrx = true; break;
      case kFormAddrx2: v.u = r.u16(); v.pending_addrx = true; break;
      case kFormAddrx3: v.u = r.uint_n(3); v.pending_addrx = true; break;
      case kFormAddrx4: v.u = r.u32(); v.pending_addrx = true; break;
      case kFormLoclistx: case kFormRnglistx: v.u = r.uleb128(); break;
      default:
        fail("unknown form 0x" + std::to_string(form));
    }
    return v;
  }

  void resolve(Value& v, const Unit& u) const {
    if (v.pending_strx) {
      v.str = strx(u, v.u);
      v.is_str = true;
      v.pending_strx = false;
    } else if (v.pending_addrx) {
      v.u = addrx(u, v.u);
      v.pending_addrx = false;
    }
  }

  static bool is_constant_form(std::uint64_t form) {
    switch (form) {
      case kFormData1: case kFormData2: case kFormData4: case kFormData8:
      case kFormSdata: case kFormUdata: case kFormImplicitConst:
        return true;
      default:
        return false;
    }
  }

  std::vector<AddressRange> read_ranges(const Unit& u, const Value& v) const {
    std::vector<AddressRange> out;
    if (u.version >= 5) {
      std::uint64_t offset = v.u;
      if (v.form == kFormRnglistx) {
        ByteReader idx = reader(rnglists_);
        idx.seek(u.rnglists_base + v.u * offset_size(u));
        offset = u.rnglists_base + idx.uint_n(offset_size(u));
      }
      ByteReader r = reader(rnglists_);
      r.seek(offset);
      std::uint64_t base = u.base_address;
      while (true) {
        std::uint8_t kind = r.u8();
        if (kind == 0) break;  // DW_RLE_end_of_list
        switch (kind) {
          case 1: base = addrx(u, r.uleb128()); break;  // base_addressx
          case 2: {  // startx_endx
            std::uint64_t b = addrx(u, r.uleb128());
            std::uint64_t e = addrx(u, r.uleb128());
            out.push_back({b, e});
            break;
          }
          case 3: {  // startx_length
            std::uint64_t b = addrx(u, r.uleb128());
            out.push_back({b, b + r.uleb128()});
            break;
          }
          case 4: {  // offset_pair
            std::uint64_t b = r.uleb128();
            std::uint64_t e = r.uleb128();
            out.push_back({base + b, base + e});
            break;
          }
          case 5: base = r.uint_n(u.addr_size); break;  // base_address
          case 6: {  // start_end
            std::uint64_t b = r.uint_n(u.addr_size);
            out.push_back({b, r.uint_n(u.addr_size)});
            break;
          }
          case 7: {  // start_length
            std::uint64_t b = r.uint_n(u.addr_size);
            out.push_back({b, b + r.uleb128()});
            break;
          }
          default:
            fail("bad range list entry kind");
        }
      }
    } else {
      ByteReader r = reader(ranges_);
      r.seek(v.u + u.ranges_base);
      const std::uint64_t max = u.addr_size == 8 ? ~0ull : 0xffffffffull;
      std::uint64_t base = u.base_address;
      while (true) {
        std::uint64_t b = r.uint_n(u.addr_size);
        std::uint64_t e = r.uint_n(u.addr_size);
        if (b == 0 && e == 0) break;
        if (b == max) {
          base = e;
          continue;
        }
        out.push_back({base + b, base + e});
      }
    }
    std::erase_if(out, [](const AddressRange& a) { return a.end <= a.begin; });
    std::sort(out.begin(), out.end(),
              [](const AddressRange& a, const AddressRange& b) { return a.begin < b.begin; });
    return out;
  }

  // Parses the line-table header (file names) and program (rows).
  void parse_line_table(Unit& u, std::uint64_t offset) {
    if (offset >= line_.size()) fail("stmt_list out of range");
    ByteReader r = reader(line_);
    r.seek(offset);
    bool dwarf64 = false;
    std::uint64_t length = r.u32();
    if (length == 0xffffffff) {
      dwarf64 = true;
      length = r.u64();
    }
    const std::uint64_t end = r.offset() + length;
    if (end > line_.size()) fail("line table overruns section");
    const std::uint16_t version = r.u16();
    if (version < 2 || version > 5) fail("unsupported line table version");
    if (version >= 5) {
      r.u8();  // address size
      r.u8();  // segment selector size
    }
    const std::uint64_t header_length = r.uint_n(dwarf64 ? 8 : 4);
    const std::uint64_t program_start = r.offset() + header_length;
    const std::uint8_t min_inst = r.u8();
    std::uint8_t max_ops = 1;
    if (version >= 4) max_ops = r.u8();
    (void)max_ops;
    const bool default_is_stmt = r.u8() != 0;
    (void)default_is_stmt;
    const std::int8_t line_base = r.s8();
    const std::uint8_t line_range = r.u8();
    const std::uint8_t opcode_base = r.u8();
    if (line_range == 0) fail("line_range of zero");
    std::vector<std::uint8_t> std_lengths(opcode_base > 0 ? opcode_base - 1 : 0);
    for (auto& len : std_lengths) len = r.u8();

    Unit line_unit = u;
    line_unit.dwarf64 = dwarf64;
    std::vector<std::string> dirs;
    std::vector<std::string> files;
    if (version >= 5) {
      auto read_entries = [&](std::vector<std::pair<std::string, std::uint64_t>>& entries) {
        std::uint8_t format_count = r.u8();
        std::vector<std::pair<std::uint64_t, std::uint64_t>> format(format_count);
        for (auto& f : format) {
          f.first = r.uleb128();
          f.second = r.uleb128();
        }
        std::uint64_t count = r.uleb128();
        for (std::uint64_t i = 0; i < count; ++i) {
          std::string path;
          std::uint64_t dir_index = 0;
          for (const auto& [content, form] : format) {
            Value v = read_form(r, form, line_unit, 0);
            resolve(v, line_unit);
            if (content == kLnctPath) path = std::string(v.str);
            if (content == kLnctDirectoryIndex) dir_index = v.u;
          }
          entries.emplace_back(std::move(path), dir_index);
        }
      };
      std::vector<std::pair<std::string, std::uint64_t>> dir_entries;
      std::vector<std::pair<std::string, std::uint64_t>> file_entries;
      read_entries(dir_entries);
      read_entries(file_entries);
      for (auto& d : dir_entries) dirs.push_back(d.first);
      for (auto& [name, dir_index] : file_entries) {
        std::string dir = dir_index < dirs.size() ? dirs[dir_index] : std::string();
        files.push_back(make_path(dir, name, u.comp_dir));
      }
    } else {
      dirs.push_back(u.comp_dir);
      while (true) {
        std::string_view d = r.cstr();
        if (d.empty()) break;
        dirs.emplace_back(d);
      }
      files.emplace_back();  // index 0 unused before DWARF 5
      while (true) {
        std::string_view name = r.cstr();
        if (name.empty()) break;
        std::uint64_t dir_index = r.uleb128();
        r.uleb128();
        r.uleb128();
        std::string dir = dir_index < dirs.size() ? dirs[dir_index] : std::string();
        files.push_back(make_path(dir, name, u.comp_dir));
      }
    }
    u.files = files;

    // Line program.
    r.seek(program_start);
    auto file_name = [&](std::uint64_t index) -> std::string {
      return index < files.size() ? files[index] : std::string();
    };
    std::uint64_t address = 0;
    std::uint64_t file = 1;
    std::int64_t line = 1;
    auto emit = [&](bool end_sequence) {
      LineRow row;
      row.address = address;
      row.line = static_cast<std::uint32_t>(std::max<std::int64_t>(line, 0));
      row.file = file_name(file);
      row.end_sequence = end_sequence;
      out_.rows_.push_back(std::move(row));
    };
    while (r.offset() < end) {
      std::uint8_t op = r.u8();
      if (op >= opcode_base) {
        std::uint8_t adjusted = op - opcode_base;
        address += static_cast<std::uint64_t>(adjusted / line_range) * min_inst;
        line += line_base + (adjusted % line_range);
        emit(false);
        continue;
      }
      switch (op) {
        case 0: {  // extended
          std::uint64_t len = r.uleb128();
          std::size_t start = r.offset();
          if (len == 0) break;
          std::uint8_t sub = r.u8();
          if (sub == 1) {  // end_sequence
            emit(true);
            address = 0;
            file = 1;
            line = 1;
          } else if (sub == 2) {  // set_address
            address = r.uint_n(std::min<std::uint64_t>(len - 1, 8));
          }
          r.seek(start + len);
          break;
        }
        case 1: emit(false); break;  // copy
        case 2: address += r.uleb128() * min_inst; break;
        case 3: line += r.sleb128(); break;
        case 4: file = r.uleb128(); break;
        case 5: r.uleb128(); break;
        case 6: case 7: case 10: case 11: break;
        case 8: address += static_cast<std::uint64_t>((255 - opcode_base) / line_range) * min_inst; break;
        case 9: address += r.u16(); break;
        case 12: r.uleb128(); break;
        default:
          for (std::uint8_t i = 0; i < std_lengths[op - 1]; ++i) r.uleb128();
      }
    }
  }

  void parse_unit(ByteReader& r) {
    Unit u;
    u.offset = r.offset();
    std::uint64_t length = r.u32();
    if (length == 0xffffffff) {
      u.dwarf64 = true;
      length = r.u64();
    }
    if (length > r.remaining()) fail("unit length overruns .debug_info");
    u.end = r.offset() + length;
    u.version = r.u16();
    if (u.version < 2 || u.version > 5) fail("unsupported DWARF version " + std::to_string(u.version));
    std::uint64_t abbrev_offset = 0;
    std::uint8_t unit_type = 1;
    if (u.version >= 5) {
      unit_type = r.u8();
      u.addr_size = r.u8();
      abbrev_offset = r.uint_n(offset_size(u));
      if (unit_type == 2 || unit_type == 6) {  // type units
        r.u64();
        r.uint_n(offset_size(u));
      } else if (unit_type == 4 || unit_type == 5) {  // skeleton / split
        r.u64();
      }
    } else {
      abbrev_offset = r.uint_n(offset_size(u));
      u.addr_size = r.u8();
    }
    if (u.addr_size != 4 && u.addr_size != 8) fail("unsupported address size");
    const AbbrevTable& table = abbrevs(abbrev_offset);

    struct Frame {
      std::uint16_t tag;
      std::uint64_t offset;
    };
    std::vector<Frame> stack;
    bool first = true;
    while (r.offset() < u.end) {
      const std::uint64_t die = r.offset();
      const std::uint64_t code = r.uleb128();
      if (code == 0) {
        if (!stack.empty()) stack.pop_back();
        continue;
      }
      auto it = table.find(code);
      if (it == table.end()) fail("unknown abbreviation code");
      const Abbrev& a = it->second;

      std::vector<std::pair<std::uint64_t, Value>> attrs;
      attrs.reserve(a.specs.size());
      for (const AttrSpec& spec : a.specs) {
        attrs.emplace_back(spec.attr, read_form(r, spec.form, u, spec.implicit_const));
      }

      if (first) {
        first = false;
        std::optional<std::uint64_t> stmt_list;
        for (auto& [attr, v] : attrs) {
          if (attr == kAtStrOffsetsBase) u.str_offsets_base = v.u;
          if (attr == kAtAddrBase || attr == kAtGnuAddrBase) u.addr_base = v.u;
          if (attr == kAtRnglistsBase) {
            u.rnglists_base = v.u;
            u.has_rnglists_base = true;
          }
          if (attr == kAtGnuRangesBase) u.ranges_base = v.u;
        }
        for (auto& [attr, v] : attrs) {
          resolve(v, u);
          if (attr == kAtCompDir && v.is_str) u.comp_dir = std::string(v.str);
          if (attr == kAtLowPc) u.base_address = v.u;
          if (attr == kAtStmtList) stmt_list = v.u;
        }
        if (a.tag != kTagCompileUnit && a.tag != kTagPartialUnit && a.tag != kTagSkeletonUnit &&
            unit_type != 2 && unit_type != 6) {
          fail("unit does not start with a unit DIE");
        }
        if (stmt_list && !line_.empty()) parse_line_table(u, *stmt_list);
      } else {
        for (auto& [attr, v] : attrs) resolve(v, u);
      }

      handle_die(u, a.tag, die, attrs, stack.empty() ? nullptr : &stack.back());

      if (a.children) stack.push_back({a.tag, die});
    }
    r.seek(u.end);
  }

  template <typename FrameT>
  void handle_die(const Unit& u, std::uint16_t tag, std::uint64_t die,
                  const std::vector<std::pair<std::uint64_t, Value>>& attrs,
                  const FrameT* parent) {
    auto find = [&](std::uint64_t attr) -> const Value* {
      for (const auto& [key, v] : attrs) {
        if (key == attr) return &v;
      }
      return nullptr;
    };

    if (is_type_tag(tag)) {
      DebugInfo::TypeDie t;
      t.tag = tag;
      if (const Value* v = find(kAtType); v && v->form != kFormRefSig8) t.type = v->u;
      if (const Value* v = find(kAtEncoding)) t.encoding = static_cast<std::uint8_t>(v->u);
      if (const Value* v = find(kAtByteSize)) t.byte_size = v->u;
      out_.types_[die] = t;
      return;
    }

    if (tag == kTagFormalParameter) {
      if (!parent || parent->tag != kTagSubprogram) return;
      RawParam p;
      if (const Value* v = find(kAtType); v && v->form != kFormRefSig8) p.type = v->u;
      if (const Value* v = find(kAtAbstractOrigin)) p.origin = v->u;
      subs_[parent->offset].params.push_back(p);
      param_types_[die] = p;
      return;
    }

    if (tag != kTagSubprogram) return;
    RawSub& s = subs_[die];
    if (const Value* v = find(kAtName); v && v->is_str) s.name = std::string(v->str);
    if (const Value* v = find(kAtDeclFile)) {
      if (v->u < u.files.size() && !u.files[v->u].empty()) s.decl_file = u.files[v->u];
    }
    if (const Value* v = find(kAtDeclLine)) s.decl_line = static_cast<std::uint32_t>(v->u);
    if (const Value* v = find(kAtType); v && v->form != kFormRefSig8) s.type = v->u;
    if (const Value* v = find(kAtAbstractOrigin)) s.origin = v->u;
    if (!s.origin) {
      if (const Value* v = find(kAtSpecification)) s.origin = v->u;
    }
    const Value* low = find(kAtLowPc);
    const Value* high = find(kAtHighPc);
    if (low) s.low_pc = low->u;
    if (low && high) {
      std::uint64_t end = is_constant_form(high->form) ? low->u + high->u : high->u;
      if (end > low->u) s.ranges.push_back({low->u, end});
    } else if (const Value* ranges = find(kAtRanges)) {
      s.ranges = read_ranges(u, *ranges);
    }
  }

  // Walks abstract_origin / specification links, filling absent attributes.
  void finish() {
    std::vector<std::uint64_t> order;
    for (const auto& [offset, sub] : subs_) {
      if (!sub.ranges.empty()) order.push_back(offset);
    }
    std::sort(order.begin(), order.end());
    for (std::uint64_t offset : order) {
      const RawSub& concrete = subs_.at(offset);
      DwarfFunction f;
      f.ranges = concrete.ranges;
      f.entry = concrete.low_pc.value_or(f.ranges.front().begin);
      std::optional<std::string> name = concrete.name;
      std::optional<std::string> file = concrete.decl_file;
      std::optional<std::uint32_t> line = concrete.decl_line;
      std::optional<std::uint64_t> type = concrete.type;
      bool type_known = concrete.type.has_value();
      const RawSub* sig = &concrete;
      const RawSub* cur = &concrete;
      for (int depth = 0; depth < 16 && cur->origin; ++depth) {
        auto it = subs_.find(*cur->origin);
        if (it == subs_.end()) break;
        cur = &it->second;
        if (!name) name = cur->name;
        if (!file) file = cur->decl_file;
        if (!line) line = cur->decl_line;
        if (!type_known && cur->type) {
          type = cur->type;
          type_known = true;
        }
        if (!cur->params.empty() || sig->params.empty()) sig = cur;
      }
      f.name = name.value_or("");
      f.decl_file = file;
      f.decl_line = line;
      f.return_type = type;
      for (const RawParam& p : sig->params) {
        std::optional<std::uint64_t> t = p.type;
        const RawParam* cp = &p;
        for (int depth = 0; depth < 16 && !t && cp->origin; ++depth) {
          auto it = param_types_.find(*cp->origin);
          if (it == param_types_.end()) break;
          cp = &it->second;
          t = cp->type;
        }
        f.param_types.push_back(t);
      }
      out_.functions_.push_back(std::move(f));
    }
  }

  const ElfFile& elf_;
  ByteSpan info_, abbrev_, str_, line_str_, str_offsets_, addr_, ranges_, rnglists_, line_;
  std::unordered_map<std::uint64_t, AbbrevTable> abbrev_cache_;
  std::map<std::uint64_t, RawSub> subs_;
  std::unordered_map<std::uint64_t, RawParam> param_types_;
  DebugInfo out_;
};

DebugInfo DebugInfo::parse(const ElfFile& elf) {
  if (!elf.section(".debug_info")) return DebugInfo{};
  return DwarfParser(elf).run();
}

const DwarfFunction* DebugInfo::function_at(std::uint64_t address) const {
  for (const auto& f : functions_) {
    if (f.entry == address) return &f;
  }
  const DwarfFunction* best = nullptr;
  for (const auto& f : functions_) {
    for (const auto& r : f.ranges) {
      if (r.contains(address)) {
        if (!best) best = &f;
      }
    }
  }
  return best;
}

std::optional<LineRow> DebugInfo::line_at(std::uint64_t address) const {
  // rows_ is sorted by address; find the last row <= address whose
  // successor in the same sequence lies beyond it.
  auto it = std::upper_bound(rows_.begin(), rows_.end(), address,
                             [](std::uint64_t a, const LineRow& row) { return a < row.address; });
  while (it != rows_.begin()) {
    --it;
    if (it->end_sequence) return std::nullopt;
    if (it->line != 0) return *it;
  }
  return std::nullopt;
}

BasicType DebugInfo::classify_type(std::optional<std::uint64_t> die) const {
  for (int depth = 0; depth < 64; ++depth) {
    if (!die) return BasicType::Void;
    auto it = types_.find(*die);
    if (it == types_.end()) return BasicType::Int;
    const TypeDie& t = it->second;
    switch (t.tag) {
      case kTagTypedef: case kTagConstType: case kTagVolatileType:
      case kTagRestrictType: case kTagAtomicType: case kTagPackedType:
      case kTagSharedType: case kTagImmutableType:
        die = t.type;
        continue;
      case kTagBaseType:
        switch (t.encoding) {
          case kAteFloat: case kAteComplexFloat: case kAteImaginaryFloat: case kAteDecimalFloat:
            return BasicType::Float;
          case kAteSignedChar: case kAteUnsignedChar:
            return BasicType::Char;
          case kAteBoolean: case kAteSigned: case kAteUnsigned: case kAteUtf:
            if (t.byte_size == 1) return BasicType::Char;
            if (t.byte_size == 2) return BasicType::Short;
            return BasicType::Int;
          default:
            return BasicType::Int;
        }
      case kTagPointerType: case kTagReferenceType: case kTagRvalueReferenceType:
      case kTagArrayType: case kTagPtrToMemberType: case kTagSubroutineType:
      case kTagUnspecifiedType: case kTagStringType:
        return BasicType::VoidPtr;
      case kTagStructureType: case kTagClassType: case kTagUnionType:
        return BasicType::Struct;
      case kTagEnumerationType:
        return BasicType::Enum;
      default:
        return BasicType::Int;
    }
  }
  return BasicType::Int;
}

}  // namespace tiknib
