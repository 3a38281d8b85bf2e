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

// x86 / x86-64 length decoder with Intel mnemonics. Covers the one-byte,
// 0F, 0F38 and 0F3A opcode maps, x87, VEX and EVEX encodings; operands are
// decoded only as far as boundaries and direct branch targets require.

#include <array>
#include <string>

#include "tiknib/disasm.hpp"

namespace tiknib {
namespace {

constexpr std::array<const char*, 16> kCond = {"o",  "no", "b", "ae", "e", "ne", "be", "a",
                                               "s",  "ns", "p", "np", "l", "ge", "le", "g"};
constexpr std::array<const char*, 8> kAlu = {"add", "or", "adc", "sbb", "and", "sub", "xor", "cmp"};
constexpr std::array<const char*, 8> kShift = {"rol", "ror", "rcl", "rcr", "shl", "shr", "shl", "sar"};

struct OpName {
  std::uint8_t op;
  const char* name;
};

template <std::size_t N>
std::string find_name(const OpName (&table)[N], std::uint8_t op) {
  for (const OpName& e : table) {
    if (e.op == op) return e.name;
  }
  return "";
}

struct ModRM {
  unsigned mod = 0, reg = 0, rm = 0;
  bool reg_form() const { return mod == 3; }
};

class X86Decoder {
 public:
  X86Decoder(ByteSpan code, std::uint64_t addr, unsigned bits)
      : code_(code), addr_(addr), bits_(bits) {}

  Instruction run() {
    read_prefixes();
    std::uint8_t op = u8();
    if (op == 0x0f) {
      two_byte();
    } else {
      one_byte(op);
    }
    insn_.addr = addr_;
    insn_.size = static_cast<std::uint8_t>(pos_);
    if (insn_.branch_target) {
      std::uint64_t t = *insn_.branch_target;
      if (bits_ == 32) t &= 0xffffffffu;
      if (opsize_ && bits_ == 32 && (insn_.flow == FlowKind::jump || insn_.flow == FlowKind::call)) {
        t &= 0xffffu;
      }
      insn_.branch_target = t;
      if (insn_.flow == FlowKind::call) insn_.call_target = CallTarget(t);
    }
    return std::move(insn_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DecodeError(addr_, "x86: " + why + " at 0x" + hex(addr_));
  }
  static std::string hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    do {
      s.insert(s.begin(), digits[v & 0xf]);
      v >>= 4;
    } while (v);
    return s;
  }

  std::uint8_t peek(std::size_t ahead = 0) const {
    if (pos_ + ahead >= code_.size()) fail("truncated instruction");
    return code_[pos_ + ahead];
  }
  std::uint8_t u8() {
    std::uint8_t b = peek();
    ++pos_;
    if (pos_ > 15) fail("instruction longer than 15 bytes");
    return b;
  }
  std::int64_t imm(unsigned bytes) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    if (bytes < 8) {
      std::uint64_t sign = 1ull << (8 * bytes - 1);
      v = (v ^ sign) - sign;
    }
    return static_cast<std::int64_t>(v);
  }

  bool long_mode() const { return bits_ == 64; }
  bool rex_w() const { return (rex_ & 8) != 0; }
  unsigned opsize() const {
    if (rex_w()) return 64;
    return opsize_ ? 16 : 32;
  }
  unsigned z_bytes() const { return opsize() == 16 ? 2 : 4; }

  void read_prefixes() {
    while (true) {
      std::uint8_t b = peek();
      switch (b) {
        case 0x66: opsize_ = true; last_sse_ = 0x66; break;
        case 0x67: addrsize_ = true; break;
        case 0xf0: lock_ = true; break;
        case 0xf2: repne_ = true; last_sse_ = 0xf2; break;
        case 0xf3: rep_ = true; last_sse_ = 0xf3; break;
        case 0x26: case 0x2e: case 0x36: case 0x3e: case 0x64: case 0x65: break;
        default:
          if (long_mode() && (b & 0xf0) == 0x40) {
            rex_ = b;
            ++pos_;
            // A REX prefix only counts when it immediately precedes the opcode.
            std::uint8_t next = peek();
            if ((next & 0xf0) == 0x40 || next == 0x66 || next == 0x67 || next == 0xf0 ||
                next == 0xf2 || next == 0xf3 || next == 0x2e || next == 0x3e || next == 0x26 ||
                next == 0x36 || next == 0x64 || next == 0x65) {
              rex_ = 0;
              continue;
            }
            return;
          }
          return;
      }
      ++pos_;
      if (pos_ > 14) fail("too many prefixes");
    }
  }

  // Mandatory SSE prefix: F2/F3 win over 66.
  unsigned sse_prefix() const {
    if (repne_ && rep_) return last_sse_;
    if (repne_) return 0xf2;
    if (rep_) return 0xf3;
    if (opsize_) return 0x66;
    return 0;
  }

  ModRM modrm() {
    std::uint8_t b = u8();
    ModRM m{static_cast<unsigned>(b >> 6), static_cast<unsigned>((b >> 3) & 7),
            static_cast<unsigned>(b & 7)};
    if (m.mod == 3) return m;
    const bool addr16 = bits_ == 32 ? addrsize_ : false;
    if (addr16) {
      if (m.mod == 0 && m.rm == 6) {
        imm(2);
      } else if (m.mod == 1) {
        imm(1);
      } else if (m.mod == 2) {
        imm(2);
      }
      return m;
    }
    if (m.rm == 4) {
      std::uint8_t sib = u8();
      if ((sib & 7) == 5 && m.mod == 0) imm(4);
    }
    if (m.mod == 0 && m.rm == 5) {
      imm(4);
    } else if (m.mod == 1) {
      imm(1);
    } else if (m.mod == 2) {
      imm(4);
    }
    return m;
  }

  void set(const std::string& mnemonic) { insn_.mnemonic = mnemonic; }

  void rel(unsigned bytes) {
    std::int64_t d = imm(bytes);
    insn_.branch_target = addr_ + pos_ + static_cast<std::uint64_t>(d);
  }
  void jump(const std::string& mn, bool cond, unsigned rel_bytes) {
    set(mn);
    insn_.flow = FlowKind::jump;
    insn_.conditional = cond;
    rel(rel_bytes);
  }
  void indirect(FlowKind flow) {
    insn_.flow = flow;
    insn_.indirect = true;
  }
  void invalid64() {
    if (long_mode()) fail("opcode invalid in 64-bit mode");
  }

  std::string sized(const char* w16, const char* w32, const char* w64) const {
    unsigned s = opsize();
    return s == 64 ? w64 : s == 16 ? w16 : w32;
  }

  void one_byte(std::uint8_t op) {
    if (op < 0x40 && (op & 7) < 6) {
      const char* mn = kAlu[op >> 3];
      set(mn);
      switch (op & 7) {
        case 0: case 1: case 2: case 3: modrm(); break;
        case 4: imm(1); break;
        case 5: imm(z_bytes()); break;
      }
      return;
    }
    switch (op) {
      case 0x06: case 0x0e: case 0x16: case 0x1e: invalid64(); set("push"); return;
      case 0x07: case 0x17: case 0x1f: invalid64(); set("pop"); return;
      case 0x27: invalid64(); set("daa"); return;
      case 0x2f: invalid64(); set("das"); return;
      case 0x37: invalid64(); set("aaa"); return;
      case 0x3f: invalid64(); set("aas"); return;
      default: break;
    }
    if (op >= 0x40 && op <= 0x4f) {  // 32-bit only; REX handled as prefix
      set(op < 0x48 ? "inc" : "dec");
      return;
    }
    if (op >= 0x50 && op <= 0x57) { set("push"); return; }
    if (op >= 0x58 && op <= 0x5f) { set("pop"); return; }
    if (op >= 0x70 && op <= 0x7f) { jump(std::string("j") + kCond[op & 0xf], true, 1); return; }
    if (op >= 0x91 && op <= 0x97) { set("xchg"); return; }
    if (op >= 0xb0 && op <= 0xb7) { set("mov"); imm(1); return; }
    if (op >= 0xb8 && op <= 0xbf) {
      if (rex_w()) {
        set("movabs");
        imm(8);
      } else {
        set("mov");
        imm(z_bytes());
      }
      return;
    }
    if (op >= 0xd8 && op <= 0xdf) { x87(op); return; }
    switch (op) {
      case 0x60: invalid64(); set(opsize_ ? "pushaw" : "pusha"); return;
      case 0x61: invalid64(); set(opsize_ ? "popaw" : "popa"); return;
      case 0x62:
        if (long_mode() || (peek() & 0xc0) == 0xc0) { evex(); return; }
        set("bound"); modrm(); return;
      case 0x63: set(long_mode() ? "movsxd" : "arpl"); modrm(); return;
      case 0x68: set("push"); imm(long_mode() ? 4 : z_bytes()); return;
      case 0x69: set("imul"); modrm(); imm(z_bytes()); return;
      case 0x6a: set("push"); imm(1); return;
      case 0x6b: set("imul"); modrm(); imm(1); return;
      case 0x6c: case 0x6d: set("ins"); return;
      case 0x6e: case 0x6f: set("outs"); return;
      case 0x80: case 0x81: case 0x82: case 0x83: {
        if (op == 0x82) invalid64();
        ModRM m = modrm();
        set(kAlu[m.reg]);
        imm(op == 0x81 ? z_bytes() : 1);
        return;
      }
      case 0x84: case 0x85: set("test"); modrm(); return;
      case 0x86: case 0x87: set("xchg"); modrm(); return;
      case 0x88: case 0x89: case 0x8a: case 0x8b: case 0x8c: case 0x8e: set("mov"); modrm(); return;
      case 0x8d: set("lea"); modrm(); return;
      case 0x8f:
        if ((peek() & 0x1f) >= 8 && !rex_) { xop(); return; }
        set("pop");
        modrm();
        return;
      case 0x90:
        if (rex_ & 1) set("xchg");
        else if (rep_) set("pause");
        else if (opsize_) set("xchg");
        else set("nop");
        return;
      case 0x98: set(sized("cbw", "cwde", "cdqe")); return;
      case 0x99: set(sized("cwd", "cdq", "cqo")); return;
      case 0x9a:
        invalid64();
        set("call");
        imm(z_bytes());
        imm(2);
        indirect(FlowKind::call);
        return;
      case 0x9b:
        if (fused_wait()) return;
        set("fwait");
        return;
      case 0x9c: set(opsize_ ? "pushfw" : "pushf"); return;
      case 0x9d: set(opsize_ ? "popfw" : "popf"); return;
      case 0x9e: set("sahf"); return;
      case 0x9f: set("lahf"); return;
      case 0xa0: case 0xa1: case 0xa2: case 0xa3: {
        set(long_mode() ? "movabs" : "mov");
        unsigned width = long_mode() ? (addrsize_ ? 4 : 8) : (addrsize_ ? 2 : 4);
        imm(width);
        return;
      }
      case 0xa4: case 0xa5: set("movs"); return;
      case 0xa6: case 0xa7: set("cmps"); return;
      case 0xa8: set("test"); imm(1); return;
      case 0xa9: set("test"); imm(z_bytes()); return;
      case 0xaa: case 0xab: set("stos"); return;
      case 0xac: case 0xad: set("lods"); return;
      case 0xae: case 0xaf: set("scas"); return;
      case 0xc0: case 0xc1: case 0xd0: case 0xd1: case 0xd2: case 0xd3: {
        ModRM m = modrm();
        set(kShift[m.reg]);
        if (op <= 0xc1) imm(1);
        return;
      }
      case 0xc2: set("ret"); imm(2); insn_.flow = FlowKind::ret; return;
      case 0xc3: set("ret"); insn_.flow = FlowKind::ret; return;
      case 0xc4: case 0xc5:
        if (long_mode() || (peek() & 0xc0) == 0xc0) { vex(op); return; }
        set(op == 0xc4 ? "les" : "lds");
        modrm();
        return;
      case 0xc6: case 0xc7: {
        if (peek() == 0xf8) {
          ++pos_;
          if (op == 0xc6) {
            set("xabort");
            imm(1);
          } else {
            set("xbegin");
            rel(z_bytes());
            insn_.branch_target.reset();
          }
          return;
        }
        modrm();
        set("mov");
        imm(op == 0xc6 ? 1 : z_bytes());
        return;
      }
      case 0xc8: set("enter"); imm(2); imm(1); return;
      case 0xc9: set("leave"); return;
      case 0xca: set("retf"); imm(2); insn_.flow = FlowKind::ret; return;
      case 0xcb: set("retf"); insn_.flow = FlowKind::ret; return;
      case 0xcc: set("int3"); return;
      case 0xcd: set("int"); imm(1); return;
      case 0xce: invalid64(); set("into"); return;
      case 0xcf: set(sized("iretw", "iret", "iretq")); insn_.flow = FlowKind::ret; return;
      case 0xd4: invalid64(); set("aam"); imm(1); return;
      case 0xd5: invalid64(); set("aad"); imm(1); return;
      case 0xd6: invalid64(); set("salc"); return;
      case 0xd7: set("xlat"); return;
      case 0xe0: jump("loopne", true, 1); return;
      case 0xe1: jump("loope", true, 1); return;
      case 0xe2: jump("loop", true, 1); return;
      case 0xe3:
        jump(long_mode() ? (addrsize_ ? "jecxz" : "jrcxz") : (addrsize_ ? "jcxz" : "jecxz"), true, 1);
        return;
      case 0xe4: case 0xe5: set("in"); imm(1); return;
      case 0xe6: case 0xe7: set("out"); imm(1); return;
      case 0xe8:
        set("call");
        insn_.flow = FlowKind::call;
        rel(long_mode() ? 4 : z_bytes());
        return;
      case 0xe9: jump("jmp", false, long_mode() ? 4 : z_bytes()); return;
      case 0xea:
        invalid64();
        set("jmp");
        imm(z_bytes());
        imm(2);
        indirect(FlowKind::jump);
        return;
      case 0xeb: jump("jmp", false, 1); return;
      case 0xec: case 0xed: set("in"); return;
      case 0xee: case 0xef: set("out"); return;
      case 0xf1: set("int1"); return;
      case 0xf4: set("hlt"); insn_.flow = FlowKind::stop; return;
      case 0xf5: set("cmc"); return;
      case 0xf6: case 0xf7: {
        ModRM m = modrm();
        static constexpr std::array<const char*, 8> names = {"test", "test", "not", "neg",
                                                             "mul",  "imul", "div", "idiv"};
        set(names[m.reg]);
        if (m.reg < 2) imm(op == 0xf6 ? 1 : z_bytes());
        return;
      }
      case 0xf8: set("clc"); return;
      case 0xf9: set("stc"); return;
      case 0xfa: set("cli"); return;
      case 0xfb: set("sti"); return;
      case 0xfc: set("cld"); return;
      case 0xfd: set("std"); return;
      case 0xfe: {
        ModRM m = modrm();
        if (m.reg > 1) fail("invalid FE extension");
        set(m.reg == 0 ? "inc" : "dec");
        return;
      }
      case 0xff: {
        ModRM m = modrm();
        switch (m.reg) {
          case 0: set("inc"); return;
          case 1: set("dec"); return;
          case 2: set("call"); indirect(FlowKind::call); return;
          case 3: set("call"); indirect(FlowKind::call); return;
          case 4: set("jmp"); indirect(FlowKind::jump); return;
          case 5: set("jmp"); indirect(FlowKind::jump); return;
          case 6: set("push"); return;
          default: fail("invalid FF extension");
        }
      }
      default:
        fail("unknown opcode");
    }
  }

  // FWAIT followed by a no-wait x87 control instruction disassembles as one
  // waiting form (fstsw, fstcw, ...).
  bool fused_wait() {
    if (pos_ + 1 >= code_.size()) return false;
    const std::uint8_t op = code_[pos_];
    const std::uint8_t m = code_[pos_ + 1];
    const unsigned reg = (m >> 3) & 7;
    const bool mem = (m & 0xc0) != 0xc0;
    const char* mn = nullptr;
    if (op == 0xd9 && mem && reg == 6) mn = "fstenv";
    if (op == 0xd9 && mem && reg == 7) mn = "fstcw";
    if (op == 0xdb && m == 0xe2) mn = "fclex";
    if (op == 0xdb && m == 0xe3) mn = "finit";
    if (op == 0xdd && mem && reg == 6) mn = "fsave";
    if (op == 0xdd && mem && reg == 7) mn = "fstsw";
    if (op == 0xdf && m == 0xe0) mn = "fstsw";
    if (!mn) return false;
    ++pos_;
    modrm();
    set(mn);
    return true;
  }

  void x87(std::uint8_t op) {
    ModRM m = modrm();
    const unsigned row = op - 0xd8;
    if (!m.reg_form()) {
      static constexpr const char* mem[8][8] = {
          {"fadd", "fmul", "fcom", "fcomp", "fsub", "fsubr", "fdiv", "fdivr"},
          {"fld", nullptr, "fst", "fstp", "fldenv", "fldcw", "fnstenv", "fnstcw"},
          {"fiadd", "fimul", "ficom", "ficomp", "fisub", "fisubr", "fidiv", "fidivr"},
          {"fild", "fisttp", "fist", "fistp", nullptr, "fld", nullptr, "fstp"},
          {"fadd", "fmul", "fcom", "fcomp", "fsub", "fsubr", "fdiv", "fdivr"},
          {"fld", "fisttp", "fst", "fstp", "frstor", nullptr, "fnsave", "fnstsw"},
          {"fiadd", "fimul", "ficom", "ficomp", "fisub", "fisubr", "fidiv", "fidivr"},
          {"fild", "fisttp", "fist", "fistp", "fbld", "fild", "fbstp", "fistp"},
      };
      const char* mn = mem[row][m.reg];
      if (!mn) fail("invalid x87 memory form");
      set(mn);
      return;
    }
    const unsigned low = m.rm;
    const unsigned modrm_byte = 0xc0 | (m.reg << 3) | low;
    switch (row) {
      case 0: {
        static constexpr std::array<const char*, 8> n = {"fadd", "fmul", "fcom", "fcomp",
                                                         "fsub", "fsubr", "fdiv", "fdivr"};
        set(n[m.reg]);
        return;
      }
      case 1:
        if (m.reg == 0) { set("fld"); return; }
        if (m.reg == 1) { set("fxch"); return; }
        if (m.reg == 3) { set("fstp1"); return; }
        {
          static constexpr const char* n[32] = {
              "fchs",  "fabs",   nullptr,  nullptr,  "ftst",    "fxam",    nullptr,   nullptr,
              "fld1",  "fldl2t", "fldl2e", "fldpi",  "fldlg2",  "fldln2",  "fldz",    nullptr,
              "f2xm1", "fyl2x",  "fptan",  "fpatan", "fxtract", "fprem1",  "fdecstp", "fincstp",
              "fprem", "fyl2xp1", "fsqrt", "fsincos", "frndint", "fscale", "fsin",    "fcos"};
          const char* mn = nullptr;
          if (modrm_byte == 0xd0) mn = "fnop";
          if (modrm_byte >= 0xe0) mn = n[modrm_byte - 0xe0];
          if (!mn) fail("invalid D9 form");
          set(mn);
          return;
        }
      case 2: {
        static constexpr std::array<const char*, 8> n = {"fcmovb", "fcmove", "fcmovbe", "fcmovu",
                                                         nullptr,  nullptr,  nullptr,   nullptr};
        if (modrm_byte == 0xe9) { set("fucompp"); return; }
        if (!n[m.reg]) fail("invalid DA form");
        set(n[m.reg]);
        return;
      }
      case 3: {
        static constexpr std::array<const char*, 8> n = {"fcmovnb", "fcmovne", "fcmovnbe", "fcmovnu",
                                                         nullptr,   "fucomi",  "fcomi",    nullptr};
        if (modrm_byte == 0xe2) { set("fnclex"); return; }
        if (modrm_byte == 0xe3) { set("fninit"); return; }
        if (m.reg == 4 && modrm_byte <= 0xe4) { set("fnop"); return; }
        if (!n[m.reg]) fail("invalid DB form");
        set(n[m.reg]);
        return;
      }
      case 4: {
        static constexpr std::array<const char*, 8> n = {"fadd", "fmul", "fcom2", "fcomp3",
                                                         "fsubr", "fsub", "fdivr", "fdiv"};
        set(n[m.reg]);
        return;
      }
      case 5: {
        static constexpr std::array<const char*, 8> n = {"ffree", "fxch4", "fst", "fstp",
                                                         "fucom", "fucomp", nullptr, nullptr};
        if (!n[m.reg]) fail("invalid DD form");
        set(n[m.reg]);
        return;
      }
      case 6: {
        static constexpr std::array<const char*, 8> n = {"faddp", "fmulp", "fcomp5", nullptr,
                                                         "fsubrp", "fsubp", "fdivrp", "fdivp"};
        if (modrm_byte == 0xd9) { set("fcompp"); return; }
        if (!n[m.reg]) fail("invalid DE form");
        set(n[m.reg]);
        return;
      }
      default: {
        if (modrm_byte == 0xe0) { set("fnstsw"); return; }
        static constexpr std::array<const char*, 8> n = {"ffreep", "fxch7", "fstp8", "fstp9",
                                                         nullptr,  "fucomip", "fcomip", nullptr};
        if (!n[m.reg]) fail("invalid DF form");
        set(n[m.reg]);
        return;
      }
    }
  }

  // Name of a legacy SSE/MMX opcode in map 0F under mandatory prefix `pp`
  // (0, 0x66, 0xf3, 0xf2). Empty when undefined.
  static std::string sse_name(std::uint8_t op, unsigned pp, bool w, bool reg_form) {
    auto by = [&](const char* none, const char* p66, const char* pf3, const char* pf2) -> std::string {
      const char* r = pp == 0x66 ? p66 : pp == 0xf3 ? pf3 : pp == 0xf2 ? pf2 : none;
      return r ? r : "";
    };
    auto arith = [&](const char* base) {
      std::string b = base;
      return by((b + "ps").c_str(), (b + "pd").c_str(), (b + "ss").c_str(), (b + "sd").c_str());
    };
    switch (op) {
      case 0x10: case 0x11: return by("movups", "movupd", "movss", "movsd");
      case 0x12: return by(reg_form ? "movhlps" : "movlps", "movlpd", "movsldup", "movddup");
      case 0x13: return by("movlps", "movlpd", nullptr, nullptr);
      case 0x14: return by("unpcklps", "unpcklpd", nullptr, nullptr);
      case 0x15: return by("unpckhps", "unpckhpd", nullptr, nullptr);
      case 0x16: return by(reg_form ? "movlhps" : "movhps", "movhpd", "movshdup", nullptr);
      case 0x17: return by("movhps", "movhpd", nullptr, nullptr);
      case 0x28: case 0x29: return by("movaps", "movapd", nullptr, nullptr);
      case 0x2a: return by("cvtpi2ps", "cvtpi2pd", "cvtsi2ss", "cvtsi2sd");
      case 0x2b: return by("movntps", "movntpd", nullptr, nullptr);
      case 0x2c: return by("cvttps2pi", "cvttpd2pi", "cvttss2si", "cvttsd2si");
      case 0x2d: return by("cvtps2pi", "cvtpd2pi", "cvtss2si", "cvtsd2si");
      case 0x2e: return by("ucomiss", "ucomisd", nullptr, nullptr);
      case 0x2f: return by("comiss", "comisd", nullptr, nullptr);
      case 0x50: return by("movmskps", "movmskpd", nullptr, nullptr);
      case 0x51: return arith("sqrt");
      case 0x52: return by("rsqrtps", nullptr, "rsqrtss", nullptr);
      case 0x53: return by("rcpps", nullptr, "rcpss", nullptr);
      case 0x54: return by("andps", "andpd", nullptr, nullptr);
      case 0x55: return by("andnps", "andnpd", nullptr, nullptr);
      case 0x56: return by("orps", "orpd", nullptr, nullptr);
      case 0x57: return by("xorps", "xorpd", nullptr, nullptr);
      case 0x58: return arith("add");
      case 0x59: return arith("mul");
      case 0x5a: return by("cvtps2pd", "cvtpd2ps", "cvtss2sd", "cvtsd2ss");
      case 0x5b: return by("cvtdq2ps", "cvtps2dq", "cvttps2dq", nullptr);
      case 0x5c: return arith("sub");
      case 0x5d: return arith("min");
      case 0x5e: return arith("div");
      case 0x5f: return arith("max");
      case 0x6c: return by(nullptr, "punpcklqdq", nullptr, nullptr);
      case 0x6d: return by(nullptr, "punpckhqdq", nullptr, nullptr);
      case 0x6e: return by(w ? "movq" : "movd", w ? "movq" : "movd", nullptr, nullptr);
      case 0x6f: return by("movq", "movdqa", "movdqu", nullptr);
      case 0x70: return by("pshufw", "pshufd", "pshufhw", "pshuflw");
      case 0x7c: return by(nullptr, "haddpd", nullptr, "haddps");
      case 0x7d: return by(nullptr, "hsubpd", nullptr, "hsubps");
      case 0x7e: return by(w ? "movq" : "movd", w ? "movq" : "movd", "movq", nullptr);
      case 0x7f: return by("movq", "movdqa", "movdqu", nullptr);
      case 0xc2: return arith("cmp");
      case 0xc6: return by("shufps", "shufpd", nullptr, nullptr);
      case 0xd0: return by(nullptr, "addsubpd", nullptr, "addsubps");
      case 0xd6: return by(nullptr, "movq", "movq2dq", "movdq2q");
      case 0xe6: return by(nullptr, "cvttpd2dq", "cvtdq2pd", "cvtpd2dq");
      case 0xe7: return by("movntq", "movntdq", nullptr, nullptr);
      case 0xf0: return by(nullptr, nullptr, nullptr, "lddqu");
      case 0xf7: return by("maskmovq", "maskmovdqu", nullptr, nullptr);
      default: break;
    }
    static constexpr OpName mmx[] = {
        {0x60, "punpcklbw"}, {0x61, "punpcklwd"}, {0x62, "punpckldq"}, {0x63, "packsswb"},
        {0x64, "pcmpgtb"}, {0x65, "pcmpgtw"}, {0x66, "pcmpgtd"}, {0x67, "packuswb"},
        {0x68, "punpckhbw"}, {0x69, "punpckhwd"}, {0x6a, "punpckhdq"}, {0x6b, "packssdw"},
        {0x74, "pcmpeqb"}, {0x75, "pcmpeqw"}, {0x76, "pcmpeqd"}, {0xd1, "psrlw"},
        {0xd2, "psrld"}, {0xd3, "psrlq"}, {0xd4, "paddq"}, {0xd5, "pmullw"},
        {0xd7, "pmovmskb"}, {0xd8, "psubusb"}, {0xd9, "psubusw"}, {0xda, "pminub"},
        {0xdb, "pand"}, {0xdc, "paddusb"}, {0xdd, "paddusw"}, {0xde, "pmaxub"},
        {0xdf, "pandn"}, {0xe0, "pavgb"}, {0xe1, "psraw"}, {0xe2, "psrad"}, {0xe3, "pavgw"},
        {0xe4, "pmulhuw"}, {0xe5, "pmulhw"}, {0xe8, "psubsb"}, {0xe9, "psubsw"},
        {0xea, "pminsw"}, {0xeb, "por"}, {0xec, "paddsb"}, {0xed, "paddsw"}, {0xee, "pmaxsw"},
        {0xef, "pxor"}, {0xf1, "psllw"}, {0xf2, "pslld"}, {0xf3, "psllq"}, {0xf4, "pmuludq"},
        {0xf5, "pmaddwd"}, {0xf6, "psadbw"}, {0xf8, "psubb"}, {0xf9, "psubw"}, {0xfa, "psubd"},
        {0xfb, "psubq"}, {0xfc, "paddb"}, {0xfd, "paddw"}, {0xfe, "paddd"},
    };
    if (pp == 0 || pp == 0x66) return find_name(mmx, op);
    return "";
  }

  static std::string shift_imm_name(std::uint8_t op, unsigned reg, unsigned pp) {
    if (op == 0x71) {
      static constexpr const char* n[8] = {nullptr, nullptr, "psrlw", nullptr, "psraw", nullptr, "psllw", nullptr};
      return n[reg] ? n[reg] : "";
    }
    if (op == 0x72) {
      static constexpr const char* n[8] = {nullptr, nullptr, "psrld", nullptr, "psrad", nullptr, "pslld", nullptr};
      return n[reg] ? n[reg] : "";
    }
    static constexpr const char* n[8] = {nullptr, nullptr, "psrlq", "psrldq", nullptr, nullptr, "psllq", "pslldq"};
    if ((reg == 3 || reg == 7) && pp != 0x66) return "";
    return n[reg] ? n[reg] : "";
  }

  static std::string map38_name(std::uint8_t op) {
    static constexpr OpName n[] = {
        {0x00, "pshufb"}, {0x01, "phaddw"}, {0x02, "phaddd"}, {0x03, "phaddsw"},
        {0x04, "pmaddubsw"}, {0x05, "phsubw"}, {0x06, "phsubd"}, {0x07, "phsubsw"},
        {0x08, "psignb"}, {0x09, "psignw"}, {0x0a, "psignd"}, {0x0b, "pmulhrsw"},
        {0x10, "pblendvb"}, {0x14, "blendvps"}, {0x15, "blendvpd"}, {0x17, "ptest"},
        {0x1c, "pabsb"}, {0x1d, "pabsw"}, {0x1e, "pabsd"}, {0x20, "pmovsxbw"},
        {0x21, "pmovsxbd"}, {0x22, "pmovsxbq"}, {0x23, "pmovsxwd"}, {0x24, "pmovsxwq"},
        {0x25, "pmovsxdq"}, {0x28, "pmuldq"}, {0x29, "pcmpeqq"}, {0x2a, "movntdqa"},
        {0x2b, "packusdw"}, {0x30, "pmovzxbw"}, {0x31, "pmovzxbd"}, {0x32, "pmovzxbq"},
        {0x33, "pmovzxwd"}, {0x34, "pmovzxwq"}, {0x35, "pmovzxdq"}, {0x37, "pcmpgtq"},
        {0x38, "pminsb"}, {0x39, "pminsd"}, {0x3a, "pminuw"}, {0x3b, "pminud"},
        {0x3c, "pmaxsb"}, {0x3d, "pmaxsd"}, {0x3e, "pmaxuw"}, {0x3f, "pmaxud"},
        {0x40, "pmulld"}, {0x41, "phminposuw"}, {0x80, "invept"}, {0x81, "invvpid"},
        {0x82, "invpcid"}, {0xc8, "sha1nexte"}, {0xc9, "sha1msg1"}, {0xca, "sha1msg2"},
        {0xcb, "sha256rnds2"}, {0xcc, "sha256msg1"}, {0xcd, "sha256msg2"}, {0xdb, "aesimc"},
        {0xdc, "aesenc"}, {0xdd, "aesenclast"}, {0xde, "aesdec"}, {0xdf, "aesdeclast"},
    };
    return find_name(n, op);
  }

  static std::string map3a_name(std::uint8_t op, bool w) {
    switch (op) {
      case 0x16: return w ? "pextrq" : "pextrd";
      case 0x22: return w ? "pinsrq" : "pinsrd";
      default: break;
    }
    static constexpr OpName n[] = {
        {0x08, "roundps"}, {0x09, "roundpd"}, {0x0a, "roundss"}, {0x0b, "roundsd"},
        {0x0c, "blendps"}, {0x0d, "blendpd"}, {0x0e, "pblendw"}, {0x0f, "palignr"},
        {0x14, "pextrb"}, {0x15, "pextrw"}, {0x17, "extractps"}, {0x20, "pinsrb"},
        {0x21, "insertps"}, {0x40, "dpps"}, {0x41, "dppd"}, {0x42, "mpsadbw"},
        {0x44, "pclmulqdq"}, {0x60, "pcmpestrm"}, {0x61, "pcmpestri"}, {0x62, "pcmpistrm"},
        {0x63, "pcmpistri"}, {0xcc, "sha1rnds4"}, {0xdf, "aeskeygenassist"},
    };
    return find_name(n, op);
  }

  void two_byte() {
    std::uint8_t op = u8();
    const unsigned pp = sse_prefix();
    if (op >= 0x80 && op <= 0x8f) { jump(std::string("j") + kCond[op & 0xf], true, long_mode() ? 4 : z_bytes()); return; }
    if (op >= 0x90 && op <= 0x9f) { set(std::string("set") + kCond[op & 0xf]); modrm(); return; }
    if (op >= 0x40 && op <= 0x4f) { set(std::string("cmov") + kCond[op & 0xf]); modrm(); return; }
    if (op >= 0xc8 && op <= 0xcf) { set("bswap"); return; }
    if (op == 0x1e && rep_ && (peek() & 0xf8) == 0xc8) {
      set(rex_w() ? "rdsspq" : "rdsspd");
      modrm();
      return;
    }
    if (op >= 0x19 && op <= 0x1f && !(op == 0x1e && rep_ && (peek() == 0xfa || peek() == 0xfb))) {
      set("nop");
      modrm();
      return;
    }
    switch (op) {
      case 0x00: {
        ModRM m = modrm();
        static constexpr const char* n[8] = {"sldt", "str", "lldt", "ltr", "verr", "verw", nullptr, nullptr};
        if (!n[m.reg]) fail("invalid 0F 00 extension");
        set(n[m.reg]);
        return;
      }
      case 0x01: grp7(); return;
      case 0x02: set("lar"); modrm(); return;
      case 0x03: set("lsl"); modrm(); return;
      case 0x05: set("syscall"); return;
      case 0x06: set("clts"); return;
      case 0x07: set("sysret"); insn_.flow = FlowKind::ret; return;
      case 0x08: set("invd"); return;
      case 0x09: set("wbinvd"); return;
      case 0x0b: set("ud2"); insn_.flow = FlowKind::stop; return;
      case 0x0d: set("prefetchw"); modrm(); return;
      case 0x0e: set("femms"); return;
      case 0x0f: set("3dnow"); modrm(); imm(1); return;
      case 0x18: {
        ModRM m = modrm();
        static constexpr const char* n[8] = {"prefetchnta", "prefetcht0", "prefetcht1", "prefetcht2",
                                             "nop", "nop", "nop", "nop"};
        set(m.reg_form() ? "nop" : n[m.reg]);
        return;
      }
      case 0x1e:
        ++pos_;
        set(code_[pos_ - 1] == 0xfa ? "endbr64" : "endbr32");
        return;
      case 0x20: case 0x21: case 0x22: case 0x23: set("mov"); modrm(); return;
      case 0x30: set("wrmsr"); return;
      case 0x31: set("rdtsc"); return;
      case 0x32: set("rdmsr"); return;
      case 0x33: set("rdpmc"); return;
      case 0x34: set("sysenter"); return;
      case 0x35: set("sysexit"); insn_.flow = FlowKind::ret; return;
      case 0x37: set("getsec"); return;
      case 0x38: three_byte_38(pp); return;
      case 0x3a: three_byte_3a(pp); return;
      case 0x71: case 0x72: case 0x73: {
        ModRM m = modrm();
        std::string mn = shift_imm_name(op, m.reg, pp);
        if (mn.empty()) fail("invalid shift-immediate form");
        set(mn);
        imm(1);
        return;
      }
      case 0x77: set("emms"); return;
      case 0x78: set("vmread"); modrm(); return;
      case 0x79: set("vmwrite"); modrm(); return;
      case 0xa0: case 0xa8: set("push"); return;
      case 0xa1: case 0xa9: set("pop"); return;
      case 0xa2: set("cpuid"); return;
      case 0xa3: set("bt"); modrm(); return;
      case 0xa4: set("shld"); modrm(); imm(1); return;
      case 0xa5: set("shld"); modrm(); return;
      case 0xaa: set("rsm"); return;
      case 0xab: set("bts"); modrm(); return;
      case 0xac: set("shrd"); modrm(); imm(1); return;
      case 0xad: set("shrd"); modrm(); return;
      case 0xae: grp15(); return;
      case 0xaf: set("imul"); modrm(); return;
      case 0xb0: case 0xb1: set("cmpxchg"); modrm(); return;
      case 0xb2: set("lss"); modrm(); return;
      case 0xb3: set("btr"); modrm(); return;
      case 0xb4: set("lfs"); modrm(); return;
      case 0xb5: set("lgs"); modrm(); return;
      case 0xb6: case 0xb7: set("movzx"); modrm(); return;
      case 0xb8: set(rep_ ? "popcnt" : "jmpe"); modrm(); return;
      case 0xb9: set("ud1"); modrm(); insn_.flow = FlowKind::stop; return;
      case 0xba: {
        ModRM m = modrm();
        static constexpr const char* n[8] = {nullptr, nullptr, nullptr, nullptr, "bt", "bts", "btr", "btc"};
        if (!n[m.reg]) fail("invalid 0F BA extension");
        set(n[m.reg]);
        imm(1);
        return;
      }
      case 0xbb: set("btc"); modrm(); return;
      case 0xbc: set(rep_ ? "tzcnt" : "bsf"); modrm(); return;
      case 0xbd: set(rep_ ? "lzcnt" : "bsr"); modrm(); return;
      case 0xbe: case 0xbf: set("movsx"); modrm(); return;
      case 0xc0: case 0xc1: set("xadd"); modrm(); return;
      case 0xc3: set("movnti"); modrm(); return;
      case 0xc4: set("pinsrw"); modrm(); imm(1); return;
      case 0xc5: set("pextrw"); modrm(); imm(1); return;
      case 0xc7: {
        ModRM m = modrm();
        if (m.reg_form()) {
          if (m.reg == 6) { set("rdrand"); return; }
          if (m.reg == 7) { set(rep_ ? "rdpid" : "rdseed"); return; }
          fail("invalid 0F C7 register form");
        }
        static constexpr const char* n[8] = {nullptr, "cmpxchg8b", nullptr, "xrstors", "xsavec", "xsaves", "vmptrld", "vmptrst"};
        if (!n[m.reg]) fail("invalid 0F C7 extension");
        set(m.reg == 1 && rex_w() ? "cmpxchg16b" : n[m.reg]);
        return;
      }
      case 0xff: set("ud0"); modrm(); insn_.flow = FlowKind::stop; return;
      default: break;
    }
    bool has_imm = op == 0x70 || op == 0xc2 || op == 0xc6;
    std::size_t save = pos_;
    ModRM m = modrm();
    std::string mn = sse_name(op, pp, rex_w(), m.reg_form());
    if (mn.empty()) {
      pos_ = save;
      fail("unknown 0F opcode");
    }
    if (op == 0xc2) {
      static constexpr const char* pred[8] = {"eq", "lt", "le", "unord", "neq", "nlt", "nle", "ord"};
      std::uint8_t p = peek();
      if (p < 8) mn = "cmp" + std::string(pred[p]) + mn.substr(3);
    }
    set(mn);
    if (has_imm) imm(1);
  }

  void grp7() {
    std::uint8_t b = peek();
    if ((b & 0xc0) == 0xc0) {
      ++pos_;
      switch (b) {
        case 0xc1: set("vmcall"); return;
        case 0xc2: set("vmlaunch"); return;
        case 0xc3: set("vmresume"); return;
        case 0xc4: set("vmxoff"); return;
        case 0xc8: set("monitor"); return;
        case 0xc9: set("mwait"); return;
        case 0xca: set("clac"); return;
        case 0xcb: set("stac"); return;
        case 0xd0: set("xgetbv"); return;
        case 0xd1: set("xsetbv"); return;
        case 0xd5: set("xend"); return;
        case 0xd6: set("xtest"); return;
        case 0xe8: if (rep_) { set("setssbsy"); return; } break;
        case 0xea: if (rep_) { set("saveprevssp"); return; } break;
        case 0xf8: set("swapgs"); return;
        case 0xf9: set("rdtscp"); return;
        default: break;
      }
      unsigned reg = (b >> 3) & 7;
      if (reg == 4) { set("smsw"); return; }
      if (reg == 6) { set("lmsw"); return; }
      set("sys");
      return;
    }
    ModRM m = modrm();
    static constexpr const char* n[8] = {"sgdt", "sidt", "lgdt", "lidt", "smsw", nullptr, "lmsw", "invlpg"};
    if (m.reg == 5 && rep_) { set("rstorssp"); return; }
    if (!n[m.reg]) fail("invalid 0F 01 extension");
    set(n[m.reg]);
  }

  void grp15() {
    ModRM m = modrm();
    if (m.reg_form()) {
      if (rep_) {
        static constexpr const char* n[8] = {"rdfsbase", "rdgsbase", "wrfsbase", "wrgsbase", nullptr, "incsspq", nullptr, nullptr};
        if (!n[m.reg]) fail("invalid F3 0F AE form");
        set(n[m.reg]);
        return;
      }
      static constexpr const char* n[8] = {nullptr, nullptr, nullptr, nullptr, nullptr, "lfence", "mfence", "sfence"};
      if (!n[m.reg]) fail("invalid 0F AE register form");
      set(n[m.reg]);
      return;
    }
    static constexpr const char* n[8] = {"fxsave", "fxrstor", "ldmxcsr", "stmxcsr", "xsave", "xrstor", "xsaveopt", "clflush"};
    set(n[m.reg]);
  }

  void three_byte_38(unsigned pp) {
    std::uint8_t op = u8();
    if (op == 0xf0 || op == 0xf1) {
      set(pp == 0xf2 ? "crc32" : "movbe");
      modrm();
      return;
    }
    if (op == 0xf6) {
      set(pp == 0x66 ? "adcx" : pp == 0xf3 ? "adox" : "wrssd");
      modrm();
      return;
    }
    std::string mn = map38_name(op);
    if (mn.empty()) fail("unknown 0F 38 opcode");
    set(mn);
    modrm();
  }

  void three_byte_3a(unsigned) {
    std::uint8_t op = u8();
    std::string mn = map3a_name(op, rex_w());
    if (mn.empty()) fail("unknown 0F 3A opcode");
    set(mn);
    modrm();
    imm(1);
  }

  static std::string fma_name(std::uint8_t op, bool w) {
    unsigned hi = op >> 4, lo = op & 0xf;
    const char* order = hi == 9 ? "132" : hi == 0xa ? "213" : "231";
    static constexpr const char* kind[16] = {nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                                             "fmaddsub", "fmsubadd", "fmadd", "fmadd", "fmsub", "fmsub",
                                             "fnmadd", "fnmadd", "fnmsub", "fnmsub"};
    if (!kind[lo]) return "";
    bool scalar = lo >= 8 && (lo & 1);
    std::string suffix = scalar ? (w ? "sd" : "ss") : (w ? "pd" : "ps");
    return std::string("v") + kind[lo] + order + suffix;
  }

  // Shared by VEX and EVEX once the prefix bytes are consumed.
  void vector_op(unsigned map, unsigned pp_bits, bool w, bool is_evex, bool l256 = false) {
    static constexpr unsigned kPp[4] = {0, 0x66, 0xf3, 0xf2};
    const unsigned pp = kPp[pp_bits & 3];
    std::uint8_t op = u8();
    if (map == 1) {
      if (op == 0x77 && !is_evex) {
        set(l256 ? "vzeroall" : "vzeroupper");
        return;
      }
      std::size_t save = pos_;
      ModRM m = modrm();
      std::string mn;
      if (op == 0x71 || op == 0x72 || op == 0x73) {
        mn = shift_imm_name(op, m.reg, pp);
        if (mn.empty() && is_evex) mn = m.reg == 0 ? "prord" : m.reg == 1 ? "prold" : "evex";
      } else if (op >= 0x90 && op <= 0x93) {
        mn = "kmov";
      } else if (op == 0x41 || op == 0x42 || op == 0x44 || op == 0x45 || op == 0x46 ||
                 op == 0x47 || op == 0x4a || op == 0x4b || op == 0x98 || op == 0x99) {
        mn = "kop";
      } else if (op == 0xc4) {
        mn = "pinsrw";
      } else if (op == 0xc5) {
        mn = "pextrw";
      } else if (op == 0xae) {
        mn = m.reg == 2 ? "ldmxcsr" : m.reg == 3 ? "stmxcsr" : "";
      } else {
        mn = sse_name(op, pp, w, m.reg_form());
        if (mn.empty() && is_evex) mn = "evex";
      }
      if (mn.empty()) {
        pos_ = save;
        fail("unknown VEX 0F opcode");
      }
      if (op == 0xc2 && mn.size() > 3) {
        static constexpr const char* pred[32] = {
            "eq",    "lt",    "le",    "unord",   "neq",    "nlt",    "nle",    "ord",
            "eq_uq", "nge",   "ngt",   "false",   "neq_oq", "ge",     "gt",     "true",
            "eq_os", "lt_oq", "le_oq", "unord_s", "neq_us", "nlt_uq", "nle_uq", "ord_s",
            "eq_us", "nge_uq", "ngt_uq", "false_os", "neq_os", "ge_oq", "gt_oq", "true_us"};
        std::uint8_t p = peek();
        if (p < 32 && !is_evex) mn = "cmp" + std::string(pred[p]) + mn.substr(3);
      }
      set(mn[0] == 'k' ? mn : "v" + mn);
      if (op == 0x70 || op == 0x71 || op == 0x72 || op == 0x73 || op == 0xc2 || op == 0xc4 ||
          op == 0xc5 || op == 0xc6) {
        imm(1);
      }
      return;
    }
    if (map == 2) {
      ModRM m = modrm();
      std::string mn;
      switch (op) {
        case 0xf2: mn = "andn"; break;
        case 0xf3: {
          static constexpr const char* n[8] = {nullptr, "blsr", "blsmsk", "blsi", nullptr, nullptr, nullptr, nullptr};
          mn = n[m.reg] ? n[m.reg] : "";
          break;
        }
        case 0xf5: mn = pp == 0xf3 ? "pext" : pp == 0xf2 ? "pdep" : "bzhi"; break;
        case 0xf6: mn = "mulx"; break;
        case 0xf7: mn = pp == 0x66 ? "shlx" : pp == 0xf3 ? "sarx" : pp == 0xf2 ? "shrx" : "bextr"; break;
        default: break;
      }
      if (mn.empty() && op >= 0x96 && op <= 0xbf) mn = fma_name(op, w);
      if (mn.empty()) {
        switch (op) {
          case 0x0c: mn = "vpermilps"; break;
          case 0x0d: mn = "vpermilpd"; break;
          case 0x0e: mn = "vtestps"; break;
          case 0x0f: mn = "vtestpd"; break;
          case 0x13: mn = "vcvtph2ps"; break;
          case 0x16: mn = "vpermps"; break;
          case 0x18: mn = "vbroadcastss"; break;
          case 0x19: mn = "vbroadcastsd"; break;
          case 0x1a: mn = "vbroadcastf128"; break;
          case 0x2c: case 0x2e: mn = "vmaskmovps"; break;
          case 0x2d: case 0x2f: mn = "vmaskmovpd"; break;
          case 0x36: mn = "vpermd"; break;
          case 0x45: mn = w ? "vpsrlvq" : "vpsrlvd"; break;
          case 0x46: mn = "vpsravd"; break;
          case 0x47: mn = w ? "vpsllvq" : "vpsllvd"; break;
          case 0x58: mn = "vpbroadcastd"; break;
          case 0x59: mn = "vpbroadcastq"; break;
          case 0x5a: mn = "vbroadcasti128"; break;
          case 0x78: mn = "vpbroadcastb"; break;
          case 0x79: mn = "vpbroadcastw"; break;
          case 0x8c: case 0x8e: mn = w ? "vpmaskmovq" : "vpmaskmovd"; break;
          case 0x90: case 0x91: case 0x92: case 0x93: mn = "vgather"; break;
          default: {
            std::string legacy = map38_name(op);
            mn = legacy.empty() ? (is_evex ? "vevex" : "") : "v" + legacy;
          }
        }
      }
      if (mn.empty()) fail("unknown VEX 0F 38 opcode");
      set(mn);
      return;
    }
    if (map == 3) {
      modrm();
      std::string mn;
      switch (op) {
        case 0xf0: mn = "rorx"; break;
        case 0x00: mn = "vpermq"; break;
        case 0x01: mn = "vpermpd"; break;
        case 0x02: mn = "vpblendd"; break;
        case 0x04: mn = "vpermilps"; break;
        case 0x05: mn = "vpermilpd"; break;
        case 0x06: mn = "vperm2f128"; break;
        case 0x18: mn = "vinsertf128"; break;
        case 0x19: mn = "vextractf128"; break;
        case 0x1d: mn = "vcvtps2ph"; break;
        case 0x38: mn = "vinserti128"; break;
        case 0x39: mn = "vextracti128"; break;
        case 0x46: mn = "vperm2i128"; break;
        case 0x4a: mn = "vblendvps"; break;
        case 0x4b: mn = "vblendvpd"; break;
        case 0x4c: mn = "vpblendvb"; break;
        default: {
          if ((op >= 0x5c && op <= 0x5f) || (op >= 0x68 && op <= 0x6f) || (op >= 0x78 && op <= 0x7f)) {
            mn = "vfma4";
            break;
          }
          std::string legacy = map3a_name(op, w);
          mn = legacy.empty() ? (is_evex ? "vevex" : "") : "v" + legacy;
        }
      }
      if (mn.empty()) fail("unknown VEX 0F 3A opcode");
      set(mn);
      imm(1);
      return;
    }
    if (is_evex && (map == 5 || map == 6)) {
      modrm();
      set("vfp16");
      return;
    }
    fail("unsupported vector opcode map");
  }

  void vex(std::uint8_t lead) {
    if (rex_ || opsize_ || rep_ || repne_ || lock_) fail("VEX after legacy prefix");
    unsigned map = 1, pp = 0;
    bool w = false, l256 = false;
    if (lead == 0xc5) {
      std::uint8_t b1 = u8();
      pp = b1 & 3;
      l256 = (b1 & 4) != 0;
    } else {
      std::uint8_t b1 = u8();
      std::uint8_t b2 = u8();
      map = b1 & 0x1f;
      w = (b2 & 0x80) != 0;
      pp = b2 & 3;
      l256 = (b2 & 4) != 0;
    }
    vector_op(map, pp, w, false, l256);
  }

  // AMD XOP: maps 8 (imm8), 9 (none) and 10 (imm32).
  void xop() {
    std::uint8_t b1 = u8();
    u8();
    unsigned map = b1 & 0x1f;
    if (map < 8 || map > 10) fail("invalid XOP map");
    u8();
    modrm();
    set("vxop");
    if (map == 8) imm(1);
    if (map == 10) imm(4);
  }

  void evex() {
    std::uint8_t p0 = u8();
    std::uint8_t p1 = u8();
    u8();  // P2
    vector_op(p0 & 7, p1 & 3, (p1 & 0x80) != 0, true);
  }

  ByteSpan code_;
  std::uint64_t addr_;
  unsigned bits_;
  std::size_t pos_ = 0;
  bool opsize_ = false, addrsize_ = false, lock_ = false, rep_ = false, repne_ = false;
  unsigned last_sse_ = 0;
  std::uint8_t rex_ = 0;
  Instruction insn_;
};

}  // namespace

Instruction decode_x86(ByteSpan code, std::uint64_t addr, unsigned bits) {
  if (code.size() > 15) code = code.first(15);
  return X86Decoder(code, addr, bits).run();
}

}  // namespace tiknib
