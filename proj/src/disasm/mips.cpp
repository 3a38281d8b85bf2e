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

// MIPS32/MIPS64 (release 2) decoder. Mnemonics follow the LLVM printer,
// including the nop, move, b, beqz/bnez, negu and not aliases.

#include <string>

#include "tiknib/disasm.hpp"

namespace tiknib {
namespace {

constexpr unsigned kRa = 31;

std::uint32_t field(std::uint32_t w, unsigned hi, unsigned lo) {
  return (w >> lo) & ((1u << (hi - lo + 1)) - 1);
}

class MipsDecoder {
 public:
  MipsDecoder(std::uint32_t w, std::uint64_t addr, unsigned bits)
      : w_(w), addr_(addr), bits_(bits) {
    insn_.addr = addr;
    insn_.size = 4;
  }

  Instruction run() {
    const unsigned op = w_ >> 26;
    rs_ = field(w_, 25, 21);
    rt_ = field(w_, 20, 16);
    rd_ = field(w_, 15, 11);
    switch (op) {
      case 0x00: special(); break;
      case 0x01: regimm(); break;
      case 0x02: name("j"); jump_abs(FlowKind::jump); break;
      case 0x03: name("jal"); jump_abs(FlowKind::call); break;
      case 0x04:
        if (rs_ == 0 && rt_ == 0) { name("b"); branch(false); }
        else if (rt_ == 0) { name("beqz"); branch(true); }
        else { name("beq"); branch(true); }
        break;
      case 0x05:
        if (rt_ == 0) name("bnez"); else name("bne");
        branch(true);
        break;
      case 0x06: name("blez"); branch(true); break;
      case 0x07: name("bgtz"); branch(true); break;
      case 0x08: name("addi"); break;
      case 0x09: name("addiu"); break;
      case 0x0a: name("slti"); break;
      case 0x0b: name("sltiu"); break;
      case 0x0c: name("andi"); break;
      case 0x0d: name("ori"); break;
      case 0x0e: name("xori"); break;
      case 0x0f: name("lui"); break;
      case 0x10: cop0(); break;
      case 0x11: cop1(); break;
      case 0x12: name(std::string("cop2")); break;
      case 0x13: cop1x(); break;
      case 0x14:
        name(rt_ == 0 && rs_ == 0 ? "b" : rt_ == 0 ? "beqzl" : "beql");
        branch(true);
        break;
      case 0x15: name(rt_ == 0 ? "bnezl" : "bnel"); branch(true); break;
      case 0x16: name("blezl"); branch(true); break;
      case 0x17: name("bgtzl"); branch(true); break;
      case 0x18: wide_only(); name("daddi"); break;
      case 0x19: wide_only(); name("daddiu"); break;
      case 0x1a: wide_only(); name("ldl"); break;
      case 0x1b: wide_only(); name("ldr"); break;
      case 0x1c: special2(); break;
      case 0x1f: special3(); break;
      case 0x20: name("lb"); break;
      case 0x21: name("lh"); break;
      case 0x22: name("lwl"); break;
      case 0x23: name("lw"); break;
      case 0x24: name("lbu"); break;
      case 0x25: name("lhu"); break;
      case 0x26: name("lwr"); break;
      case 0x27: wide_only(); name("lwu"); break;
      case 0x28: name("sb"); break;
      case 0x29: name("sh"); break;
      case 0x2a: name("swl"); break;
      case 0x2b: name("sw"); break;
      case 0x2c: wide_only(); name("sdl"); break;
      case 0x2d: wide_only(); name("sdr"); break;
      case 0x2e: name("swr"); break;
      case 0x2f: name("cache"); break;
      case 0x30: name("ll"); break;
      case 0x31: name("lwc1"); break;
      case 0x32: name("lwc2"); break;
      case 0x33: name("pref"); break;
      case 0x34: wide_only(); name("lld"); break;
      case 0x35: name("ldc1"); break;
      case 0x36: name("ldc2"); break;
      case 0x37: wide_only(); name("ld"); break;
      case 0x38: name("sc"); break;
      case 0x39: name("swc1"); break;
      case 0x3a: name("swc2"); break;
      case 0x3c: wide_only(); name("scd"); break;
      case 0x3d: name("sdc1"); break;
      case 0x3e: name("sdc2"); break;
      case 0x3f: wide_only(); name("sd"); break;
      default: fail("unknown opcode");
    }
    return std::move(insn_);
  }

 private:
  [[noreturn]] void fail(const char* why) const {
    throw DecodeError(addr_, std::string("mips: ") + why);
  }
  void wide_only() const {
    if (bits_ != 64) fail("64-bit instruction in 32-bit code");
  }
  void name(const std::string& mn) { insn_.mnemonic = mn; }

  void branch(bool conditional) {
    std::int64_t off = static_cast<std::int16_t>(w_ & 0xffff);
    insn_.flow = FlowKind::jump;
    insn_.conditional = conditional;
    insn_.branch_target = addr_ + 4 + static_cast<std::uint64_t>(off * 4);
    insn_.delay_slot = true;
  }
  void branch_and_link() {
    std::int64_t off = static_cast<std::int16_t>(w_ & 0xffff);
    std::uint64_t target = addr_ + 4 + static_cast<std::uint64_t>(off * 4);
    insn_.flow = FlowKind::call;
    insn_.branch_target = target;
    insn_.call_target = CallTarget(target);
    insn_.delay_slot = true;
  }
  void jump_abs(FlowKind flow) {
    std::uint64_t target = ((addr_ + 4) & ~0x0fffffffull) | (static_cast<std::uint64_t>(w_ & 0x03ffffff) << 2);
    if (bits_ == 32) target &= 0xffffffffu;
    insn_.flow = flow;
    insn_.branch_target = target;
    if (flow == FlowKind::call) insn_.call_target = CallTarget(target);
    insn_.delay_slot = true;
  }

  void special() {
    const unsigned funct = w_ & 0x3f;
    const unsigned sa = field(w_, 10, 6);
    switch (funct) {
      case 0x00:
        if (w_ == 0) name("nop");
        else if (w_ == 0x40) name("ssnop");
        else if (w_ == 0xc0) name("ehb");
        else name("sll");
        return;
      case 0x01: name(rt_ & 1 ? "movt" : "movf"); return;
      case 0x02: name(rs_ & 1 ? "rotr" : "srl"); return;
      case 0x03: name("sra"); return;
      case 0x04: name("sllv"); return;
      case 0x06: name(sa & 1 ? "rotrv" : "srlv"); return;
      case 0x07: name("srav"); return;
      case 0x08:
        name(field(w_, 10, 10) ? "jr.hb" : "jr");
        if (rs_ == kRa) insn_.flow = FlowKind::ret;
        else { insn_.flow = FlowKind::jump; insn_.indirect = true; }
        insn_.delay_slot = true;
        return;
      case 0x09:
        name("jalr");
        insn_.flow = FlowKind::call;
        insn_.indirect = true;
        insn_.delay_slot = true;
        return;
      case 0x0a: name("movz"); return;
      case 0x0b: name("movn"); return;
      case 0x0c: name("syscall"); return;
      case 0x0d: name("break"); return;
      case 0x0f: name("sync"); return;
      case 0x10: name("mfhi"); return;
      case 0x11: name("mthi"); return;
      case 0x12: name("mflo"); return;
      case 0x13: name("mtlo"); return;
      case 0x14: wide_only(); name("dsllv"); return;
      case 0x16: wide_only(); name(sa & 1 ? "drotrv" : "dsrlv"); return;
      case 0x17: wide_only(); name("dsrav"); return;
      case 0x18: name("mult"); return;
      case 0x19: name("multu"); return;
      case 0x1a: name("div"); return;
      case 0x1b: name("divu"); return;
      case 0x1c: wide_only(); name("dmult"); return;
      case 0x1d: wide_only(); name("dmultu"); return;
      case 0x1e: wide_only(); name("ddiv"); return;
      case 0x1f: wide_only(); name("ddivu"); return;
      case 0x20: name("add"); return;
      case 0x21: name(rt_ == 0 && bits_ == 32 ? "move" : "addu"); return;
      case 0x22: name(rs_ == 0 ? "neg" : "sub"); return;
      case 0x23: name(rs_ == 0 ? "negu" : "subu"); return;
      case 0x24: name("and"); return;
      case 0x25: name(rt_ == 0 ? "move" : "or"); return;
      case 0x26: name("xor"); return;
      case 0x27: name(rt_ == 0 ? "not" : "nor"); return;
      case 0x2a: name("slt"); return;
      case 0x2b: name("sltu"); return;
      case 0x2c: wide_only(); name("dadd"); return;
      case 0x2d: wide_only(); name(rt_ == 0 ? "move" : "daddu"); return;
      case 0x2e: wide_only(); name(rs_ == 0 ? "dneg" : "dsub"); return;
      case 0x2f: wide_only(); name(rs_ == 0 ? "dnegu" : "dsubu"); return;
      case 0x30: name("tge"); return;
      case 0x31: name("tgeu"); return;
      case 0x32: name("tlt"); return;
      case 0x33: name("tltu"); return;
      case 0x34: name("teq"); return;
      case 0x36: name("tne"); return;
      case 0x38: wide_only(); name("dsll"); return;
      case 0x3a: wide_only(); name(rs_ & 1 ? "drotr" : "dsrl"); return;
      case 0x3b: wide_only(); name("dsra"); return;
      case 0x3c: wide_only(); name("dsll32"); return;
      case 0x3e: wide_only(); name(rs_ & 1 ? "drotr32" : "dsrl32"); return;
      case 0x3f: wide_only(); name("dsra32"); return;
      default: fail("unknown SPECIAL function");
    }
  }

  void regimm() {
    switch (rt_) {
      case 0x00: name("bltz"); branch(true); return;
      case 0x01: name("bgez"); branch(true); return;
      case 0x02: name("bltzl"); branch(true); return;
      case 0x03: name("bgezl"); branch(true); return;
      case 0x08: name("tgei"); return;
      case 0x09: name("tgeiu"); return;
      case 0x0a: name("tlti"); return;
      case 0x0b: name("tltiu"); return;
      case 0x0c: name("teqi"); return;
      case 0x0e: name("tnei"); return;
      case 0x10: name("bltzal"); branch_and_link(); return;
      case 0x11: name(rs_ == 0 ? "bal" : "bgezal"); branch_and_link(); return;
      case 0x12: name("bltzall"); branch_and_link(); return;
      case 0x13: name("bgezall"); branch_and_link(); return;
      case 0x1f: name("synci"); return;
      default: fail("unknown REGIMM instruction");
    }
  }

  void special2() {
    switch (w_ & 0x3f) {
      case 0x00: name("madd"); return;
      case 0x01: name("maddu"); return;
      case 0x02: name("mul"); return;
      case 0x04: name("msub"); return;
      case 0x05: name("msubu"); return;
      case 0x20: name("clz"); return;
      case 0x21: name("clo"); return;
      case 0x24: wide_only(); name("dclz"); return;
      case 0x25: wide_only(); name("dclo"); return;
      case 0x3f: name("sdbbp"); return;
      default: fail("unknown SPECIAL2 function");
    }
  }

  void special3() {
    const unsigned sa = field(w_, 10, 6);
    switch (w_ & 0x3f) {
      case 0x00: name("ext"); return;
      case 0x01: wide_only(); name("dextm"); return;
      case 0x02: wide_only(); name("dextu"); return;
      case 0x03: wide_only(); name("dext"); return;
      case 0x04: name("ins"); return;
      case 0x05: wide_only(); name("dinsm"); return;
      case 0x06: wide_only(); name("dinsu"); return;
      case 0x07: wide_only(); name("dins"); return;
      case 0x20:
        if (sa == 0x02) { name("wsbh"); return; }
        if (sa == 0x10) { name("seb"); return; }
        if (sa == 0x18) { name("seh"); return; }
        fail("unknown BSHFL function");
      case 0x24:
        wide_only();
        if (sa == 0x02) { name("dsbh"); return; }
        if (sa == 0x05) { name("dshd"); return; }
        fail("unknown DBSHFL function");
      case 0x3b: name("rdhwr"); return;
      default: fail("unknown SPECIAL3 function");
    }
  }

  void cop0() {
    if (rs_ == 0x00) { name("mfc0"); return; }
    if (rs_ == 0x01) { name("dmfc0"); return; }
    if (rs_ == 0x04) { name("mtc0"); return; }
    if (rs_ == 0x05) { name("dmtc0"); return; }
    if (rs_ == 0x0b) { name(field(w_, 5, 5) ? "ei" : "di"); return; }
    if (rs_ & 0x10) {
      switch (w_ & 0x3f) {
        case 0x01: name("tlbr"); return;
        case 0x02: name("tlbwi"); return;
        case 0x06: name("tlbwr"); return;
        case 0x08: name("tlbp"); return;
        case 0x18: name("eret"); insn_.flow = FlowKind::ret; return;
        case 0x1f: name("deret"); insn_.flow = FlowKind::ret; return;
        case 0x20: name("wait"); return;
        default: break;
      }
    }
    fail("unknown COP0 instruction");
  }

  void cop1() {
    switch (rs_) {
      case 0x00: name("mfc1"); return;
      case 0x01: name("dmfc1"); return;
      case 0x02: name("cfc1"); return;
      case 0x03: name("mfhc1"); return;
      case 0x04: name("mtc1"); return;
      case 0x05: name("dmtc1"); return;
      case 0x06: name("ctc1"); return;
      case 0x07: name("mthc1"); return;
      case 0x08: {
        static constexpr const char* n[4] = {"bc1f", "bc1t", "bc1fl", "bc1tl"};
        name(n[rt_ & 3]);
        branch(true);
        return;
      }
      default: break;
    }
    const char* fmt = nullptr;
    switch (rs_) {
      case 0x10: fmt = "s"; break;
      case 0x11: fmt = "d"; break;
      case 0x14: fmt = "w"; break;
      case 0x15: fmt = "l"; break;
      case 0x16: fmt = "ps"; break;
      default: fail("unknown COP1 format");
    }
    const unsigned funct = w_ & 0x3f;
    static constexpr const char* arith[0x18] = {
        "add", "sub", "mul", "div", "sqrt", "abs", "mov", "neg",
        "round.l", "trunc.l", "ceil.l", "floor.l", "round.w", "trunc.w", "ceil.w", "floor.w",
        nullptr, nullptr, "movz", "movn", nullptr, "recip", "rsqrt", nullptr};
    std::string mn;
    if (funct < 0x18 && arith[funct]) {
      mn = arith[funct];
    } else if (funct == 0x11) {
      mn = rt_ & 1 ? "movt" : "movf";
    } else if (funct == 0x20) {
      mn = "cvt.s";
    } else if (funct == 0x21) {
      mn = "cvt.d";
    } else if (funct == 0x24) {
      mn = "cvt.w";
    } else if (funct == 0x25) {
      mn = "cvt.l";
    } else if (funct >= 0x30) {
      static constexpr const char* c[16] = {"f", "un", "eq", "ueq", "olt", "ult", "ole", "ule",
                                            "sf", "ngle", "seq", "ngl", "lt", "nge", "le", "ngt"};
      mn = std::string("c.") + c[funct & 0xf];
    } else {
      fail("unknown COP1 function");
    }
    name(mn + "." + fmt);
  }

  void cop1x() {
    switch (w_ & 0x3f) {
      case 0x00: name("lwxc1"); return;
      case 0x01: name("ldxc1"); return;
      case 0x05: name("luxc1"); return;
      case 0x08: name("swxc1"); return;
      case 0x09: name("sdxc1"); return;
      case 0x0d: name("suxc1"); return;
      case 0x0f: name("prefx"); return;
      default: break;
    }
    static constexpr const char* ops[8] = {nullptr, nullptr, nullptr, nullptr, "madd", "msub", "nmadd", "nmsub"};
    static constexpr const char* fmts[8] = {"s", "d", nullptr, nullptr, nullptr, nullptr, "ps", nullptr};
    const char* op = ops[field(w_, 5, 3)];
    const char* fmt = fmts[field(w_, 2, 0)];
    if (!op || !fmt) fail("unknown COP1X instruction");
    name(std::string(op) + "." + fmt);
  }

  std::uint32_t w_;
  std::uint64_t addr_;
  unsigned bits_;
  unsigned rs_ = 0, rt_ = 0, rd_ = 0;
  Instruction insn_;
};

}  // namespace

Instruction decode_mips(ByteSpan code, std::uint64_t addr, bool big_endian, unsigned bits) {
  if (code.size() < 4) throw DecodeError(addr, "mips: truncated instruction");
  std::uint32_t w = big_endian ? (static_cast<std::uint32_t>(code[0]) << 24) | (code[1] << 16) | (code[2] << 8) | code[3]
                               : code[0] | (code[1] << 8) | (code[2] << 16) |
                                     (static_cast<std::uint32_t>(code[3]) << 24);
  return MipsDecoder(w, addr, bits).run();
}

}  // namespace tiknib
