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

// ARMv7 A32 and Thumb-2 decoder producing UAL mnemonics in the form the
// LLVM assembler prints them (condition and flag-setting suffixes, push/pop
// and shift aliases).

#include <array>
#include <string>

#include "tiknib/disasm.hpp"

namespace tiknib {
namespace {

constexpr std::array<const char*, 16> kCond = {"eq", "ne", "hs", "lo", "mi", "pl", "vs", "vc",
                                               "hi", "ls", "ge", "lt", "gt", "le", "",   ""};
constexpr std::array<const char*, 16> kDp = {"and", "eor", "sub", "rsb", "add", "adc", "sbc", "rsc",
                                             "tst", "teq", "cmp", "cmn", "orr", "mov", "bic", "mvn"};
constexpr std::array<const char*, 4> kShift = {"lsl", "lsr", "asr", "ror"};
constexpr unsigned kSp = 13, kLr = 14, kPc = 15;

std::uint32_t bits(std::uint32_t w, unsigned hi, unsigned lo) {
  return (w >> lo) & ((1u << (hi - lo + 1)) - 1);
}
bool bit(std::uint32_t w, unsigned n) { return ((w >> n) & 1) != 0; }
std::int64_t sext(std::uint64_t v, unsigned width) {
  std::uint64_t sign = 1ull << (width - 1);
  return static_cast<std::int64_t>((v ^ sign) - sign);
}

std::uint32_t load16(ByteSpan code, std::size_t at, bool big_endian) {
  if (at + 2 > code.size()) return 0x10000;  // sentinel: truncated
  return big_endian ? (code[at] << 8) | code[at + 1] : code[at] | (code[at + 1] << 8);
}

// Shared state for one decoded instruction.
struct Out {
  Instruction insn;
  unsigned cond = 14;

  void name(const std::string& base) { insn.mnemonic = base; }
  void jump(std::uint64_t target) {
    insn.flow = FlowKind::jump;
    insn.branch_target = target;
  }
  void call(std::uint64_t target) {
    insn.flow = FlowKind::call;
    insn.branch_target = target;
    insn.call_target = CallTarget(target);
  }
  void indirect(FlowKind flow) {
    insn.flow = flow;
    insn.indirect = true;
  }
};

std::string vfp_suffix(bool dbl) { return dbl ? ".f64" : ".f32"; }

// Coprocessor, VFP and NEON space. `w` uses the A32 layout for bits 27:0;
// `uncond` marks the 1111 prefix (A32) or the T32 bit 28 variant.
std::string coproc_name(std::uint32_t w, bool uncond) {
  const unsigned cp = bits(w, 11, 8);
  if (uncond) {
    if (bits(w, 27, 25) == 1) return "vneon";
    if (bits(w, 27, 24) == 4 && !bit(w, 20)) return bit(w, 21) ? "vld" : "vst";
  }
  if (bits(w, 27, 24) == 0xf) return "svc";
  const bool vfp = !uncond && (cp == 10 || cp == 11);
  if (bits(w, 27, 25) == 6) {  // load/store and 64-bit transfers
    if (bits(w, 24, 21) == 2) {  // 0010 x
      return vfp ? "vmov" : (bit(w, 20) ? "mrrc" : "mcrr") + std::string(uncond ? "2" : "");
    }
    if (!vfp) return (bit(w, 20) ? "ldc" : "stc") + std::string(uncond ? "2" : "");
    const bool p = bit(w, 24), u = bit(w, 23), wb = bit(w, 21), l = bit(w, 20);
    const unsigned rn = bits(w, 19, 16);
    if (p && !wb) return l ? "vldr" : "vstr";
    if (rn == kSp && wb && ((l && !p && u) || (!l && p && !u))) return l ? "vpop" : "vpush";
    std::string base = l ? "vldm" : "vstm";
    return base + (p ? "db" : "ia");
  }
  // 1110: data processing (bit4 = 0) or register transfer (bit4 = 1).
  if (!vfp) {
    if (!bit(w, 4)) return "cdp" + std::string(uncond ? "2" : "");
    return (bit(w, 20) ? "mrc" : "mcr") + std::string(uncond ? "2" : "");
  }
  const bool dbl = cp == 11;
  if (bit(w, 4)) {
    const unsigned op = bits(w, 23, 21);
    if (op == 7 && cp == 10) return bit(w, 20) ? "vmrs" : "vmsr";
    if (cp == 11 && !bit(w, 20) && bit(w, 23)) return "vdup";
    return "vmov";
  }
  const unsigned opc1 = bits(w, 23, 20) & 0xb;
  const bool op6 = bit(w, 6);
  switch (opc1) {
    case 0x0: return (op6 ? "vmls" : "vmla") + vfp_suffix(dbl);
    case 0x1: return (op6 ? "vnmla" : "vnmls") + vfp_suffix(dbl);
    case 0x2: return (op6 ? "vnmul" : "vmul") + vfp_suffix(dbl);
    case 0x3: return (op6 ? "vsub" : "vadd") + vfp_suffix(dbl);
    case 0x8: return "vdiv" + vfp_suffix(dbl);
    case 0x9: return (op6 ? "vfnma" : "vfnms") + vfp_suffix(dbl);
    case 0xa: return (op6 ? "vfms" : "vfma") + vfp_suffix(dbl);
    case 0xb: break;
    default: return "vfp";
  }
  if (!op6) return "vmov" + vfp_suffix(dbl);
  const unsigned opc2 = bits(w, 19, 16);
  const bool op7 = bit(w, 7);
  switch (opc2) {
    case 0x0: return (op7 ? "vabs" : "vmov") + vfp_suffix(dbl);
    case 0x1: return (op7 ? "vsqrt" : "vneg") + vfp_suffix(dbl);
    case 0x2: case 0x3: return op7 ? "vcvtt" : "vcvtb";
    case 0x4: case 0x5: return (op7 ? "vcmpe" : "vcmp") + vfp_suffix(dbl);
    case 0x7: return dbl ? "vcvt.f32.f64" : "vcvt.f64.f32";
    case 0x8: return dbl ? (op7 ? "vcvt.f64.s32" : "vcvt.f64.u32") : (op7 ? "vcvt.f32.s32" : "vcvt.f32.u32");
    case 0xc: return dbl ? (op7 ? "vcvt.u32.f64" : "vcvtr.u32.f64") : (op7 ? "vcvt.u32.f32" : "vcvtr.u32.f32");
    case 0xd: return dbl ? (op7 ? "vcvt.s32.f64" : "vcvtr.s32.f64") : (op7 ? "vcvt.s32.f32" : "vcvtr.s32.f32");
    default: return "vcvt";
  }
}

// ---------------------------------------------------------------- A32

class ArmDecoder {
 public:
  ArmDecoder(std::uint32_t w, std::uint64_t addr) : w_(w), addr_(addr) {}

  Instruction run() {
    out_.insn.addr = addr_;
    out_.insn.size = 4;
    const unsigned cond = w_ >> 28;
    if (cond == 0xf) {
      unconditional();
    } else {
      out_.cond = cond;
      switch (bits(w_, 27, 25)) {
        case 0: case 1: dp_misc(); break;
        case 2: load_store(); break;
        case 3:
          if (bit(w_, 4)) media(); else load_store();
          break;
        case 4: block_transfer(); break;
        case 5: branch(); break;
        default: out_.name(coproc_name(w_, false)); break;
      }
      if (cond != 14) {
        out_.insn.mnemonic = with_cond(out_.insn.mnemonic, kCond[cond]);
        out_.insn.conditional = true;
      }
    }
    return std::move(out_.insn);
  }

  // Condition goes before a ".dt" type suffix (vaddeq.f64).
  static std::string with_cond(const std::string& mn, const char* cond) {
    std::size_t dot = mn.find('.');
    if (dot == std::string::npos) return mn + cond;
    return mn.substr(0, dot) + cond + mn.substr(dot);
  }

 private:
  [[noreturn]] void fail(const char* why) const {
    throw DecodeError(addr_, std::string("arm: ") + why);
  }
  std::uint64_t pc() const { return addr_ + 8; }

  void unconditional() {
    const std::uint32_t w = w_;
    if (bits(w, 27, 25) == 5) {  // blx imm
      std::int64_t off = sext((bits(w, 23, 0) << 2) | (bit(w, 24) << 1), 26);
      out_.name("blx");
      out_.call(pc() + off);
      return;
    }
    if (bits(w, 27, 20) == 0x57 && bits(w, 19, 8) == 0xff0) {
      switch (bits(w, 7, 4)) {
        case 1: out_.name("clrex"); return;
        case 4: out_.name("dsb"); return;
        case 5: out_.name("dmb"); return;
        case 6: out_.name("isb"); return;
        default: fail("unknown barrier");
      }
    }
    if (bits(w, 27, 26) == 1 && bits(w, 22, 20) == 5) { out_.name(bit(w, 22) ? "pld" : "pldw"); return; }
    if (bits(w, 27, 24) == 4 && bits(w, 22, 20) == 5) { out_.name("pli"); return; }
    if (bits(w, 27, 20) == 0x10) { out_.name(bit(w, 16) ? "setend" : "cps"); return; }
    if (bits(w, 27, 25) == 4) { out_.name(bit(w, 20) ? "rfe" : "srs"); return; }
    if (bits(w, 27, 25) == 1 || bits(w, 27, 24) == 4) { out_.name(coproc_name(w, true)); return; }
    if (bits(w, 27, 25) >= 6) { out_.name(coproc_name(w, true)); return; }
    fail("unknown unconditional instruction");
  }

  void dp_misc() {
    const std::uint32_t w = w_;
    const bool imm = bit(w, 25);
    if (!imm) {
      if (bits(w, 27, 24) == 0 && bits(w, 7, 4) == 9) { multiply(); return; }
      if (bits(w, 27, 23) == 2 && bits(w, 21, 20) == 0 && bits(w, 11, 4) == 9) {
        out_.name(bit(w, 22) ? "swpb" : "swp");
        return;
      }
      if (bits(w, 27, 23) == 3 && bits(w, 7, 4) == 9) {
        static constexpr const char* sfx[4] = {"", "d", "b", "h"};
        out_.name(std::string(bit(w, 20) ? "ldrex" : "strex") + sfx[bits(w, 22, 21)]);
        return;
      }
      if (bit(w, 7) && bit(w, 4) && bits(w, 6, 5) != 0) { extra_load_store(); return; }
      if (bits(w, 24, 23) == 2 && !bit(w, 20)) { misc(); return; }
    } else {
      const unsigned op = bits(w, 24, 20);
      if (op == 0x10) { out_.name("movw"); return; }
      if (op == 0x14) { out_.name("movt"); return; }
      if (op == 0x12 || op == 0x16) {
        if (op == 0x12 && bits(w, 19, 16) == 0) {
          static constexpr const char* hints[5] = {"nop", "yield", "wfe", "wfi", "sev"};
          unsigned h = bits(w, 7, 0);
          out_.name(h < 5 ? hints[h] : (h >= 0xf0 ? "dbg" : "hint"));
          return;
        }
        out_.name("msr");
        return;
      }
    }
    data_processing();
  }

  void data_processing() {
    const std::uint32_t w = w_;
    const unsigned op = bits(w, 24, 21);
    const bool s = bit(w, 20);
    const bool imm = bit(w, 25);
    const unsigned rd = bits(w, 15, 12);
    std::string mn = kDp[op];
    const bool test = op >= 8 && op <= 11;
    if (op == 13 && !imm) {
      const unsigned type = bits(w, 6, 5);
      const unsigned amount = bits(w, 11, 7);
      if (bit(w, 4)) {
        mn = kShift[type];
      } else if (amount == 0 && type == 0) {
        mn = "mov";
      } else if (amount == 0 && type == 3) {
        mn = "rrx";
      } else {
        mn = kShift[type];
      }
    }
    if (imm && !s && (op == 2 || op == 4) && bits(w, 19, 16) == kPc) mn = "adr";
    if (s && !test) mn += "s";
    out_.name(mn);
    if (rd == kPc && !test) {
      const unsigned rm = bits(w, 3, 0);
      if (op == 13 && !imm && rm == kLr && bits(w, 11, 4) == 0) {
        out_.insn.flow = FlowKind::ret;
      } else if (s) {
        out_.insn.flow = FlowKind::ret;  // exception return
      } else {
        out_.indirect(FlowKind::jump);
      }
    }
  }

  void multiply() {
    static constexpr const char* names[8] = {"mul", "mla", "umaal", "mls", "umull", "umlal", "smull", "smlal"};
    const unsigned op = bits(w_, 23, 21);
    std::string mn = names[op];
    if (bit(w_, 20) && op != 2 && op != 3) mn += "s";
    out_.name(mn);
  }

  void extra_load_store() {
    const std::uint32_t w = w_;
    const unsigned op2 = bits(w, 6, 5);
    const bool l = bit(w, 20);
    const bool t = !bit(w, 24) && bit(w, 21);
    std::string mn;
    if (op2 == 1) mn = l ? "ldrh" : "strh";
    if (op2 == 2) mn = l ? "ldrsb" : "ldrd";
    if (op2 == 3) mn = l ? "ldrsh" : "strd";
    if (t) mn += "t";
    out_.name(mn);
  }

  void misc() {
    const std::uint32_t w = w_;
    const unsigned op2 = bits(w, 7, 4);
    const unsigned op = bits(w, 22, 21);
    switch (op2) {
      case 0: out_.name(op & 1 ? "msr" : "mrs"); return;
      case 1:
        if (op == 1) {
          if (bits(w, 3, 0) == kLr) {
            out_.name("bx");
            out_.insn.flow = FlowKind::ret;
          } else {
            out_.name("bx");
            out_.indirect(FlowKind::jump);
          }
          return;
        }
        if (op == 3) { out_.name("clz"); return; }
        break;
      case 2: if (op == 1) { out_.name("bxj"); out_.indirect(FlowKind::jump); return; } break;
      case 3: if (op == 1) { out_.name("blx"); out_.indirect(FlowKind::call); return; } break;
      case 5: {
        static constexpr const char* n[4] = {"qadd", "qsub", "qdadd", "qdsub"};
        out_.name(n[op]);
        return;
      }
      case 6: if (op == 3) { out_.name("eret"); out_.insn.flow = FlowKind::ret; return; } break;
      case 7: {
        static constexpr const char* n[4] = {"", "bkpt", "hvc", "smc"};
        if (op == 0) break;
        out_.name(n[op]);
        return;
      }
      default:
        break;
    }
    if (bit(w, 7) && !bit(w, 4)) {
      static constexpr const char* xy[4] = {"bb", "tb", "bt", "tt"};
      const unsigned sel = bits(w, 6, 5);
      switch (op) {
        case 0: out_.name(std::string("smla") + xy[sel]); return;
        case 1: out_.name(bit(w, 5) ? (std::string("smulw") + (bit(w, 6) ? "t" : "b"))
                                    : (std::string("smlaw") + (bit(w, 6) ? "t" : "b")));
          return;
        case 2: out_.name(std::string("smlal") + xy[sel]); return;
        default: out_.name(std::string("smul") + xy[sel]); return;
      }
    }
    fail("unknown miscellaneous instruction");
  }

  void load_store() {
    const std::uint32_t w = w_;
    const bool reg = bit(w, 25);
    const bool p = bit(w, 24), u = bit(w, 23), b = bit(w, 22), wb = bit(w, 21), l = bit(w, 20);
    const unsigned rn = bits(w, 19, 16), rt = bits(w, 15, 12);
    if (!reg && !b && rn == kSp) {
      if (l && !p && u && !wb && bits(w, 11, 0) == 4) {
        out_.name("pop");
        if (rt == kPc) out_.insn.flow = FlowKind::ret;
        return;
      }
      if (!l && p && !u && wb && bits(w, 11, 0) == 4) {
        out_.name("push");
        return;
      }
    }
    std::string mn = l ? "ldr" : "str";
    if (b) mn += "b";
    if (!p && wb) mn += "t";
    out_.name(mn);
    if (l && rt == kPc) out_.indirect(FlowKind::jump);
  }

  void block_transfer() {
    const std::uint32_t w = w_;
    const bool p = bit(w, 24), u = bit(w, 23), wb = bit(w, 21), l = bit(w, 20);
    const unsigned rn = bits(w, 19, 16);
    const bool has_pc = bit(w, 15);
    std::string mn;
    if (rn == kSp && wb && l && !p && u) {
      mn = "pop";
    } else if (rn == kSp && wb && !l && p && !u) {
      mn = "push";
    } else {
      mn = l ? "ldm" : "stm";
      if (p && u) mn += "ib";
      if (!p && !u) mn += "da";
      if (p && !u) mn += "db";
    }
    out_.name(mn);
    if (l && has_pc) out_.insn.flow = FlowKind::ret;
  }

  void branch() {
    std::int64_t off = sext(bits(w_, 23, 0) << 2, 26);
    if (bit(w_, 24)) {
      out_.name("bl");
      out_.call(pc() + off);
    } else {
      out_.name("b");
      out_.jump(pc() + off);
    }
  }

  void media() {
    const std::uint32_t w = w_;
    const unsigned op1 = bits(w, 24, 20);
    const unsigned op2 = bits(w, 7, 5);
    const unsigned rn = bits(w, 3, 0);
    const unsigned ra = bits(w, 15, 12);
    const unsigned rn_hi = bits(w, 19, 16);
    if (bits(op1, 4, 3) == 0) {
      static constexpr const char* pre[8] = {nullptr, "s", "q", "sh", nullptr, "u", "uq", "uh"};
      static constexpr const char* ops[8] = {"add16", "asx", "sax", "sub16", "add8", nullptr, nullptr, "sub8"};
      if (!pre[op1 & 7] || !ops[op2]) fail("unknown parallel add/sub");
      out_.name(std::string(pre[op1 & 7]) + ops[op2]);
      return;
    }
    if (bits(op1, 4, 3) == 1) {
      const unsigned o = op1 & 7;
      if (o == 0 && !bit(op2, 0)) { out_.name(bit(w, 6) ? "pkhtb" : "pkhbt"); return; }
      if (o == 0 && op2 == 3) { out_.name(rn_hi == 15 ? "sxtb16" : "sxtab16"); return; }
      if (o == 0 && op2 == 5) { out_.name("sel"); return; }
      if ((o == 2 || o == 3) && !bit(op2, 0)) { out_.name("ssat"); return; }
      if (o == 2 && op2 == 1) { out_.name("ssat16"); return; }
      if (o == 2 && op2 == 3) { out_.name(rn_hi == 15 ? "sxtb" : "sxtab"); return; }
      if (o == 3 && op2 == 1) { out_.name("rev"); return; }
      if (o == 3 && op2 == 3) { out_.name(rn_hi == 15 ? "sxth" : "sxtah"); return; }
      if (o == 3 && op2 == 5) { out_.name("rev16"); return; }
      if (o == 4 && op2 == 3) { out_.name(rn_hi == 15 ? "uxtb16" : "uxtab16"); return; }
      if ((o == 6 || o == 7) && !bit(op2, 0)) { out_.name("usat"); return; }
      if (o == 6 && op2 == 1) { out_.name("usat16"); return; }
      if (o == 6 && op2 == 3) { out_.name(rn_hi == 15 ? "uxtb" : "uxtab"); return; }
      if (o == 7 && op2 == 1) { out_.name("rbit"); return; }
      if (o == 7 && op2 == 3) { out_.name(rn_hi == 15 ? "uxth" : "uxtah"); return; }
      if (o == 7 && op2 == 5) { out_.name("revsh"); return; }
      fail("unknown pack/unpack instruction");
    }
    if (bits(op1, 4, 3) == 2) {
      const unsigned o = op1 & 7;
      const bool x = bit(w, 5);
      switch (o) {
        case 0:
          if (!bit(op2, 1)) out_.name(ra == 15 ? (x ? "smuadx" : "smuad") : (x ? "smladx" : "smlad"));
          else out_.name(ra == 15 ? (x ? "smusdx" : "smusd") : (x ? "smlsdx" : "smlsd"));
          return;
        case 1: out_.name("sdiv"); return;
        case 3: out_.name("udiv"); return;
        case 4: out_.name(bit(op2, 1) ? "smlsld" : "smlald"); return;
        case 5:
          if (bit(op2, 2)) out_.name("smmls");
          else out_.name(ra == 15 ? "smmul" : "smmla");
          return;
        default: fail("unknown signed multiply");
      }
    }
    const unsigned o = op1 & 7;
    if (o == 0 && op2 == 0) { out_.name(ra == 15 ? "usad8" : "usada8"); return; }
    if ((o & 6) == 2 && bits(op2, 1, 0) == 2) { out_.name("sbfx"); return; }
    if ((o & 6) == 4 && bits(op2, 1, 0) == 0) { out_.name(rn == 15 ? "bfc" : "bfi"); return; }
    if ((o & 6) == 6 && bits(op2, 1, 0) == 2) { out_.name("ubfx"); return; }
    if (o == 7 && op2 == 7) { out_.name("udf"); out_.insn.flow = FlowKind::stop; return; }
    fail("unknown media instruction");
  }

  std::uint32_t w_;
  std::uint64_t addr_;
  Out out_;
};

// ---------------------------------------------------------------- T32

class ThumbDecoder {
 public:
  ThumbDecoder(ByteSpan code, std::uint64_t addr, bool big_endian, std::uint8_t& it)
      : code_(code), addr_(addr), big_endian_(big_endian), it_(it) {}

  Instruction run() {
    std::uint32_t hw1 = load16(code_, 0, big_endian_);
    if (hw1 > 0xffff) throw DecodeError(addr_, "thumb: truncated instruction");
    in_it_ = (it_ & 0xf) != 0;
    cond_ = in_it_ ? (it_ >> 4) : 14;
    out_.insn.addr = addr_;
    bool it_instr = false;
    if ((hw1 >> 11) >= 0x1d) {
      std::uint32_t hw2 = load16(code_, 2, big_endian_);
      if (hw2 > 0xffff) throw DecodeError(addr_, "thumb: truncated instruction");
      out_.insn.size = 4;
      wide(hw1, hw2);
    } else {
      out_.insn.size = 2;
      it_instr = narrow(hw1);
    }
    if (in_it_) {
      if (cond_ != 14) {
        out_.insn.mnemonic = ArmDecoder::with_cond(out_.insn.mnemonic, kCond[cond_]);
        out_.insn.conditional = true;
      }
      advance_it();
    } else if (branch_cond_ != 14) {
      out_.insn.conditional = true;
    }
    if (it_instr) it_ = static_cast<std::uint8_t>(hw1 & 0xff);
    return std::move(out_.insn);
  }

 private:
  [[noreturn]] void fail(const char* why) const {
    throw DecodeError(addr_, std::string("thumb: ") + why);
  }
  std::uint64_t pc() const { return addr_ + 4; }
  void advance_it() {
    if ((it_ & 0x7) == 0) {
      it_ = 0;
    } else {
      it_ = static_cast<std::uint8_t>((it_ & 0xe0) | ((it_ << 1) & 0x1f));
    }
  }
  // Flag-setting suffix for 16-bit data processing outside an IT block.
  std::string s(const char* base) const { return in_it_ ? base : std::string(base) + "s"; }

  bool narrow(std::uint32_t hw) {
    const unsigned top5 = hw >> 11;
    const unsigned rd = hw & 7;
    (void)rd;
    switch (top5) {
      case 0x00:
        out_.name(bits(hw, 10, 6) == 0 ? s("mov") : s("lsl"));
        return false;
      case 0x01: out_.name(s("lsr")); return false;
      case 0x02: out_.name(s("asr")); return false;
      case 0x03: out_.name(bit(hw, 9) ? s("sub") : s("add")); return false;
      case 0x04: out_.name(s("mov")); return false;
      case 0x05: out_.name("cmp"); return false;
      case 0x06: out_.name(s("add")); return false;
      case 0x07: out_.name(s("sub")); return false;
      case 0x09: out_.name("ldr"); return false;
      case 0x0c: out_.name("str"); return false;
      case 0x0d: out_.name("ldr"); return false;
      case 0x0e: out_.name("strb"); return false;
      case 0x0f: out_.name("ldrb"); return false;
      case 0x10: out_.name("strh"); return false;
      case 0x11: out_.name("ldrh"); return false;
      case 0x12: out_.name("str"); return false;
      case 0x13: out_.name("ldr"); return false;
      case 0x14: out_.name("adr"); return false;
      case 0x15: out_.name("add"); return false;
      case 0x18: out_.name("stm"); return false;
      case 0x19: out_.name("ldm"); return false;
      case 0x1c: {
        std::int64_t off = sext(bits(hw, 10, 0) << 1, 12);
        out_.name("b");
        out_.jump(pc() + off);
        return false;
      }
      default: break;
    }
    if (top5 == 0x08) {
      if (!bit(hw, 10)) {
        static constexpr const char* n[16] = {"and", "eor", "lsl", "lsr", "asr", "adc", "sbc", "ror",
                                              "tst", "rsb", "cmp", "cmn", "orr", "mul", "bic", "mvn"};
        const unsigned op = bits(hw, 9, 6);
        out_.name(op == 8 || op == 10 || op == 11 ? n[op] : s(n[op]));
        return false;
      }
      const unsigned op = bits(hw, 9, 8);
      const unsigned rdn = (bit(hw, 7) << 3) | (hw & 7);
      const unsigned rm = bits(hw, 6, 3);
      switch (op) {
        case 0:
          out_.name("add");
          if (rdn == kPc) out_.indirect(FlowKind::jump);
          return false;
        case 1: out_.name("cmp"); return false;
        case 2:
          out_.name("mov");
          if (rdn == kPc) {
            if (rm == kLr) out_.insn.flow = FlowKind::ret;
            else out_.indirect(FlowKind::jump);
          }
          return false;
        default:
          if (bit(hw, 7)) {
            out_.name("blx");
            out_.indirect(FlowKind::call);
          } else {
            out_.name("bx");
            if (rm == kLr) out_.insn.flow = FlowKind::ret;
            else out_.indirect(FlowKind::jump);
          }
          return false;
      }
    }
    if (top5 == 0x0a || top5 == 0x0b) {
      static constexpr const char* n[8] = {"str", "strh", "strb", "ldrsb", "ldr", "ldrh", "ldrb", "ldrsh"};
      out_.name(n[bits(hw, 11, 9)]);
      return false;
    }
    if (top5 == 0x16 || top5 == 0x17) return misc16(hw);
    if (top5 == 0x1a || top5 == 0x1b) {
      const unsigned cond = bits(hw, 11, 8);
      if (cond == 0xe) { out_.name("udf"); out_.insn.flow = FlowKind::stop; return false; }
      if (cond == 0xf) { out_.name("svc"); return false; }
      std::int64_t off = sext(bits(hw, 7, 0) << 1, 9);
      out_.name(std::string("b") + kCond[cond]);
      out_.jump(pc() + off);
      branch_cond_ = cond;
      return false;
    }
    fail("unknown 16-bit instruction");
  }

  bool misc16(std::uint32_t hw) {
    const unsigned op = bits(hw, 11, 8);
    switch (op) {
      case 0x0: out_.name(bit(hw, 7) ? "sub" : "add"); return false;
      case 0x1: case 0x3: case 0x9: case 0xb: {
        std::uint64_t off = (bit(hw, 9) << 6) | (bits(hw, 7, 3) << 1);
        out_.name(bit(hw, 11) ? "cbnz" : "cbz");
        out_.jump(pc() + off);
        branch_cond_ = 0;  // any non-AL value: the branch is conditional
        return false;
      }
      case 0x2: {
        static constexpr const char* n[4] = {"sxth", "sxtb", "uxth", "uxtb"};
        out_.name(n[bits(hw, 7, 6)]);
        return false;
      }
      case 0x4: case 0x5: out_.name("push"); return false;
      case 0x6:
        out_.name(bits(hw, 7, 5) == 3 ? "cps" : "setend");
        return false;
      case 0xa: {
        static constexpr const char* n[4] = {"rev", "rev16", "hlt", "revsh"};
        out_.name(n[bits(hw, 7, 6)]);
        return false;
      }
      case 0xc: case 0xd:
        out_.name("pop");
        if (bit(hw, 8)) out_.insn.flow = FlowKind::ret;
        return false;
      case 0xe: out_.name("bkpt"); return false;
      case 0xf: {
        if ((hw & 0xf) != 0) {
          const unsigned mask = hw & 0xf, first = bit(hw, 4);
          unsigned low = 0;
          while (!bit(mask, low)) ++low;
          std::string mn = "it";
          for (unsigned k = 3; k > low; --k) mn += bit(mask, k) == first ? 't' : 'e';
          out_.name(mn);
          return true;
        }
        static constexpr const char* hints[5] = {"nop", "yield", "wfe", "wfi", "sev"};
        unsigned h = bits(hw, 7, 4);
        out_.name(h < 5 ? hints[h] : "hint");
        return false;
      }
      default: fail("unknown 16-bit misc instruction");
    }
  }

  static std::string dp_name(unsigned op, unsigned rn, unsigned rd, bool s, std::uint32_t hw2,
                             bool shifted_reg, bool& ok) {
    ok = true;
    std::string mn;
    bool test = false;
    switch (op) {
      case 0x0: if (rd == 15 && s) { mn = "tst"; test = true; } else mn = "and"; break;
      case 0x1: mn = "bic"; break;
      case 0x2:
        if (rn == 15) {
          mn = "mov";
          if (shifted_reg) {
            const unsigned type = bits(hw2, 5, 4);
            const unsigned amount = (bits(hw2, 14, 12) << 2) | bits(hw2, 7, 6);
            if (amount == 0 && type == 3) mn = "rrx";
            else if (!(amount == 0 && type == 0)) mn = kShift[type];
          }
        } else {
          mn = "orr";
        }
        break;
      case 0x3: mn = rn == 15 ? "mvn" : "orn"; break;
      case 0x4: if (rd == 15 && s) { mn = "teq"; test = true; } else mn = "eor"; break;
      case 0x6: mn = bit(hw2, 5) ? "pkhtb" : "pkhbt"; test = true; break;
      case 0x8: if (rd == 15 && s) { mn = "cmn"; test = true; } else mn = "add"; break;
      case 0xa: mn = "adc"; break;
      case 0xb: mn = "sbc"; break;
      case 0xd: if (rd == 15 && s) { mn = "cmp"; test = true; } else mn = "sub"; break;
      case 0xe: mn = "rsb"; break;
      default: ok = false; return "";
    }
    if (s && !test) mn += "s";
    return mn;
  }

  void wide(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned op1 = bits(hw1, 12, 11);
    const unsigned op2 = bits(hw1, 10, 4);
    if (op1 == 1) {
      if ((op2 & 0x64) == 0x00) { ldm_stm(hw1, hw2); return; }
      if ((op2 & 0x64) == 0x04) { dual_exclusive(hw1, hw2); return; }
      if ((op2 & 0x60) == 0x20) {
        bool ok = false;
        std::string mn = dp_name(bits(hw1, 8, 5), hw1 & 0xf, bits(hw2, 11, 8), bit(hw1, 4), hw2, true, ok);
        if (!ok) fail("unknown shifted-register instruction");
        out_.name(mn);
        return;
      }
      coproc(hw1, hw2);
      return;
    }
    if (op1 == 2) {
      if (bit(hw2, 15)) { branch_misc(hw1, hw2); return; }
      if (!bit(hw1, 9)) {
        bool ok = false;
        std::string mn = dp_name(bits(hw1, 8, 5), hw1 & 0xf, bits(hw2, 11, 8), bit(hw1, 4), hw2, false, ok);
        if (!ok) fail("unknown modified-immediate instruction");
        out_.name(mn);
        return;
      }
      const unsigned rn = hw1 & 0xf;
      switch (bits(hw1, 8, 4)) {
        case 0x00: out_.name(rn == 15 ? "adr" : "addw"); return;
        case 0x04: out_.name("movw"); return;
        case 0x0a: out_.name(rn == 15 ? "adr" : "subw"); return;
        case 0x0c: out_.name("movt"); return;
        case 0x10: out_.name("ssat"); return;
        case 0x12: out_.name(bits(hw2, 14, 12) == 0 && bits(hw2, 7, 6) == 0 ? "ssat16" : "ssat"); return;
        case 0x14: out_.name("sbfx"); return;
        case 0x16: out_.name(rn == 15 ? "bfc" : "bfi"); return;
        case 0x18: out_.name("usat"); return;
        case 0x1a: out_.name(bits(hw2, 14, 12) == 0 && bits(hw2, 7, 6) == 0 ? "usat16" : "usat"); return;
        case 0x1c: out_.name("ubfx"); return;
        default: fail("unknown plain-immediate instruction");
      }
    }
    // op1 == 3
    if ((op2 & 0x71) == 0x00) { store_single(hw1, hw2); return; }
    if ((op2 & 0x67) == 0x01) { load_byte_half(hw1, hw2, "b"); return; }
    if ((op2 & 0x67) == 0x03) { load_byte_half(hw1, hw2, "h"); return; }
    if ((op2 & 0x67) == 0x05) { load_word(hw1, hw2); return; }
    if ((op2 & 0x70) == 0x20) { dp_register(hw1, hw2); return; }
    if ((op2 & 0x78) == 0x30) { multiply(hw1, hw2); return; }
    if ((op2 & 0x78) == 0x38) { long_multiply(hw1, hw2); return; }
    if (op2 & 0x40) { coproc(hw1, hw2); return; }
    fail("unknown 32-bit instruction");
  }

  void ldm_stm(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned op = bits(hw1, 8, 7);
    const bool l = bit(hw1, 4), wb = bit(hw1, 5);
    const unsigned rn = hw1 & 0xf;
    if (op == 0 || op == 3) {
      out_.name(l ? "rfe" : "srs");
      out_.insn.flow = l ? FlowKind::ret : FlowKind::none;
      return;
    }
    std::string mn;
    if (rn == kSp && wb && l && op == 1) mn = "pop";
    else if (rn == kSp && wb && !l && op == 2) mn = "push";
    else mn = std::string(l ? "ldm" : "stm") + (op == 2 ? "db" : "");
    out_.name(mn);
    if (l && bit(hw2, 15)) out_.insn.flow = FlowKind::ret;
  }

  void dual_exclusive(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned o1 = bits(hw1, 8, 7), o2 = bits(hw1, 5, 4), o3 = bits(hw2, 7, 4);
    if (o1 == 0 && o2 == 0) { out_.name("strex"); return; }
    if (o1 == 0 && o2 == 1) { out_.name("ldrex"); return; }
    if ((o1 & 2) || o2 >= 2) { out_.name(bit(hw1, 4) ? "ldrd" : "strd"); return; }
    if (o1 == 1 && o2 == 0) {
      static constexpr const char* n[16] = {nullptr, nullptr, nullptr, nullptr, "strexb", "strexh", nullptr, "strexd"};
      if (!n[o3]) fail("unknown store exclusive");
      out_.name(n[o3]);
      return;
    }
    if (o3 == 0 || o3 == 1) {
      out_.name(o3 == 0 ? "tbb" : "tbh");
      out_.indirect(FlowKind::jump);
      return;
    }
    static constexpr const char* n[16] = {nullptr, nullptr, nullptr, nullptr, "ldrexb", "ldrexh", nullptr, "ldrexd"};
    if (!n[o3]) fail("unknown load exclusive");
    out_.name(n[o3]);
  }

  void branch_misc(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned op1 = bits(hw2, 14, 12);
    const unsigned op = bits(hw1, 10, 4);
    const std::uint32_t s = bit(hw1, 10);
    const std::uint32_t j1 = bit(hw2, 13), j2 = bit(hw2, 11);
    if ((op1 & 5) == 0) {
      if ((op & 0x38) != 0x38) {
        const unsigned cond = bits(hw1, 9, 6);
        std::uint64_t imm = (s << 20) | (j2 << 19) | (j1 << 18) | (bits(hw1, 5, 0) << 12) | (bits(hw2, 10, 0) << 1);
        out_.name(std::string("b") + kCond[cond]);
        out_.jump(pc() + sext(imm, 21));
        branch_cond_ = cond;
        return;
      }
      switch (op) {
        case 0x38: case 0x39: out_.name("msr"); return;
        case 0x3a: {
          if (bits(hw2, 10, 8) != 0) { out_.name("cps"); return; }
          static constexpr const char* hints[5] = {"nop", "yield", "wfe", "wfi", "sev"};
          unsigned h = bits(hw2, 7, 0);
          out_.name(h < 5 ? hints[h] : "hint");
          return;
        }
        case 0x3b: {
          static constexpr const char* n[8] = {nullptr, nullptr, "clrex", nullptr, "dsb", "dmb", "isb", nullptr};
          const char* mn = n[bits(hw2, 7, 4) & 7];
          if (!mn) fail("unknown barrier");
          out_.name(mn);
          return;
        }
        case 0x3c: out_.name("bxj"); out_.indirect(FlowKind::jump); return;
        case 0x3d: out_.name("subs"); out_.insn.flow = FlowKind::ret; return;
        case 0x3e: case 0x3f: out_.name("mrs"); return;
        case 0x7f: out_.name(op1 == 0 ? "smc" : "udf"); return;
        default: fail("unknown branch/misc instruction");
      }
    }
    if (op1 == 2 && op == 0x7f) { out_.name("udf"); out_.insn.flow = FlowKind::stop; return; }
    const std::uint32_t i1 = (~(j1 ^ s)) & 1, i2 = (~(j2 ^ s)) & 1;
    std::uint64_t imm = (s << 24) | (i1 << 23) | (i2 << 22) | (bits(hw1, 9, 0) << 12) | (bits(hw2, 10, 0) << 1);
    std::int64_t off = sext(imm, 25);
    if ((op1 & 5) == 1) {
      out_.name("b");
      out_.jump(pc() + off);
    } else if ((op1 & 5) == 5) {
      out_.name("bl");
      out_.call(pc() + off);
    } else {
      out_.name("blx");
      out_.call(((pc() & ~3ull) + off) & ~3ull);
    }
  }

  void store_single(std::uint32_t hw1, std::uint32_t hw2) {
    static constexpr const char* n[4] = {"strb", "strh", "str", nullptr};
    const unsigned size = bits(hw1, 6, 5);
    const char* mn = n[size];
    if (!mn) fail("unknown store");
    const unsigned rn = hw1 & 0xf;
    // str rt, [sp, #-4]!
    if (size == 2 && rn == kSp && !bit(hw1, 7) && bits(hw2, 11, 8) == 0xd && bits(hw2, 7, 0) == 4) {
      out_.name("push");
      return;
    }
    std::string m = mn;
    if (!bit(hw1, 7) && bits(hw2, 11, 8) == 0xe) m += "t";
    out_.name(m);
  }

  void load_byte_half(std::uint32_t hw1, std::uint32_t hw2, const char* size) {
    const unsigned rt = bits(hw2, 15, 12);
    const bool sign = bit(hw1, 8);
    if (rt == 15 && (bit(hw1, 7) || bits(hw2, 11, 8) == 0xc || (hw1 & 0xf) == 15 || bits(hw2, 11, 6) == 0)) {
      out_.name(std::string(size) == "b" ? (sign ? "pli" : "pld") : "nop");
      return;
    }
    std::string mn = std::string(sign ? "ldrs" : "ldr") + size;
    if (!bit(hw1, 7) && (hw1 & 0xf) != 15 && bits(hw2, 11, 8) == 0xe) mn += "t";
    out_.name(mn);
  }

  void load_word(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned rn = hw1 & 0xf, rt = bits(hw2, 15, 12);
    // ldr rt, [sp], #4
    if (rn == kSp && !bit(hw1, 7) && bits(hw2, 11, 8) == 0xb && bits(hw2, 7, 0) == 4) {
      out_.name("pop");
      if (rt == kPc) out_.insn.flow = FlowKind::ret;
      return;
    }
    std::string mn = "ldr";
    if (!bit(hw1, 7) && rn != 15 && bits(hw2, 11, 8) == 0xe) mn += "t";
    out_.name(mn);
    if (rt == kPc) out_.indirect(FlowKind::jump);
  }

  void dp_register(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned o1 = bits(hw1, 7, 4), o2 = bits(hw2, 7, 4);
    const unsigned rn = hw1 & 0xf;
    if ((o1 & 8) == 0 && o2 == 0) {
      std::string mn = kShift[bits(hw1, 6, 5)];
      if (bit(hw1, 4)) mn += "s";
      out_.name(mn);
      return;
    }
    if ((o1 & 8) == 0 && (o2 & 8)) {
      static constexpr const char* ext[6] = {"sxth", "uxth", "sxtb16", "uxtb16", "sxtb", "uxtb"};
      static constexpr const char* acc[6] = {"sxtah", "uxtah", "sxtab16", "uxtab16", "sxtab", "uxtab"};
      if (o1 > 5) fail("unknown extend instruction");
      out_.name(rn == 15 ? ext[o1] : acc[o1]);
      return;
    }
    if ((o1 & 8) && (o2 & 8) == 0) {
      static constexpr const char* pre[8] = {"s", "q", "sh", nullptr, "u", "uq", "uh", nullptr};
      static constexpr const char* ops[8] = {"add8", "add16", "asx", nullptr, "sub8", "sub16", "sax", nullptr};
      const char* p = pre[(o2 & 3) | ((o2 & 4) ? 4 : 0)];
      const char* o = ops[o1 & 7];
      if (!p || !o) fail("unknown parallel add/sub");
      out_.name(std::string(p) + o);
      return;
    }
    if ((o1 & 0xc) == 8 && (o2 & 0xc) == 8) {
      static constexpr const char* n[4][4] = {{"qadd", "qdadd", "qsub", "qdsub"},
                                              {"rev", "rev16", "rbit", "revsh"},
                                              {"sel", nullptr, nullptr, nullptr},
                                              {"clz", nullptr, nullptr, nullptr}};
      const char* mn = n[o1 & 3][o2 & 3];
      if (!mn) fail("unknown misc register instruction");
      out_.name(mn);
      return;
    }
    fail("unknown register data-processing instruction");
  }

  void multiply(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned o1 = bits(hw1, 6, 4), o2 = bits(hw2, 5, 4);
    const unsigned ra = bits(hw2, 15, 12);
    static constexpr const char* xy[4] = {"bb", "bt", "tb", "tt"};
    switch (o1) {
      case 0: out_.name(o2 == 1 ? "mls" : (ra == 15 ? "mul" : "mla")); return;
      case 1: out_.name(std::string(ra == 15 ? "smul" : "smla") + xy[o2]); return;
      case 2: out_.name(ra == 15 ? "smuad" : "smlad"); return;
      case 3: out_.name(std::string(ra == 15 ? "smulw" : "smlaw") + (o2 & 1 ? "t" : "b")); return;
      case 4: out_.name(ra == 15 ? "smusd" : "smlsd"); return;
      case 5: out_.name(ra == 15 ? "smmul" : "smmla"); return;
      case 6: out_.name("smmls"); return;
      default: out_.name(ra == 15 ? "usad8" : "usada8"); return;
    }
  }

  void long_multiply(std::uint32_t hw1, std::uint32_t hw2) {
    const unsigned o1 = bits(hw1, 6, 4), o2 = bits(hw2, 7, 4);
    switch (o1) {
      case 0: out_.name("smull"); return;
      case 1: out_.name("sdiv"); return;
      case 2: out_.name("umull"); return;
      case 3: out_.name("udiv"); return;
      case 4:
        if (o2 == 0) out_.name("smlal");
        else if ((o2 & 0xc) == 8) out_.name("smlalxy");
        else out_.name("smlald");
        return;
      case 5: out_.name("smlsld"); return;
      case 6: out_.name(o2 == 6 ? "umaal" : "umlal"); return;
      default: fail("unknown long multiply");
    }
  }

  void coproc(std::uint32_t hw1, std::uint32_t hw2) {
    const bool t = bit(hw1, 12);
    std::uint32_t w = ((hw1 & 0xfff) << 16) | hw2;
    if (bits(hw1, 12, 8) == 0x1f || (bits(hw1, 11, 8) == 0xf)) {
      out_.name("vneon");  // 111x 1111: Advanced SIMD data processing
      return;
    }
    if (bits(hw1, 12, 4) == 0x190 || (bits(hw1, 12, 8) == 0x19 && !bit(hw1, 4))) {
      out_.name(bit(hw1, 5) ? "vld" : "vst");
      return;
    }
    out_.name(coproc_name(w, t));
  }

  ByteSpan code_;
  std::uint64_t addr_;
  bool big_endian_;
  std::uint8_t& it_;
  bool in_it_ = false;
  unsigned cond_ = 14;
  unsigned branch_cond_ = 14;
  Out out_;
};

}  // namespace

Instruction decode_arm(ByteSpan code, std::uint64_t addr, bool big_endian) {
  if (code.size() < 4) throw DecodeError(addr, "arm: truncated instruction");
  std::uint32_t w = big_endian ? (code[0] << 24) | (code[1] << 16) | (code[2] << 8) | code[3]
                               : code[0] | (code[1] << 8) | (code[2] << 16) |
                                     (static_cast<std::uint32_t>(code[3]) << 24);
  return ArmDecoder(w, addr).run();
}

Instruction decode_thumb(ByteSpan code, std::uint64_t addr, bool big_endian, std::uint8_t& it_state) {
  return ThumbDecoder(code, addr, big_endian, it_state).run();
}

}  // namespace tiknib
