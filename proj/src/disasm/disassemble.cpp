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

#include <algorithm>

#include "tiknib/disasm.hpp"

namespace tiknib {

namespace {

void sweep_arm(const RawFunction& fn, bool big_endian, std::vector<Instruction>& out) {
  const ByteSpan body(fn.bytes.data(), fn.bytes.size());
  const std::uint64_t end = fn.start_addr + fn.size;
  CodeMode mode = fn.entry_mode;
  std::size_t next_switch = 0;
  std::uint8_t it = 0;
  std::uint64_t addr = fn.start_addr;
  while (addr < end) {
    while (next_switch < fn.mode_switches.size() && fn.mode_switches[next_switch].addr <= addr) {
      CodeMode m = fn.mode_switches[next_switch].mode;
      if (m != mode) it = 0;
      mode = m;
      ++next_switch;
    }
    if (mode == CodeMode::Data) {
      addr = next_switch < fn.mode_switches.size() ? fn.mode_switches[next_switch].addr : end;
      continue;
    }
    ByteSpan code = body.subspan(addr - fn.start_addr);
    if (next_switch < fn.mode_switches.size()) {
      code = code.first(std::min<std::size_t>(code.size(), fn.mode_switches[next_switch].addr - addr));
    }
    Instruction insn =
        mode == CodeMode::Thumb ? decode_thumb(code, addr, big_endian, it) : decode_arm(code, addr, big_endian);
    addr += insn.size;
    out.push_back(std::move(insn));
  }
}

}  // namespace

std::vector<Instruction> disassemble(const RawFunction& fn, const CompileConfig& config,
                                     const GroupTable& table, const LoadedBinary* binary) {
  std::vector<Instruction> out;
  const ByteSpan body(fn.bytes.data(), fn.bytes.size());
  const bool big = config.endianness == Endianness::big;
  switch (config.arch) {
    case Arch::x86:
      for (std::size_t off = 0; off < body.size();) {
        Instruction insn = decode_x86(body.subspan(off), fn.start_addr + off, config.bits);
        off += insn.size;
        out.push_back(std::move(insn));
      }
      break;
    case Arch::arm:
      sweep_arm(fn, big, out);
      break;
    case Arch::mips:
      for (std::size_t off = 0; off < body.size(); off += 4) {
        out.push_back(decode_mips(body.subspan(off), fn.start_addr + off, big, config.bits));
      }
      break;
  }
  for (Instruction& insn : out) {
    insn.group = classify_instruction(insn, table);
    if (binary && binary->relocatable && insn.flow == FlowKind::call && !insn.indirect) {
      auto it = binary->code_relocations.lower_bound(insn.addr);
      if (it != binary->code_relocations.end() && it->first < insn.addr + insn.size) {
        insn.call_target = CallTarget(it->second);
      }
    }
  }
  return out;
}

}  // namespace tiknib
