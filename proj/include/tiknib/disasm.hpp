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

#ifndef TIKNIB_DISASM_HPP
#define TIKNIB_DISASM_HPP

#include <cstdint>
#include <vector>

#include "tiknib/binloader.hpp"
#include "tiknib/bytes.hpp"
#include "tiknib/group_table.hpp"
#include "tiknib/instruction.hpp"

namespace tiknib {

// Single-instruction decoders over the bytes starting at `code`. The group
// is left unclassified (misc). Throw DecodeError on undecodable input.
Instruction decode_x86(ByteSpan code, std::uint64_t addr, unsigned bits);
Instruction decode_arm(ByteSpan code, std::uint64_t addr, bool big_endian);
// `it_state` carries the Thumb IT block between calls (0 outside a block).
Instruction decode_thumb(ByteSpan code, std::uint64_t addr, bool big_endian,
                         std::uint8_t& it_state);
Instruction decode_mips(ByteSpan code, std::uint64_t addr, bool big_endian, unsigned bits);

// Linear sweep over the function body, classifying each instruction. When
// `binary` is given, call sites in relocatable objects are resolved to the
// relocated symbol name.
std::vector<Instruction> disassemble(const RawFunction& fn, const CompileConfig& config,
                                     const GroupTable& table,
                                     const LoadedBinary* binary = nullptr);

}  // namespace tiknib

#endif  // TIKNIB_DISASM_HPP
