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

#ifndef TIKNIB_INSTRUCTION_HPP
#define TIKNIB_INSTRUCTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace tiknib {

enum class Group {
  arith,
  data_transfer,
  cmp,
  logic,
  shift,
  bitmanip,
  fp,  // "float"
  ctransfer_cond,
  ctransfer_uncond,
  misc,
};
inline constexpr int kNumGroups = 10;

std::string_view to_string(Group group);
std::optional<Group> parse_group(std::string_view text);

// Control-flow effect of an instruction as seen by the CFG builder.
enum class FlowKind { none, jump, call, ret, stop };

using CallTarget = std::variant<std::uint64_t, std::string>;

struct Instruction {
  std::uint64_t addr = 0;
  std::uint8_t size = 0;
  std::string mnemonic;
  Group group = Group::misc;
  FlowKind flow = FlowKind::none;
  bool conditional = false;  // jump/ret taken only on a condition
  bool indirect = false;     // target computed at run time
  // Direct jump or call destination.
  std::optional<std::uint64_t> branch_target;
  // Present iff this is a direct call; a symbol name when only a relocation
  // identifies the callee.
  std::optional<CallTarget> call_target;
  bool delay_slot = false;  // next instruction executes before the transfer

  bool terminates_block() const {
    return flow == FlowKind::jump || flow == FlowKind::ret || flow == FlowKind::stop;
  }
};

}  // namespace tiknib

#endif  // TIKNIB_INSTRUCTION_HPP
