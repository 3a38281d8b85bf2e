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

#ifndef TIKNIB_CFG_HPP
#define TIKNIB_CFG_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tiknib/binloader.hpp"
#include "tiknib/instruction.hpp"

namespace tiknib {

struct BasicBlock {
  std::uint64_t start = 0;
  std::vector<Instruction> instrs;
};

using Edge = std::pair<std::size_t, std::size_t>;

struct FunctionCFG {
  std::vector<BasicBlock> blocks;  // ordered by start
  std::vector<Edge> edges;         // sorted, no duplicates
  std::size_t entry = 0;

  std::vector<std::vector<std::size_t>> successors() const;
  std::vector<std::vector<std::size_t>> predecessors() const;
};

// Leaders are the first instruction, intra-function branch targets and the
// instruction after each terminator (after its delay slot on MIPS). Calls
// stay inside blocks. Throws Error(EmptyInput) for an empty list.
FunctionCFG build_cfg(const std::vector<Instruction>& instrs);

struct LoopInfo {
  std::vector<Edge> back_edges;                 // sorted
  std::vector<std::vector<std::size_t>> loops;  // merged by header, ordered by header
  std::vector<std::size_t> loop_headers;        // parallel to loops
  std::size_t inter_loops = 0;                  // loop pairs sharing a block
  std::vector<std::vector<std::size_t>> sccs;   // every block exactly once
};

// dom[b][d] is true when d dominates b. Unreachable blocks dominate nothing
// and have an empty dominator set.
std::vector<std::vector<bool>> dominators(const FunctionCFG& cfg);

LoopInfo analyze_loops(const FunctionCFG& cfg);

struct DisassembledFunction {
  std::string name;
  std::uint64_t start = 0;
  std::vector<Instruction> instrs;  // empty when decoding failed
};

struct CallGraph {
  std::set<std::string> nodes;
  // (caller, callee) -> number of call sites.
  std::map<std::pair<std::string, std::string>, unsigned> edges;
  std::set<std::string> imported;
};

// Direct calls resolved by target address to a local function, or to an
// import stub / undefined symbol through `binary`. Indirect calls and
// targets that are neither are ignored.
CallGraph build_callgraph(const std::vector<DisassembledFunction>& functions,
                          const LoadedBinary* binary = nullptr);

}  // namespace tiknib

#endif  // TIKNIB_CFG_HPP
