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

#ifndef TIKNIB_TESTS_HELPERS_HPP
#define TIKNIB_TESTS_HELPERS_HPP

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tiknib/cfg.hpp"
#include "tiknib/config.hpp"
#include "tiknib/error.hpp"
#include "tiknib/groundtruth.hpp"
#include "tiknib/instruction.hpp"

namespace tiknib::test {

inline std::filesystem::path built(const std::string& rel) {
  return std::filesystem::path(TIKNIB_FIXTURE_OUT) / rel;
}

inline std::filesystem::path source(const std::string& rel) {
  return std::filesystem::path(TIKNIB_FIXTURE_SRC) / rel;
}

struct Output {
  int status = -1;
  std::string text;
};

// Runs a shell command and captures stdout (stderr too when `merge`).
inline Output sh(const std::string& command, bool merge = false) {
  Output out;
  FILE* p = popen((command + (merge ? " 2>&1" : " 2>/dev/null")).c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.text.append(buf, n);
  int st = pclose(p);
  out.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

// Code of the Error thrown by `f`, empty when it returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline bool have_tool(const std::string& tool) {
  return sh("command -v " + tool).status == 0;
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::path(TIKNIB_FIXTURE_OUT) / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Instruction insn(std::uint64_t addr, Group group, FlowKind flow = FlowKind::none,
                        bool conditional = false, std::optional<std::uint64_t> target = {}) {
  Instruction i;
  i.addr = addr;
  i.size = 1;
  i.mnemonic = std::string(to_string(group));
  i.group = group;
  i.flow = flow;
  i.conditional = conditional;
  i.branch_target = target;
  return i;
}

// CFG given directly by block count and edge list (one dummy instruction per block).
inline FunctionCFG graph(std::size_t blocks, std::vector<Edge> edges) {
  FunctionCFG g;
  for (std::size_t b = 0; b < blocks; ++b) {
    BasicBlock bb;
    bb.start = b;
    bb.instrs.push_back(insn(b, Group::arith));
    g.blocks.push_back(bb);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = edges;
  return g;
}

inline CompileConfig config(const std::string& compiler, OptLevel opt,
                            const std::string& package = "pkg") {
  CompileConfig c;
  c.package = package;
  c.binary = package;
  c.compiler = compiler;
  c.compiler_version = compiler == "gcc" ? "11.4.0" : "14.0.0";
  c.opt_level = opt;
  return c;
}

inline FunctionRecord record(const std::string& name, std::uint32_t line, const CompileConfig& cfg,
                             std::uint64_t addr = 0x1000) {
  FunctionRecord r;
  r.config = cfg;
  r.name = name;
  r.symbol = name;
  r.section = ".text";
  r.start_addr = addr;
  r.size = 16;
  r.source_file = cfg.package + ".c";
  r.source_line = line;
  return r;
}

}  // namespace tiknib::test

#endif  // TIKNIB_TESTS_HELPERS_HPP
