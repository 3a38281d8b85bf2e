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

#ifndef TIKNIB_MINIBENCH_HPP
#define TIKNIB_MINIBENCH_HPP

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "tiknib/config.hpp"
#include "tiknib/store.hpp"

namespace tiknib {

// One compilation: a fixture source under one compiler and option set.
struct MatrixCell {
  std::filesystem::path source;  // resolved against the matrix file's directory
  std::string compiler;          // command, possibly with a cross prefix
  OptLevel opt = OptLevel::O0;
  std::set<ExtraFlag> extra;
};

// Lines are `<source> <compiler-cmd> <opt> [extra-flags...]`; each of the
// first three fields may be a comma-separated list and the line expands to
// every combination. Extra flags are pie, noinline and lto.
std::vector<MatrixCell> parse_matrix(std::string_view text, const std::filesystem::path& base_dir,
                                     const std::string& origin = "matrix");
std::vector<MatrixCell> load_matrix(const std::filesystem::path& file);

struct BuildOptions {
  std::filesystem::path out_dir;
  unsigned jobs = 1;
};

struct CellFailure {
  std::string cell;
  std::string reason;
};

struct BuildResult {
  std::vector<ManifestEntry> entries;  // matrix order
  std::vector<CellFailure> skipped;
  std::filesystem::path manifest;  // out_dir/manifest.jsonl
};

// Compiler family ("gcc", "clang") from a command such as
// "arm-linux-gnueabihf-gcc-11"; the command basename when neither matches.
std::string compiler_family(const std::string& command);

// Compiles every cell with -g, loads each output to fill the target fields,
// and writes the manifest atomically. Cells that fail are skipped and
// reported. Throws Error(CompilerNotFound) when no listed compiler runs and
// Error(AllCellsFailed) when no cell produced a loadable binary.
BuildResult build_matrix(const std::vector<MatrixCell>& cells, const BuildOptions& options);
BuildResult build_matrix(const std::filesystem::path& matrix_file, const BuildOptions& options);

}  // namespace tiknib

#endif  // TIKNIB_MINIBENCH_HPP
