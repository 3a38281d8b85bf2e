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

#ifndef TIKNIB_PIPELINE_HPP
#define TIKNIB_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tiknib/groundtruth.hpp"
#include "tiknib/group_table.hpp"
#include "tiknib/store.hpp"

namespace tiknib {

struct SkipEntry {
  std::string binary;
  std::string function;  // empty for file-level failures
  std::uint64_t addr = 0;
  std::string message;
};

// Features of every decodable function of one binary, before sanitizing.
// The loader's target fields (arch, bits, endianness) override `config`.
// Undecodable functions are reported in `skipped` and left out.
std::vector<FunctionRecord> extract_binary(const std::filesystem::path& path,
                                           const CompileConfig& config,
                                           const GroupTables& tables,
                                           std::vector<SkipEntry>& skipped);

struct ExtractOptions {
  unsigned jobs = 1;
  const GroupTables* tables = nullptr;            // builtin() when null
  const IntrinsicPatterns* intrinsics = nullptr;  // builtin() when null
};

struct ExtractResult {
  std::vector<FunctionRecord> records;  // sanitized, manifest order
  DropReport drops;
  std::vector<SkipEntry> decode_errors;
  std::vector<SkipEntry> file_errors;
};

// Per-file failures are recorded and the run continues. Throws
// Error(EmptySelection) for an empty manifest.
ExtractResult extract_manifest(const std::vector<ManifestEntry>& manifest,
                               const ExtractOptions& options = {});

std::string extract_report_json(const ExtractResult& result);

}  // namespace tiknib

#endif  // TIKNIB_PIPELINE_HPP
