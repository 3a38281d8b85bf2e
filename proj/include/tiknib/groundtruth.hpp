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

#ifndef TIKNIB_GROUNDTRUTH_HPP
#define TIKNIB_GROUNDTRUTH_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tiknib/binloader.hpp"
#include "tiknib/config.hpp"
#include "tiknib/features.hpp"

namespace tiknib {

struct FunctionIdentity {
  std::string package;
  std::string source_file;
  std::uint32_t source_line = 0;
  std::string name;

  auto operator<=>(const FunctionIdentity&) const = default;
  // Stable textual key, used for hashing into folds.
  std::string key() const;
};

struct FunctionRecord {
  CompileConfig config;
  std::string name;    // source-level name
  std::string symbol;  // ELF symbol
  std::string section;
  std::uint64_t start_addr = 0;
  std::uint64_t size = 0;
  std::string source_file;       // empty when unknown
  std::uint32_t source_line = 0;  // 0 when unknown
  FeatureVector features;

  bool has_locus() const { return !source_file.empty() && source_line != 0; }
  FunctionIdentity identity() const {
    return {config.package, source_file, source_line, name};
  }
};

// Source-level name: the debug-info name, otherwise the symbol with compiler
// clone suffixes (.isra.0, .part.1, .cold, .constprop.0, ...) removed.
std::string identity_name(const RawFunction& fn);
FunctionRecord make_record(const RawFunction& fn, const CompileConfig& config);

// Glob list (one pattern per line, `#` comments) naming compiler runtime
// source files.
class IntrinsicPatterns {
 public:
  static IntrinsicPatterns parse(const std::string& text);
  static IntrinsicPatterns load(const std::filesystem::path& file);
  static const IntrinsicPatterns& builtin();

  bool matches(const std::string& source_file) const;
  const std::vector<std::string>& patterns() const { return patterns_; }

 private:
  std::vector<std::string> patterns_;
};

struct DropReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped;  // rule -> count
};

struct SanitizeResult {
  std::vector<FunctionRecord> records;
  std::vector<std::size_t> origin;  // index of each kept record in the input
  DropReport report;
};

// Rules, applied in order: (1) import stubs and non-code sections,
// (2) compiler intrinsics and sources outside the package tree,
// (3) one copy per (package, options, source_file, source_line), keeping the
// smallest symbol name with `.cold` parts ranked last, (4) no source locus.
// Output keeps input order.
SanitizeResult sanitize(const std::vector<FunctionRecord>& functions,
                        const IntrinsicPatterns& intrinsics = IntrinsicPatterns::builtin());
SanitizeResult sanitize(const std::vector<std::pair<RawFunction, CompileConfig>>& functions,
                        const IntrinsicPatterns& intrinsics = IntrinsicPatterns::builtin());

bool match_pairs_identity(const FunctionRecord& a, const FunctionRecord& b);

}  // namespace tiknib

#endif  // TIKNIB_GROUNDTRUTH_HPP
