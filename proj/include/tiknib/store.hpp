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

#ifndef TIKNIB_STORE_HPP
#define TIKNIB_STORE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "tiknib/config.hpp"
#include "tiknib/evaluate.hpp"
#include "tiknib/groundtruth.hpp"

namespace tiknib {

// Shortest text that parses back to the same double.
std::string format_double(double v);

// Feature store: one JSON object per line; columns are the config fields,
// the function fields, then the 50 features in dictionary order (null when
// unavailable).
std::vector<std::string> store_columns();
std::string record_to_json(const FunctionRecord& record);
FunctionRecord record_from_json(const std::string& line);
std::string records_to_jsonl(const std::vector<FunctionRecord>& records);
std::string records_to_csv(const std::vector<FunctionRecord>& records);
std::vector<FunctionRecord> read_store(const std::filesystem::path& path);

// Ground-truth manifest: identities with config labels, sorted by
// (package, source_file, source_line, config).
std::string groundtruth_to_jsonl(const std::vector<FunctionRecord>& records);

struct ManifestEntry {
  std::filesystem::path path;
  CompileConfig config;
};

std::string manifest_to_jsonl(const std::vector<ManifestEntry>& entries);
// Relative paths are resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

std::string config_to_json(const CompileConfig& config);

std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);
std::string models_to_json(const std::vector<Model>& models);
// Accepts a single model object or {"models": [...]}.
std::vector<Model> read_models(const std::filesystem::path& path);

// Per-fold rows and a closing mean row.
std::string report_to_csv(const KFoldResult& result);

}  // namespace tiknib

#endif  // TIKNIB_STORE_HPP
