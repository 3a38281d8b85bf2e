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

#include "tiknib/pipeline.hpp"

#include <json.hpp>

#include "tiknib/binloader.hpp"
#include "tiknib/cfg.hpp"
#include "tiknib/disasm.hpp"
#include "tiknib/error.hpp"
#include "tiknib/features.hpp"
#include "tiknib/util.hpp"

namespace tiknib {

std::vector<FunctionRecord> extract_binary(const std::filesystem::path& path,
                                           const CompileConfig& config,
                                           const GroupTables& tables,
                                           std::vector<SkipEntry>& skipped) {
  LoadedBinary bin = load_binary(path);
  CompileConfig cfg = config;
  cfg.arch = bin.config.arch;
  cfg.bits = bin.config.bits;
  cfg.endianness = bin.config.endianness;
  const GroupTable& table = tables.of(cfg.arch);

  std::vector<DisassembledFunction> decoded(bin.functions.size());
  std::vector<char> ok(bin.functions.size(), 0);
  for (std::size_t i = 0; i < bin.functions.size(); ++i) {
    const RawFunction& fn = bin.functions[i];
    decoded[i].name = fn.name;
    decoded[i].start = fn.start_addr;
    try {
      decoded[i].instrs = disassemble(fn, cfg, table, &bin);
      ok[i] = !decoded[i].instrs.empty();
    } catch (const DecodeError& e) {
      skipped.push_back({path.string(), fn.name, e.addr(), e.what()});
    }
  }
  CallGraph cg = build_callgraph(decoded, &bin);

  std::vector<FunctionRecord> out;
  for (std::size_t i = 0; i < bin.functions.size(); ++i) {
    if (!ok[i]) continue;
    const RawFunction& fn = bin.functions[i];
    FunctionRecord rec = make_record(fn, cfg);
    FunctionCFG graph = build_cfg(decoded[i].instrs);
    LoopInfo loops = analyze_loops(graph);
    rec.features = extract_cfg_features(graph, loops);
    rec.features.merge(extract_cg_features(cg, fn.name));
    if (bin.debug) {
      if (auto sig = read_type_signature(fn, *bin.debug)) rec.features.merge(extract_type_features(*sig));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

ExtractResult extract_manifest(const std::vector<ManifestEntry>& manifest,
                               const ExtractOptions& options) {
  if (manifest.empty()) throw Error(ErrorCode::EmptySelection, "manifest lists no binaries");
  const GroupTables& tables = options.tables ? *options.tables : GroupTables::builtin();
  const IntrinsicPatterns& intrinsics =
      options.intrinsics ? *options.intrinsics : IntrinsicPatterns::builtin();

  struct Slot {
    std::vector<FunctionRecord> records;
    std::vector<SkipEntry> skipped;
    std::optional<SkipEntry> failure;
  };
  std::vector<Slot> slots(manifest.size());
  parallel_for(manifest.size(), options.jobs, [&](std::size_t i) {
    const auto& entry = manifest[i];
    try {
      slots[i].records = extract_binary(entry.path, entry.config, tables, slots[i].skipped);
    } catch (const Error& e) {
      slots[i].failure = SkipEntry{entry.path.string(), "", 0, e.what()};
    }
  });

  ExtractResult result;
  std::vector<FunctionRecord> all;
  for (auto& s : slots) {
    for (auto& r : s.records) all.push_back(std::move(r));
    for (auto& k : s.skipped) result.decode_errors.push_back(std::move(k));
    if (s.failure) result.file_errors.push_back(std::move(*s.failure));
  }
  SanitizeResult clean = sanitize(all, intrinsics);
  result.records = std::move(clean.records);
  result.drops = clean.report;
  return result;
}

std::string extract_report_json(const ExtractResult& result) {
  nlohmann::ordered_json j;
  j["input_functions"] = result.drops.input;
  j["kept"] = result.drops.kept;
  j["dropped"] = nlohmann::ordered_json::object();
  for (const auto& [rule, count] : result.drops.dropped) j["dropped"][rule] = count;
  auto list = [](const std::vector<SkipEntry>& v) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : v) {
      nlohmann::ordered_json o;
      o["binary"] = e.binary;
      if (!e.function.empty()) {
        o["function"] = e.function;
        o["addr"] = e.addr;
      }
      o["message"] = e.message;
      arr.push_back(o);
    }
    return arr;
  };
  j["decode_errors"] = list(result.decode_errors);
  j["file_errors"] = list(result.file_errors);
  return j.dump(2) + "\n";
}

}  // namespace tiknib
