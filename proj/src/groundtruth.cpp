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

#include "tiknib/groundtruth.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <sstream>

#include "tiknib/error.hpp"
#include "tiknib/util.hpp"

#ifndef TIKNIB_DATA_DIR
#define TIKNIB_DATA_DIR "data"
#endif

namespace tiknib {

std::string FunctionIdentity::key() const {
  return package + '\x1f' + source_file + '\x1f' + std::to_string(source_line) + '\x1f' + name;
}

std::string identity_name(const RawFunction& fn) {
  if (!fn.debug_name.empty()) return fn.debug_name;
  // C identifiers never contain '.', so everything from the first dot on is
  // a clone or partition suffix.
  std::string name = fn.name;
  if (auto dot = name.find('.'); dot != std::string::npos && dot > 0) name.erase(dot);
  return name;
}

FunctionRecord make_record(const RawFunction& fn, const CompileConfig& config) {
  FunctionRecord r;
  r.config = config;
  r.name = identity_name(fn);
  r.symbol = fn.name;
  r.section = fn.section;
  r.start_addr = fn.start_addr;
  r.size = fn.size;
  if (fn.source_file && fn.source_line) {
    r.source_file = *fn.source_file;
    r.source_line = *fn.source_line;
  }
  return r;
}

IntrinsicPatterns IntrinsicPatterns::parse(const std::string& text) {
  IntrinsicPatterns p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string pattern;
    if (fields >> pattern) p.patterns_.push_back(pattern);
  }
  return p;
}

IntrinsicPatterns IntrinsicPatterns::load(const std::filesystem::path& file) {
  return parse(read_file(file));
}

const IntrinsicPatterns& IntrinsicPatterns::builtin() {
  static const IntrinsicPatterns patterns =
      load(std::filesystem::path(TIKNIB_DATA_DIR) / "intrinsics.txt");
  return patterns;
}

bool IntrinsicPatterns::matches(const std::string& source_file) const {
  if (source_file.empty()) return false;
  const std::string base = std::filesystem::path(source_file).filename().string();
  for (const auto& p : patterns_) {
    if (::fnmatch(p.c_str(), source_file.c_str(), 0) == 0) return true;
    if (::fnmatch(p.c_str(), base.c_str(), 0) == 0) return true;
  }
  return false;
}

namespace {

bool is_stub(const FunctionRecord& r) {
  const std::string& s = r.section;
  if (s.rfind(".plt", 0) == 0 || s == ".iplt" || s == ".MIPS.stubs") return true;
  return r.symbol.find("@plt") != std::string::npos;
}

bool is_cold(const std::string& symbol) {
  return symbol.find(".cold") != std::string::npos;
}

}  // namespace

SanitizeResult sanitize(const std::vector<FunctionRecord>& functions,
                        const IntrinsicPatterns& intrinsics) {
  SanitizeResult out;
  out.report.input = functions.size();
  for (const char* rule : {"non_code_section", "intrinsic", "out_of_tree", "duplicate", "no_source"}) {
    out.report.dropped[rule] = 0;
  }
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const auto& r = functions[i];
    if (is_stub(r)) {
      ++out.report.dropped["non_code_section"];
    } else if (intrinsics.matches(r.source_file)) {
      ++out.report.dropped["intrinsic"];
    } else if (r.has_locus() && std::filesystem::path(r.source_file).is_absolute()) {
      ++out.report.dropped["out_of_tree"];
    } else {
      alive.push_back(i);
    }
  }

  // Winner per (package, options, file, line).
  std::map<std::string, std::size_t> best;
  auto better = [&](std::size_t a, std::size_t b) {
    const auto& x = functions[a];
    const auto& y = functions[b];
    auto kx = std::make_tuple(is_cold(x.symbol), x.symbol, x.config.binary, x.start_addr);
    auto ky = std::make_tuple(is_cold(y.symbol), y.symbol, y.config.binary, y.start_addr);
    return kx < ky;
  };
  for (std::size_t i : alive) {
    const auto& r = functions[i];
    if (!r.has_locus()) continue;
    std::string key = r.config.package + '\x1f' + r.config.options_key() + '\x1f' +
                      r.source_file + '\x1f' + std::to_string(r.source_line);
    auto [it, inserted] = best.emplace(key, i);
    if (!inserted && better(i, it->second)) it->second = i;
  }
  std::vector<char> winner(functions.size(), 0);
  for (const auto& [key, i] : best) winner[i] = 1;

  for (std::size_t i : alive) {
    const auto& r = functions[i];
    if (!r.has_locus()) {
      ++out.report.dropped["no_source"];
    } else if (!winner[i]) {
      ++out.report.dropped["duplicate"];
    } else {
      out.records.push_back(r);
      out.origin.push_back(i);
    }
  }
  out.report.kept = out.records.size();
  return out;
}

SanitizeResult sanitize(const std::vector<std::pair<RawFunction, CompileConfig>>& functions,
                        const IntrinsicPatterns& intrinsics) {
  std::vector<FunctionRecord> records;
  records.reserve(functions.size());
  for (const auto& [fn, config] : functions) records.push_back(make_record(fn, config));
  return sanitize(records, intrinsics);
}

bool match_pairs_identity(const FunctionRecord& a, const FunctionRecord& b) {
  return a.identity() == b.identity();
}

}  // namespace tiknib
