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

#include "tiknib/minibench.hpp"

#include <sys/wait.h>

#include <cctype>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "tiknib/binloader.hpp"
#include "tiknib/error.hpp"
#include "tiknib/util.hpp"

namespace tiknib {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    std::string part(text.substr(start, pos - start));
    if (!part.empty()) out.push_back(part);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run(const std::string& command) {
  RunResult r;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::optional<std::string> compiler_version(const std::string& compiler) {
  for (const char* flag : {" -dumpfullversion", " -dumpversion"}) {
    RunResult r = run(compiler + flag);
    std::string v = trim(r.output);
    if (r.status == 0 && !v.empty() && v.find('\n') == std::string::npos &&
        std::isdigit(static_cast<unsigned char>(v[0])))
      return v;
  }
  return std::nullopt;
}

std::string describe(const MatrixCell& c) {
  std::string s = c.source.filename().string() + " " + c.compiler + " " + std::string(to_string(c.opt));
  for (auto f : c.extra) s += " " + std::string(to_string(f));
  return s;
}

}  // namespace

std::string compiler_family(const std::string& command) {
  std::string base = std::filesystem::path(command).filename().string();
  if (base.find("clang") != std::string::npos) return "clang";
  if (base.find("gcc") != std::string::npos || base.find("g++") != std::string::npos) return "gcc";
  return base;
}

std::vector<MatrixCell> parse_matrix(std::string_view text, const std::filesystem::path& base_dir,
                                     const std::string& origin) {
  std::vector<MatrixCell> cells;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> words;
    for (std::string w; fields >> w;) words.push_back(w);
    if (words.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw Error(ErrorCode::Parse, origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (words.size() < 3) fail("expected `<source> <compiler-cmd> <opt> [extra-flags...]`");
    std::set<ExtraFlag> extra;
    for (std::size_t i = 3; i < words.size(); ++i) {
      for (const auto& f : split(words[i], '+')) {
        auto flag = parse_extra_flag(f);
        if (!flag) fail("unknown extra flag " + f);
        extra.insert(*flag);
      }
    }
    std::vector<OptLevel> opts;
    for (const auto& o : split(words[2], ',')) {
      auto level = parse_opt_level(o);
      if (!level) fail("unknown optimization level " + o);
      opts.push_back(*level);
    }
    for (const auto& src : split(words[0], ','))
      for (const auto& cc : split(words[1], ','))
        for (auto opt : opts) {
          std::filesystem::path p(src);
          cells.push_back({p.is_relative() ? base_dir / p : p, cc, opt, extra});
        }
  }
  return cells;
}

std::vector<MatrixCell> load_matrix(const std::filesystem::path& file) {
  return parse_matrix(read_file(file), file.parent_path(), file.string());
}

BuildResult build_matrix(const std::vector<MatrixCell>& cells, const BuildOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  std::filesystem::path out_dir = std::filesystem::absolute(options.out_dir);

  std::map<std::string, std::optional<std::string>> versions;
  for (const auto& c : cells) {
    if (!versions.count(c.compiler)) versions[c.compiler] = compiler_version(c.compiler);
  }
  bool any_compiler = false;
  for (const auto& [cc, v] : versions) any_compiler |= v.has_value();
  if (!cells.empty() && !any_compiler) {
    throw Error(ErrorCode::CompilerNotFound, "none of the listed compilers could be run");
  }

  std::vector<std::optional<ManifestEntry>> built(cells.size());
  std::vector<std::optional<CellFailure>> failed(cells.size());
  parallel_for(cells.size(), options.jobs, [&](std::size_t i) {
    const MatrixCell& c = cells[i];
    const auto& version = versions.at(c.compiler);
    if (!version) {
      failed[i] = CellFailure{describe(c), "CompilerNotFound: " + c.compiler};
      return;
    }
    CompileConfig cfg;
    cfg.package = c.source.stem().string();
    cfg.binary = cfg.package;
    cfg.compiler = compiler_family(c.compiler);
    cfg.compiler_version = *version;
    cfg.opt_level = c.opt;
    cfg.extra = c.extra;

    std::string name = cfg.package + "-" + cfg.compiler + "-" + cfg.compiler_version + "-" +
                       std::string(to_string(c.opt));
    std::string flags = " -g -" + std::string(to_string(c.opt));
    flags += c.extra.count(ExtraFlag::pie) ? " -fPIE -pie" : " -fno-PIE -no-pie";
    if (c.extra.count(ExtraFlag::noinline)) flags += " -fno-inline";
    if (c.extra.count(ExtraFlag::lto)) flags += " -flto";
    for (auto f : c.extra) name += "-" + std::string(to_string(f));
    std::filesystem::path out = out_dir / (name + ".elf");
    std::filesystem::path tmp = out_dir / (name + ".elf.tmp");

    std::string cmd = "cd " + shell_quote(c.source.parent_path().string()) + " && " + c.compiler +
                      flags + " -o " + shell_quote(tmp.string()) + " " +
                      shell_quote(c.source.filename().string()) + " -lm";
    RunResult r = run(cmd);
    if (r.status != 0) {
      std::filesystem::remove(tmp);
      failed[i] = CellFailure{describe(c), "compile failed: " + trim(r.output)};
      return;
    }
    try {
      LoadedBinary bin = load_binary(tmp);
      cfg.arch = bin.config.arch;
      cfg.bits = bin.config.bits;
      cfg.endianness = bin.config.endianness;
    } catch (const Error& e) {
      std::filesystem::remove(tmp);
      failed[i] = CellFailure{describe(c), e.what()};
      return;
    }
    std::filesystem::rename(tmp, out);
    built[i] = ManifestEntry{out.filename(), cfg};
  });

  BuildResult result;
  result.manifest = out_dir / "manifest.jsonl";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (built[i]) result.entries.push_back(*built[i]);
    if (failed[i]) result.skipped.push_back(*failed[i]);
  }
  if (result.entries.empty()) throw Error(ErrorCode::AllCellsFailed, "no cell produced a binary");
  write_file_atomic(result.manifest, manifest_to_jsonl(result.entries));
  for (auto& e : result.entries) e.path = out_dir / e.path;
  return result;
}

BuildResult build_matrix(const std::filesystem::path& matrix_file, const BuildOptions& options) {
  return build_matrix(load_matrix(matrix_file), options);
}

}  // namespace tiknib
