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

#include "tiknib/config.hpp"

#include "tiknib/error.hpp"

namespace tiknib {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NotElf: return "NotElf";
    case ErrorCode::MalformedElf: return "MalformedElf";
    case ErrorCode::UnsupportedArch: return "UnsupportedArch";
    case ErrorCode::NoSymbols: return "NoSymbols";
    case ErrorCode::MalformedDebugInfo: return "MalformedDebugInfo";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::NegativeFeature: return "NegativeFeature";
    case ErrorCode::EmptyFeatureSet: return "EmptyFeatureSet";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::CompilerNotFound: return "CompilerNotFound";
    case ErrorCode::AllCellsFailed: return "AllCellsFailed";
  }
  return "Unknown";
}

std::string_view to_string(Arch arch) {
  switch (arch) {
    case Arch::x86: return "x86";
    case Arch::arm: return "arm";
    case Arch::mips: return "mips";
  }
  return "?";
}

std::string_view to_string(Endianness endianness) {
  return endianness == Endianness::little ? "little" : "big";
}

std::string_view to_string(OptLevel opt) {
  switch (opt) {
    case OptLevel::O0: return "O0";
    case OptLevel::O1: return "O1";
    case OptLevel::O2: return "O2";
    case OptLevel::O3: return "O3";
    case OptLevel::Os: return "Os";
  }
  return "?";
}

std::string_view to_string(ExtraFlag flag) {
  switch (flag) {
    case ExtraFlag::pie: return "pie";
    case ExtraFlag::noinline: return "noinline";
    case ExtraFlag::lto: return "lto";
  }
  return "?";
}

std::optional<Arch> parse_arch(std::string_view text) {
  if (text == "x86") return Arch::x86;
  if (text == "arm") return Arch::arm;
  if (text == "mips") return Arch::mips;
  return std::nullopt;
}

std::optional<Endianness> parse_endianness(std::string_view text) {
  if (text == "little") return Endianness::little;
  if (text == "big") return Endianness::big;
  return std::nullopt;
}

std::optional<OptLevel> parse_opt_level(std::string_view text) {
  if (!text.empty() && text.front() == '-') text.remove_prefix(1);
  if (text == "O0") return OptLevel::O0;
  if (text == "O1") return OptLevel::O1;
  if (text == "O2") return OptLevel::O2;
  if (text == "O3") return OptLevel::O3;
  if (text == "Os") return OptLevel::Os;
  return std::nullopt;
}

std::optional<ExtraFlag> parse_extra_flag(std::string_view text) {
  if (text == "pie") return ExtraFlag::pie;
  if (text == "noinline") return ExtraFlag::noinline;
  if (text == "lto") return ExtraFlag::lto;
  return std::nullopt;
}

namespace {

std::string extra_string(const std::set<ExtraFlag>& extra) {
  if (extra.empty()) return "none";
  std::string out;
  for (ExtraFlag flag : extra) {
    if (!out.empty()) out += '+';
    out += to_string(flag);
  }
  return out;
}

}  // namespace

std::string CompileConfig::options_key() const {
  std::string key;
  key += to_string(arch);
  key += '_';
  key += std::to_string(bits);
  key += '_';
  key += to_string(endianness);
  key += '_';
  key += compiler;
  key += '_';
  key += compiler_version;
  key += '_';
  key += to_string(opt_level);
  if (!extra.empty()) {
    key += '_';
    key += extra_string(extra);
  }
  return key;
}

bool supported_target(Arch arch, unsigned bits, Endianness endianness) {
  if (bits != 32 && bits != 64) return false;
  switch (arch) {
    case Arch::x86:
      return endianness == Endianness::little;
    case Arch::arm:
      // A32/T32 only; AArch64 is a different instruction set.
      return bits == 32;
    case Arch::mips:
      return true;
  }
  return false;
}

void validate(const CompileConfig& config) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, std::string("empty ") + what);
  };
  require(!config.package.empty(), "package");
  require(!config.binary.empty(), "binary");
  require(!config.compiler.empty(), "compiler");
  require(!config.compiler_version.empty(), "compiler_version");
  if (!supported_target(config.arch, config.bits, config.endianness)) {
    throw Error(ErrorCode::InvalidConfig,
                "unsupported target " + std::string(to_string(config.arch)) +
                    "/" + std::to_string(config.bits) + "/" +
                    std::string(to_string(config.endianness)));
  }
}

std::optional<std::string> config_field(const CompileConfig& config,
                                        std::string_view field) {
  if (field == "package") return config.package;
  if (field == "binary") return config.binary;
  if (field == "arch") return std::string(to_string(config.arch));
  if (field == "bits") return std::to_string(config.bits);
  if (field == "endianness") return std::string(to_string(config.endianness));
  if (field == "compiler") return config.compiler;
  if (field == "compiler_version") return config.compiler_version;
  if (field == "opt_level") return std::string(to_string(config.opt_level));
  if (field == "extra") return extra_string(config.extra);
  return std::nullopt;
}

const std::vector<std::string>& config_field_names() {
  static const std::vector<std::string> names = {
      "package",          "binary",    "arch",  "bits",      "endianness",
      "compiler",         "compiler_version",   "opt_level", "extra"};
  return names;
}

}  // namespace tiknib
