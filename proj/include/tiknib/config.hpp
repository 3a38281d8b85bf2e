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

#ifndef TIKNIB_CONFIG_HPP
#define TIKNIB_CONFIG_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tiknib {

enum class Arch { x86, arm, mips };
enum class Endianness { little, big };
enum class OptLevel { O0, O1, O2, O3, Os };
enum class ExtraFlag { pie, noinline, lto };

std::string_view to_string(Arch arch);
std::string_view to_string(Endianness endianness);
std::string_view to_string(OptLevel opt);
std::string_view to_string(ExtraFlag flag);

std::optional<Arch> parse_arch(std::string_view text);
std::optional<Endianness> parse_endianness(std::string_view text);
std::optional<OptLevel> parse_opt_level(std::string_view text);
std::optional<ExtraFlag> parse_extra_flag(std::string_view text);

// How a binary was produced. `package` and `binary` locate it; every other
// field describes the toolchain options and is what "same config" compares.
struct CompileConfig {
  std::string package;
  std::string binary;
  Arch arch = Arch::x86;
  unsigned bits = 64;
  Endianness endianness = Endianness::little;
  std::string compiler;
  std::string compiler_version;
  OptLevel opt_level = OptLevel::O0;
  std::set<ExtraFlag> extra;

  // Canonical string of the option fields only (no package/binary), e.g.
  // "x86_64_little_gcc_11.4.0_O2" or "..._O2_noinline+pie".
  std::string options_key() const;

  bool same_options(const CompileConfig& other) const {
    return options_key() == other.options_key();
  }

  bool operator==(const CompileConfig&) const = default;
};

// True when the (arch, bits, endianness) triple has a decoder backend.
bool supported_target(Arch arch, unsigned bits, Endianness endianness);

// Throws Error(InvalidConfig) when a field is empty or the target triple is
// unsupported.
void validate(const CompileConfig& config);

// Field access by name for declarative filters. Known fields: package,
// binary, arch, bits, endianness, compiler, compiler_version, opt_level,
// extra (a '+'-joined sorted list, "none" when empty).
std::optional<std::string> config_field(const CompileConfig& config,
                                        std::string_view field);

const std::vector<std::string>& config_field_names();

}  // namespace tiknib

#endif  // TIKNIB_CONFIG_HPP
