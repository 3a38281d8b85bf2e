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

#ifndef TIKNIB_ERROR_HPP
#define TIKNIB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tiknib {

enum class ErrorCode {
  Io,
  Parse,
  InvalidConfig,
  // binloader
  NotElf,
  MalformedElf,
  UnsupportedArch,
  NoSymbols,
  MalformedDebugInfo,
  // cfgbuilder / features
  DecodeError,
  UnknownFunction,
  // scoring
  NegativeFeature,
  EmptyFeatureSet,
  MissingFeature,
  EmptyInput,
  // evaluate
  DegenerateLabels,
  NoCandidates,
  EmptySelection,
  TooFewGroups,
  // search
  EmptyCorpus,
  EmptyModel,
  // minibench
  CompilerNotFound,
  AllCellsFailed,
};

std::string_view error_code_name(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so the
// CLI and the tests can tell error kinds apart without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A decode failure keeps the faulting address for the skip report.
class DecodeError : public Error {
 public:
  DecodeError(unsigned long long addr, const std::string& message)
      : Error(ErrorCode::DecodeError, message), addr_(addr) {}

  unsigned long long addr() const noexcept { return addr_; }

 private:
  unsigned long long addr_;
};

}  // namespace tiknib

#endif  // TIKNIB_ERROR_HPP
