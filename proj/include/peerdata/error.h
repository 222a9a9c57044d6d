// Copyright 2026 The peerdata Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PEERDATA_ERROR_H_
#define PEERDATA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace peerdata {

enum class ErrorKind {
  kInvalidArgument,
  kZeroEvidence,
  kEnumerationTooLarge,
  kDimensionMismatch,
  kOutOfSupport,
  kDegenerateBounds,
  kInternalBracketViolation,
  kBudgetViolation,
  kIllegalCompositeParams,
  kDegenerateRange,
  kTooManyColumns,
  kSupportViolation,
  kParseError,
  kValidationError,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit category without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& what);

}  // namespace peerdata

#endif  // PEERDATA_ERROR_H_
