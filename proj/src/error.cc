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

#include "peerdata/error.h"

namespace peerdata {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "InvalidArgument";
    case ErrorKind::kZeroEvidence:
      return "ZeroEvidence";
    case ErrorKind::kEnumerationTooLarge:
      return "EnumerationTooLarge";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kOutOfSupport:
      return "OutOfSupport";
    case ErrorKind::kDegenerateBounds:
      return "DegenerateBounds";
    case ErrorKind::kInternalBracketViolation:
      return "InternalBracketViolation";
    case ErrorKind::kBudgetViolation:
      return "BudgetViolation";
    case ErrorKind::kIllegalCompositeParams:
      return "IllegalCompositeParams";
    case ErrorKind::kDegenerateRange:
      return "DegenerateRange";
    case ErrorKind::kTooManyColumns:
      return "TooManyColumns";
    case ErrorKind::kSupportViolation:
      return "SupportViolation";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kValidationError:
      return "ValidationError";
  }
  return "Unknown";
}

void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(ErrorKindName(kind)) + ": " + what);
}

}  // namespace peerdata
