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

#ifndef PEERDATA_TESTS_SUPPORT_ERRORS_H_
#define PEERDATA_TESTS_SUPPORT_ERRORS_H_

#include <optional>

#include "peerdata/error.h"

namespace peerdata::testing {

// Kind of the peerdata::Error thrown by `fn`, or nullopt if none is thrown.
template <typename Fn>
std::optional<ErrorKind> ThrownKind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace peerdata::testing

#endif  // PEERDATA_TESTS_SUPPORT_ERRORS_H_
