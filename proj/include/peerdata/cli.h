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

// Command-line entry point. Subcommands read a scenario, write JSON and CSV
// artifacts to an output directory and print a summary to stdout.

#ifndef PEERDATA_CLI_H_
#define PEERDATA_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "peerdata/error.h"

namespace peerdata {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitAuditViolation = 3;
inline constexpr int kExitResourceLimit = 4;

// Environment variable that overrides the scenario's enumeration cap. The
// --cap flag overrides both.
inline constexpr const char* kCapEnvVar = "DATAMARKET_ENUM_CAP";

// Exit code for a library error.
int ExitCodeFor(ErrorKind kind);

struct CliOptions {
  std::string subcommand;
  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> cap;
  std::optional<std::uint64_t> seed;
  // Print the JSON report to stdout instead of the summary table.
  bool json = false;
};

// Runs one subcommand and returns the exit code. `env_cap` is the raw value
// of kCapEnvVar, if set.
int Dispatch(const CliOptions& options, const std::optional<std::string>& env_cap,
             std::ostream& out, std::ostream& err);

// Parses argv (without the program name) and dispatches.
int RunCli(const std::vector<std::string>& args,
           const std::optional<std::string>& env_cap, std::ostream& out,
           std::ostream& err);

}  // namespace peerdata

#endif  // PEERDATA_CLI_H_
