// Copyright 2026 The impulse authors.
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

#ifndef IMPULSE_TOOLS_COMMANDS_H
#define IMPULSE_TOOLS_COMMANDS_H

#include <ostream>

namespace impulse::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNonconverged = 3,
  kExitNoCertificate = 4,
};

/// Entry point of the `impulse` tool. Parses argv, runs one subcommand and
/// returns the exit code. Human-readable output goes to `out`, errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace impulse::tools

#endif  // IMPULSE_TOOLS_COMMANDS_H
