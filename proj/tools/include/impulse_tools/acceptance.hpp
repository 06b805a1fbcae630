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

#ifndef IMPULSE_TOOLS_ACCEPTANCE_H
#define IMPULSE_TOOLS_ACCEPTANCE_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace impulse::tools {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20260415;
  std::size_t threads = 1;
};

/// Number of acceptance criteria.
inline constexpr int kCriteria = 12;

/// Runs one criterion (1..12). A criterion passes only if its numeric
/// checks hold and it finishes inside its time limit.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs criteria 1..12 in order; `on_result` sees each result as it lands.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  operator route ... | detail (0.41 s / 5 s)"
std::string format_line(const CriterionResult& r);

}  // namespace impulse::tools

#endif  // IMPULSE_TOOLS_ACCEPTANCE_H
