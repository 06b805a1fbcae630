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

// Acceptance runner: one PASS/FAIL line per criterion.
//
// The exit status is 0 when the set of failing criteria equals the
// --expect-fail list (empty by default). Lines are printed as measured.

#include <algorithm>
#include <iostream>
#include <set>
#include <vector>

#include "CLI11.hpp"

#include "impulse_tools/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  impulse::tools::AcceptanceOptions opts;
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--seed", opts.seed, "Master seed");
  app.add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  app.add_option("--criterion", only, "Run only these criteria")->check(CLI::Range(1, impulse::tools::kCriteria));
  CLI11_PARSE(app, argc, argv);

  std::vector<impulse::tools::CriterionResult> results;
  auto report = [&](const impulse::tools::CriterionResult& r) {
    std::cout << impulse::tools::format_line(r) << std::endl;
    results.push_back(r);
  };
  if (only.empty()) {
    impulse::tools::run_acceptance(opts, report);
  } else {
    for (int id : only) report(impulse::tools::run_criterion(id, opts));
  }

  std::set<int> failed;
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.passed) {
      ++passed;
    } else {
      failed.insert(r.id);
    }
  }
  std::set<int> expected;
  for (int id : expect_fail) {
    if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
  }
  std::cout << passed << "/" << results.size() << " criteria passed";
  if (!expected.empty()) {
    std::cout << " (expected failures:";
    for (int id : expected) std::cout << ' ' << id;
    std::cout << ")";
  }
  std::cout << std::endl;
  if (failed != expected) {
    std::cout << "failing set differs from the expected set" << std::endl;
    return 1;
  }
  return 0;
}
