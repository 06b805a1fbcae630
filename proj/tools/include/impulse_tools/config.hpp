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

#ifndef IMPULSE_TOOLS_CONFIG_H
#define IMPULSE_TOOLS_CONFIG_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"

#include "impulse/simulate.hpp"
#include "impulse/system.hpp"

namespace impulse::tools {

/// Invalid configuration. The message names the offending key and, when it
/// can be located in the source text, its line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OperatorStart {
  enum class Kind { kUniform, kStationaryUniform, kPoint };
  Kind kind = Kind::kUniform;
  State state = 0;
  double x = 0.0;
};

/// Fully resolved experiment description. Every field carries its default
/// after loading, and `resolved` holds the same data as JSON.
struct ExperimentConfig {
  nlohmann::json resolved;

  // Grid and operator.
  std::size_t bins = 1024;
  std::size_t states = 0;  // 0 before resolution only
  std::size_t max_iter = 200;
  double tol = 1e-12;
  OperatorStart start;

  // Simulation.
  std::size_t steps = 200;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  InitialCondition init = UniformStart{};
  StartLaw start_law = StartLaw::kImpulseTimes;

  // Stability.
  std::size_t max_len = 32;
  std::size_t paths = 1000;
  std::size_t path_len = 200;
  double sync_tol = 1e-6;
  std::optional<double> L0;
  std::optional<double> L1;

  // Stationary comparison.
  bool reference_cdf = false;

  std::string out_dir = "out";

  ImpulseSystem system() const;

 private:
  friend ExperimentConfig parse_config(const std::string& text, const std::string& origin);
  nlohmann::json f_;
  nlohmann::json g_;
  nlohmann::json times_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

/// Parses and validates a JSON config. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

/// 64-bit FNV-1a of the resolved config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace impulse::tools

#endif  // IMPULSE_TOOLS_CONFIG_H
