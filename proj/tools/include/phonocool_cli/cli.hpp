// Copyright 2025 The phonocool Authors
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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonocool/phonocool.hpp"

namespace phonocool::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what) : Error(key + ": " + what), key_(key) {}
  const char* kind() const noexcept override { return "config"; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct EvolveConfig {
  EvolveOptions options;
  double t_min = 1e-3;
  double t_max = 1e3;
  int points = 200;
  AxisScale scale = AxisScale::kLog;
  /// Fit the stretched exponential to the trace and report it in the manifest.
  bool fit = true;
};

struct RunConfig {
  std::optional<std::string> command;
  ModelFamily family = ModelFamily::kThreeLevel;
  ModelParams params = ThreeLevelParams{};
  SweepSolver solver;
  EvolveConfig evolve;
  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  std::map<std::string, double> overrides;
  RateMapOptions ratemap;
  std::optional<double> omega_m;
  std::optional<std::string> output_dir;
  std::optional<int> jobs;
  /// The merged document the configuration was parsed from.
  json echo;

  SweepSpec sweep_spec() const;
};

const std::vector<std::string>& commands();
const std::vector<std::string>& preset_names();
json preset(const std::string& name);

/// Schema-validates a config document; unknown keys raise ConfigError naming the key path.
RunConfig parse_config(const json& doc);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Built-in reference checks; constants are injectable for negative controls.
std::vector<CheckOutcome> run_validate(const PhysicalConstants& constants = kCodata, int jobs = 1);

struct Invocation {
  std::string command;
  std::optional<std::filesystem::path> config_file;
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> jobs;
};

/// Runs one command and writes all outputs; returns the process exit code.
int execute(const Invocation& inv);

/// argv entry point used by the phonocool executable.
int main(int argc, char** argv);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace phonocool::cli
