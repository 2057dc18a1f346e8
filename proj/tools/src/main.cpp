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

#include <CLI11.hpp>

#include "phonocool_cli/cli.hpp"

namespace phonocool::cli {

int main(int argc, char** argv) {
  CLI::App app{"phonocool: steady-state and dynamics of phonon cooling models"};
  app.set_version_flag("--version", PHONOCOOL_VERSION);
  Invocation inv;
  std::string config, out, preset_name;
  int jobs = 0;
  app.add_option("command", inv.command, "steady | evolve | sweep | ratemap | optimal | validate")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config, "JSON config file");
  app.add_option("--out", out, "output directory");
  app.add_option("--preset", preset_name, "built-in configuration")->check(CLI::IsMember(preset_names()));
  app.add_option("--jobs", jobs, "worker threads (default: PHONOCOOL_JOBS or 1)")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (!config.empty()) inv.config_file = config;
  if (!out.empty()) inv.out_dir = out;
  if (!preset_name.empty()) inv.preset = preset_name;
  if (jobs > 0) inv.jobs = jobs;
  return execute(inv);
}

}  // namespace phonocool::cli

int main(int argc, char** argv) { return phonocool::cli::main(argc, argv); }
