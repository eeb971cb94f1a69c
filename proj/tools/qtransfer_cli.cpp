// Copyright 2026 The qtransfer Authors
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
// Command-line front end:
//
//   qtransfer <transfer|mc|pulse|basis> CONFIG [OUTPUT_DIR] [--seed N] [--workers N] [--compare]
//
// OUTPUT_DIR defaults to $QTRANSFER_OUTPUT_DIR, then the current directory.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtransfer/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Noise-averaged transfer matrices, Monte Carlo ensembles and pulse design"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  bool compare = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("output_dir", output_dir, "Directory for output files");
    sub->add_option("--seed", seed, "Override mc.seed and averaging.seed");
    sub->add_option("--workers", workers, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  };
  for (const char* name : {"transfer", "mc", "pulse", "basis"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (std::string(name) == "mc")
      sub->add_flag("--compare", compare, "Compare against the transfer-matrix prediction");
  }
  app.get_subcommand("transfer")->description("Build T, its spectrum and an evolved trajectory");
  app.get_subcommand("mc")->description("Run a seeded Monte Carlo ensemble");
  app.get_subcommand("pulse")->description("Validate a seed function and derive/verify the pulse");
  app.get_subcommand("basis")->description("Print basis and subalgebra checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qtransfer::kExitConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  qtransfer::CommandOptions options;
  if (!output_dir.empty())
    options.output_dir = output_dir;
  else if (const char* env = std::getenv("QTRANSFER_OUTPUT_DIR"); env && *env)
    options.output_dir = env;
  if (chosen->count("--seed")) options.seed = seed;
  if (chosen->count("--workers")) options.workers = workers;
  options.compare = compare;

  return qtransfer::run_command(chosen->get_name(), config_path, options, std::cout, std::cerr);
}
