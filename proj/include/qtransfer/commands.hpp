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
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qtransfer/experiment_config.hpp"

namespace qtransfer {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitDegenerateSeed = 3,
  kExitInvalidSeed = 4,
  kExitVerificationFailed = 5,
  kExitIntegratorFailure = 6,
};

struct CommandOptions {
  std::filesystem::path output_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides mc.seed and averaging.seed
  std::optional<int> workers;         // overrides mc.workers
  bool compare = false;               // mc only
};

/// Each command writes the files named in config.outputs below
/// options.output_dir and returns an exit code. Errors propagate as Error.
int cmd_transfer(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_mc(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_pulse(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_basis(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out);

/// Loads the config, dispatches, and maps errors to exit codes with a
/// one-line diagnostic on `err`.
int run_command(const std::string& name, const std::string& config_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace qtransfer
