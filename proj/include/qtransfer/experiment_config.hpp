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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtransfer/noise_models.hpp"
#include "qtransfer/numerics.hpp"
#include "qtransfer/operator_algebra.hpp"
#include "qtransfer/unitary_kernel.hpp"

namespace qtransfer {

// Experiment configs are JSON documents. Every section is optional at parse
// time; each subcommand insists on the sections it uses. Unknown keys are
// rejected so typos surface as errors naming the offending field.

struct SystemSpec {
  BasisDescriptor basis;
  std::vector<std::size_t> subalgebra;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Declarative noise law: telegraph | discrete | gaussian | uniform_sphere |
/// uniform_axis. Only the fields used by `kind` are serialized.
struct NoiseSpec {
  std::string kind = "telegraph";
  std::size_t components = 3;
  double amplitude = 0.0;             // telegraph, uniform_axis
  std::size_t axis = 2;               // telegraph, uniform_axis
  std::vector<double> sigma;          // gaussian (one entry = isotropic)
  double radius = 0.0;                // uniform_sphere
  std::vector<NoiseAtom> atoms;       // discrete

  NoiseModel build() const;
  friend bool operator==(const NoiseSpec& a, const NoiseSpec& b);
};

struct AveragingSpec {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;

  friend bool operator==(const AveragingSpec&, const AveragingSpec&) = default;
};

/// Initial state: "maximally_mixed", "uniform_superposition",
/// "basis_state:<k>", or "coeffs" with explicit coefficients.
struct EvolutionSpec {
  std::size_t steps = 0;
  std::string initial = "uniform_superposition";
  std::vector<double> coeffs;

  friend bool operator==(const EvolutionSpec&, const EvolutionSpec&) = default;
};

struct McSpec {
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  int workers = 0;

  friend bool operator==(const McSpec&, const McSpec&) = default;
};

/// family: cos_squared | cos_plus_quartic | cosine.
struct PulseSpec {
  std::string family = "cos_squared";
  double h = 1.0;
  double a = 0.25;  // cos_plus_quartic only
  double t_end = 2.0;
  std::size_t points = 1001;
  Quadrature quadrature = Quadrature::Cubic;

  friend bool operator==(const PulseSpec&, const PulseSpec&) = default;
};

/// File names, relative to the output directory.
struct OutputSpec {
  std::string transfer_matrix = "transfer_matrix.txt";
  std::string spectrum = "spectrum.csv";
  std::string trajectory = "trajectory.csv";
  std::string ensemble = "ensemble.csv";
  std::string comparison = "comparison.csv";
  std::string pulse_validation = "pulse_validation.json";
  std::string pulse_csv = "pulse.csv";
  std::string pulse_verification = "pulse_verification.json";

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
  std::optional<SystemSpec> system;
  std::optional<FieldConfig> field;
  std::optional<NoiseSpec> noise;
  AveragingSpec averaging;
  std::optional<EvolutionSpec> evolution;
  std::optional<McSpec> mc;
  std::optional<PulseSpec> pulse;
  OutputSpec outputs;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

/// Throws Error(ConfigError) naming the offending field ("noise.amplitude:
/// ...") or, for malformed JSON, the line and column.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

nlohmann::ordered_json to_json(const BasisDescriptor& d);
BasisDescriptor basis_descriptor_from_json(const nlohmann::json& j);

/// Builds the initial state named by the evolution section; checks that it
/// is a physical density matrix.
DensityState make_initial_state(const EvolutionSpec& spec, const OperatorBasis& basis);

}  // namespace qtransfer
