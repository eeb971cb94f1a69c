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
#include <iosfwd>
#include <vector>

#include "qtransfer/noise_models.hpp"
#include "qtransfer/operator_algebra.hpp"
#include "qtransfer/unitary_kernel.hpp"

namespace qtransfer {

struct EnsembleResult {
  /// Per step 0..m: ensemble mean and standard error of each coefficient.
  std::vector<RVector> mean;
  std::vector<RVector> standard_error;
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
};

struct EnsembleRequest {
  const NoiseModel& noise;
  const FieldConfig& field;
  const SpinSubalgebra& sub;
  const OperatorBasis& basis;
  const DensityState& state0;
  std::size_t steps = 1;
  std::size_t n_traj = 1;
  std::uint64_t seed = 0;
};

/// Simulates n_traj independent noise realisations. Trajectory t uses the
/// draws sample(seed, t * steps + k), so any trajectory can be replayed on
/// its own. Output is bit-identical for every worker count.
/// Throws DimensionMismatch or InvalidArgument.
EnsembleResult run_ensemble(const EnsembleRequest& request, int workers = 0);

/// Straight single-threaded loop over trajectories; reference for
/// run_ensemble.
EnsembleResult run_ensemble_serial(const EnsembleRequest& request);

/// One trajectory's coherence vectors for steps 0..steps.
std::vector<RVector> simulate_trajectory(const EnsembleRequest& request, std::size_t trajectory);

/// Probability-weighted average over every noise sequence of length m
/// (depth-first over the support, no transfer matrix involved).
/// Throws NotEnumerable, or TooManySequences when |support|^m > max_sequences.
std::vector<RVector> exact_enumeration(const NoiseModel& noise, const FieldConfig& field,
                                       const SpinSubalgebra& sub, const OperatorBasis& basis,
                                       const DensityState& state0, std::size_t m,
                                       std::size_t max_sequences = 1'000'000);

/// "step,coeff,mean,stderr" rows in step-major order.
void write_ensemble_csv(std::ostream& out, const EnsembleResult& result);

}  // namespace qtransfer
