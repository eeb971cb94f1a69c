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

namespace qtransfer {

/// Numerical thresholds shared by every module. Tests and the CLI read the
/// defaults from here; nothing else hard-codes a tolerance.
struct Tolerances {
  double hermitian = 1e-14;         // basis elements, entrywise
  double traceless = 1e-14;
  double orthogonality = 1e-12;     // Tr(l_a l_b) = c delta_ab
  double anticommute = 1e-14;
  double idempotent = 1e-14;
  double state_hermitian = 1e-12;   // decompose() preconditions
  double state_trace = 1e-12;
  double positivity = 1e-10;        // smallest admissible eigenvalue is -positivity
  double unitarity = 1e-12;
  double probability_sum = 1e-12;
  double transfer_imag = 1e-12;     // imaginary residue dropped from T entries
  double spectral_radius = 1e-10;
  double spectral_reconstruction = 1e-10;
  double condition_limit = 1e12;    // eigenvector matrix condition for diagonalize()
  double unit_modulus = 1e-12;      // |d| = 1 gives a zero decoherence rate
  double expm_norm_limit = 50.0;
};

inline constexpr Tolerances kTolerances{};

}  // namespace qtransfer
