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

#include "qtransfer/operator_algebra.hpp"

namespace qtransfer {

/// Static part of the piecewise-constant Hamiltonian H = -B.l with
/// B = b0 * e_axis + b, hbar = 1.
struct FieldConfig {
  double b0 = 0.0;
  /// Position inside the subalgebra tuple that carries the static field.
  std::size_t static_axis = 2;
  double tau = 1.0;

  /// Throws InvalidArgument unless tau > 0 and static_axis < n_components.
  void validate(std::size_t n_components) const;
  /// b0 * e_axis + noise.
  RVector total_field(const RVector& noise) const;
};

struct Propagator {
  CMatrix matrix;
  /// tau * |B|.
  double beta = 0.0;

  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// exp(-i H tau) by scaling and squaring of a truncated Taylor series.
/// Independent of the closed forms below; it is what they are checked
/// against. Throws NotHermitian, or NormTooLarge when ||H tau||_1 exceeds
/// tol.expm_norm_limit.
Propagator expm_oracle(const CMatrix& h, double tau, const Tolerances& tol = kTolerances);

/// I cos(beta) + i (B^.sigma) sin(beta) for H = -B.sigma on the Pauli matrices.
Propagator su2_propagator(const RVector& field, double tau);

/// Same closed form on an explicit Pauli-like subalgebra (A = I), e.g. the
/// sigma_i (x) I triple of a two-qubit register.
Propagator su2_propagator(const RVector& field, double tau, const SpinSubalgebra& sub);

/// U = I + i sin(beta) (B^.l) + (cos(beta) - 1) A for a verified
/// anticommuting subalgebra. Zero field gives the identity.
/// Throws UnverifiedSubalgebra or DimensionMismatch.
Propagator subalgebra_propagator(const RVector& field, double tau, const SpinSubalgebra& sub);

/// The un-simplified power-series form
///   I + i beta (B^.l) + A (cos(beta) - 1) + i A (B^.l) (sin(beta) - beta).
/// Algebraically identical to subalgebra_propagator because A (B^.l) = B^.l;
/// kept so the identity stays under test.
Propagator subalgebra_propagator_series_form(const RVector& field, double tau,
                                             const SpinSubalgebra& sub);

/// -B.l as an explicit matrix.
CMatrix field_hamiltonian(const RVector& field, const SpinSubalgebra& sub);

/// max |U^dagger U - I|.
double unitarity_error(const CMatrix& u);

}  // namespace qtransfer
