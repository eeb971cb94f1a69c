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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qtransfer/noise_models.hpp"
#include "qtransfer/operator_algebra.hpp"
#include "qtransfer/unitary_kernel.hpp"

namespace qtransfer {

enum class BuildMethod { ExactEnumeration, MonteCarloAverage };

/// How expectations over continuous noise are estimated. Discrete laws are
/// always summed exactly and ignore these settings.
struct AveragingOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int workers = 0;
};

/// Noise averages entering the qubit transfer matrix:
///   i0  = E[cos^2(B tau)]
///   ii  = E[B^_i sin(B tau) cos(B tau)]
///   iij = E[B^_i B^_j sin^2(B tau)]
struct MomentIntegrals {
  double i0 = 1.0;
  Eigen::Vector3d ii = Eigen::Vector3d::Zero();
  Eigen::Matrix3d iij = Eigen::Matrix3d::Zero();
  BuildMethod method = BuildMethod::ExactEnumeration;
  std::size_t n_samples = 0;
};

struct Spectrum {
  /// T = r_inv * diag(eigvals) * r.
  CVector eigvals;
  CMatrix r;
  CMatrix r_inv;
  double condition = 0.0;
  bool diagonalizable = false;
};

/// Real map advancing the noise-averaged coherence vector by one interval,
/// in the state (Schroedinger) convention: T_cb = E[Tr(l_c U l_b U^dag)] / c.
struct TransferMatrix {
  RMatrix matrix;
  double tau = 0.0;
  BuildMethod method = BuildMethod::ExactEnumeration;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  /// Per-entry standard error of a Monte Carlo build.
  std::optional<RMatrix> standard_error;
  std::optional<Spectrum> spectral;
  std::optional<BasisDescriptor> basis;

  std::size_t dim_basis() const noexcept { return static_cast<std::size_t>(matrix.rows()); }

  /// Map acting on observable coefficients (O -> U^dag O U averaged).
  RMatrix heisenberg() const { return matrix.transpose(); }
};

MomentIntegrals qubit_integrals(const NoiseModel& noise, const FieldConfig& field,
                                const AveragingOptions& options = {});

/// Qubit transfer matrix from the moment integrals:
///   T_aa = i0 + 2 I_aa - tr(Iij),   T_ab = 2 I_ab + 2 eps_abc I_c  (a != b).
TransferMatrix assemble_qubit_T(const MomentIntegrals& m, double tau);

/// Single-realisation map T_cb = Re Tr(l_c U l_b U^dag) / c. The largest
/// discarded imaginary part is written to max_imag when given.
RMatrix conjugation_map(const OperatorBasis& basis, const CMatrix& u,
                        double* max_imag = nullptr);

/// Noise-averaged transfer matrix for any basis and verified subalgebra.
/// Exact sum over the support for discrete noise, Monte Carlo otherwise
/// (parallel, reproducible for any worker count).
/// Throws DimensionMismatch or UnverifiedSubalgebra.
TransferMatrix general_T(const OperatorBasis& basis, const SpinSubalgebra& sub,
                         const NoiseModel& noise, const FieldConfig& field,
                         const AveragingOptions& options = {},
                         const Tolerances& tol = kTolerances);

/// Serial reference implementation of general_T: one plain loop, no chunking.
TransferMatrix general_T_serial(const OperatorBasis& basis, const SpinSubalgebra& sub,
                                const NoiseModel& noise, const FieldConfig& field,
                                const AveragingOptions& options = {},
                                const Tolerances& tol = kTolerances);

/// Fills the spectral decomposition. An eigenvector matrix with condition
/// number above tol.condition_limit (or a failed reconstruction) marks the
/// matrix non-diagonalizable; evolve() then multiplies iteratively.
TransferMatrix diagonalize(TransferMatrix t, const Tolerances& tol = kTolerances);

double spectral_radius(const RMatrix& m);

/// Coherence vectors for steps 0..m. Uses the spectral form when available
/// and diagonalizable. Throws DimensionMismatch.
std::vector<DensityState> evolve(const TransferMatrix& t, const DensityState& state0,
                                 std::size_t m);

std::vector<RVector> evolve_iterated(const RMatrix& t, const RVector& v0, std::size_t m);
std::vector<RVector> evolve_spectral(const Spectrum& s, const RVector& v0, std::size_t m);

struct DecoherenceRate {
  std::complex<double> eigval;
  /// -ln|eigval| / tau; +inf for a zero eigenvalue.
  double rate = 0.0;
};

std::vector<DecoherenceRate> decoherence_rates(const TransferMatrix& t,
                                               const Tolerances& tol = kTolerances);

}  // namespace qtransfer
