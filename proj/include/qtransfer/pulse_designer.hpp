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
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtransfer/numerics.hpp"

namespace qtransfer {

// Single-axis driving H(t) = (J(t)/2) sigma_z + (h/2) sigma_x, hbar = 1.
//
// A seed q(t) with q(0) = 1, q'(0) = 0, q''(0) = -h^2 and
// q'^2 <= h^2 (1 - q^2) determines J(t) and the evolution operator in closed
// form through the angles F, Phi, K:
//   J          = (q'' + h^2 q) / sqrt(h^2 (1 - q^2) - q'^2)
//   tan F      = q' / (h q)                (continuous branch, F(0) = 0)
//   sin(2 Phi) = sqrt(q^2 + q'^2 / h^2)    (Phi(0) = pi/4)
//   K'         = J cos F / (2 tan Phi)     (K(0) = 0)
//   D+ = exp(i (F - K + h t)) cos Phi,  D- = exp(-i K) sin Phi.

enum class DerivativeMethod { Analytic, FiniteDifference };

using Matrix2c = Eigen::Matrix2cd;

struct SeedFunction {
  std::string family;
  double h = 1.0;
  std::vector<double> grid;
  std::vector<double> q;
  std::vector<double> q_dot;
  std::vector<double> q_ddot;
  /// Closed forms of h^2 (1 - q^2) - q'^2 and q'' + h^2 q. Both vanish like
  /// t^4 and t^2 at t = 0, where forming them from q loses most digits.
  /// Empty for sampled seeds.
  std::vector<double> margin;
  std::vector<double> drive_numerator;
  DerivativeMethod method = DerivativeMethod::Analytic;
};

/// `points` equally spaced samples on [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t points);

/// q = (1 + cos^2(h t)) / 2. Produces the constant drive J = sqrt(3) h;
/// the margin vanishes at h t = k pi, so grids must stay below pi / h.
SeedFunction cos_squared_seed(double h, std::vector<double> grid);

/// q = cos(h t) + a (1 - cos(h t))^2 for a inside quartic_parameter_range();
/// margin vanishes at h t = 2 k pi.
SeedFunction cos_plus_quartic_seed(double h, double a, std::vector<double> grid);

/// q = cos(h t): saturates the constraint everywhere (J is 0/0).
SeedFunction cosine_seed(double h, std::vector<double> grid);

/// Raw samples; derivatives from five-point finite differences.
SeedFunction sampled_seed(double h, std::vector<double> grid, std::vector<double> q);

struct ParameterRange {
  double lower = 0.0;
  double upper = 0.0;
};

/// Admissible open interval of `a` for cos_plus_quartic_seed, found by
/// bisection on a dense sampling of one period (computed once).
ParameterRange quartic_parameter_range();

enum class SeedStatus { Valid, Degenerate, Invalid };

std::string to_string(SeedStatus status);

struct ConditionCheck {
  bool pass = false;
  double value = 0.0;      // observed value (or worst value over the grid)
  double tolerance = 0.0;
  std::size_t index = 0;   // worst grid point
  double t = 0.0;
};

struct SeedValidation {
  SeedStatus status = SeedStatus::Invalid;
  ConditionCheck q0;
  ConditionCheck q_dot0;
  ConditionCheck q_ddot0;
  /// Most negative margin + slack over the grid (pass when >= 0).
  ConditionCheck constraint;
  /// Smallest margin / (h^2 min(1, (h t)^4)) at t > 0; degenerate when
  /// <= slack_factor.
  ConditionCheck interior_margin;
  double slack = 0.0;
  std::vector<std::string> messages;
};

struct PulseOptions {
  Quadrature quadrature = Quadrature::Cubic;
  /// sin(2 Phi) may exceed 1 by this much before BranchAmbiguity.
  double branch_tolerance = 1e-9;
  /// Constraint slack is slack_factor * h^2; the interior degeneracy test
  /// compares the normalized margin against slack_factor itself.
  double slack_factor = 1e-12;
};

SeedValidation validate_seed(const SeedFunction& seed, const PulseOptions& options = {});

struct PulseProfile {
  SeedFunction seed;
  std::vector<double> J;
  std::vector<double> phi;
  std::vector<double> F;
  std::vector<double> K;
  std::vector<std::complex<double>> d_plus;
  std::vector<std::complex<double>> d_minus;
  std::vector<double> margin;
  /// max |sec F exp(h int tan F) - sin 2 Phi| up to the first zero of q; the
  /// integral form of the Phi relation, reported for comparison only.
  double integral_form_discrepancy = 0.0;
  std::size_t integral_form_points = 0;
};

/// Throws DegenerateSeed (0/0 in J somewhere on the interior, or any
/// non-finite value), InvalidSeed (failed validation) or BranchAmbiguity.
/// J(0) is itself 0/0 and is set by quadratic extrapolation from grid
/// points 1..3.
PulseProfile derive_pulse(const SeedFunction& seed, const PulseOptions& options = {});

/// [[u11, -conj(u21)], [u21, conj(u11)]] at grid point t_index.
Matrix2c analytic_propagator(const PulseProfile& pulse, std::size_t t_index);

struct IntegratorOptions {
  double rtol = 1e-13;
  double atol = 1e-14;
  std::size_t max_steps = 2'000'000;
};

/// Solves i U' = H(t) U, U(0) = I, with adaptive Dormand-Prince 5(4) steps,
/// J between grid points from local cubic interpolation. Returns U at
/// every grid point. Throws IntegratorFailure.
std::vector<Matrix2c> integrate_propagator(const std::vector<double>& grid,
                                           const std::vector<double>& J, double h,
                                           const IntegratorOptions& options = {});

struct PulseVerification {
  double max_propagator_error = 0.0;   // max-norm |U_ode - U_analytic|
  std::size_t propagator_worst_index = 0;
  double max_first_order_residual = 0.0;
  std::size_t residual_worst_index = 0;
  double max_abs_J = 0.0;
  double max_ansatz_norm_error = 0.0;  // | |D+|^2 + |D-|^2 - 1 |
  double max_analytic_unitarity_error = 0.0;
  double max_analytic_det_error = 0.0;
  double max_ode_unitarity_error = 0.0;
  double propagator_tolerance = 1e-6;
  double residual_tolerance = 0.0;     // 1e-6 * max|J|
  double unitarity_tolerance = 1e-8;
  bool pass = false;
};

PulseVerification verify_pulse(const PulseProfile& pulse, const IntegratorOptions& options = {});

/// t,q,J,Phi,F,K,Re_Dplus,Im_Dplus,Re_Dminus,Im_Dminus,margin
void write_pulse_csv(std::ostream& out, const PulseProfile& pulse);

}  // namespace qtransfer
