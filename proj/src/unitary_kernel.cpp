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
#include "qtransfer/unitary_kernel.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "qtransfer/errors.hpp"

namespace qtransfer {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void require_field_size(const RVector& field, const SpinSubalgebra& sub) {
  if (static_cast<std::size_t>(field.size()) != sub.size())
    throw Error(ErrorCode::DimensionMismatch,
                "field has " + std::to_string(field.size()) + " components, subalgebra has " +
                    std::to_string(sub.size()));
}

// (B^.l) and beta; returns false for a zero field.
bool direction_operator(const RVector& field, double tau, const SpinSubalgebra& sub,
                        CMatrix& n_dot_l, double& beta) {
  const double magnitude = field.norm();
  beta = tau * magnitude;
  n_dot_l = CMatrix::Zero(sub.dim(), sub.dim());
  if (magnitude == 0.0) return false;
  for (std::size_t k = 0; k < sub.size(); ++k)
    n_dot_l += (field[static_cast<Eigen::Index>(k)] / magnitude) * sub.element(k);
  return true;
}

const SpinSubalgebra& pauli_triple() {
  static const SpinSubalgebra sub = find_spin_subalgebra(pauli_basis(), {0, 1, 2});
  return sub;
}

double one_norm(const CMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

void FieldConfig::validate(std::size_t n_components) const {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  if (static_axis >= n_components)
    throw Error(ErrorCode::InvalidArgument, "static_axis outside the subalgebra");
  if (!std::isfinite(b0)) throw Error(ErrorCode::InvalidArgument, "b0 must be finite");
}

RVector FieldConfig::total_field(const RVector& noise) const {
  RVector b = noise;
  if (static_cast<Eigen::Index>(static_axis) >= b.size())
    throw Error(ErrorCode::DimensionMismatch, "noise vector shorter than static axis");
  b[static_cast<Eigen::Index>(static_axis)] += b0;
  return b;
}

double unitarity_error(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

Propagator expm_oracle(const CMatrix& h, double tau, const Tolerances& tol) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::DimensionMismatch, "H must be square");
  const double herm = max_abs(h - h.adjoint());
  if (!(herm <= tol.state_hermitian))
    throw Error(ErrorCode::NotHermitian, "H deviates from hermiticity by " + std::to_string(herm));
  const CMatrix x = (-kI * tau) * h;
  const double norm = h.size() == 0 ? 0.0 : one_norm(x);
  if (norm > tol.expm_norm_limit)
    throw Error(ErrorCode::NormTooLarge, "||H tau||_1 = " + std::to_string(norm));

  int squarings = 0;
  double scaled_norm = norm;
  while (scaled_norm > 0.25) {
    scaled_norm /= 2.0;
    ++squarings;
  }
  const CMatrix y = x / std::ldexp(1.0, squarings);
  const auto n = h.rows();
  CMatrix sum = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  // ||y|| <= 1/4: 30 terms leave a remainder far below double precision.
  for (int k = 1; k <= 30; ++k) {
    term = (term * y) / static_cast<double>(k);
    sum += term;
    if (max_abs(term) < 1e-20) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;

  double beta = 0.0;
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    beta = tau * eig.eigenvalues().cwiseAbs().maxCoeff();
  }
  return Propagator{std::move(sum), beta};
}

Propagator su2_propagator(const RVector& field, double tau) {
  return su2_propagator(field, tau, pauli_triple());
}

Propagator su2_propagator(const RVector& field, double tau, const SpinSubalgebra& sub) {
  if (!sub.verified()) throw Error(ErrorCode::UnverifiedSubalgebra, "subalgebra not verified");
  if (!sub.pauli_like())
    throw Error(ErrorCode::InvalidArgument, "su2 form requires a subalgebra squaring to I");
  require_field_size(field, sub);
  CMatrix n_dot_l;
  double beta = 0.0;
  const int n = sub.dim();
  if (!direction_operator(field, tau, sub, n_dot_l, beta))
    return Propagator{CMatrix::Identity(n, n), 0.0};
  CMatrix u = std::cos(beta) * CMatrix::Identity(n, n) + (kI * std::sin(beta)) * n_dot_l;
  return Propagator{std::move(u), beta};
}

Propagator subalgebra_propagator(const RVector& field, double tau, const SpinSubalgebra& sub) {
  if (!sub.verified()) throw Error(ErrorCode::UnverifiedSubalgebra, "subalgebra not verified");
  require_field_size(field, sub);
  CMatrix n_dot_l;
  double beta = 0.0;
  const int n = sub.dim();
  if (!direction_operator(field, tau, sub, n_dot_l, beta))
    return Propagator{CMatrix::Identity(n, n), 0.0};
  CMatrix u = CMatrix::Identity(n, n) + (kI * std::sin(beta)) * n_dot_l +
              (std::cos(beta) - 1.0) * sub.idempotent();
  return Propagator{std::move(u), beta};
}

Propagator subalgebra_propagator_series_form(const RVector& field, double tau,
                                             const SpinSubalgebra& sub) {
  if (!sub.verified()) throw Error(ErrorCode::UnverifiedSubalgebra, "subalgebra not verified");
  require_field_size(field, sub);
  CMatrix n_dot_l;
  double beta = 0.0;
  const int n = sub.dim();
  if (!direction_operator(field, tau, sub, n_dot_l, beta))
    return Propagator{CMatrix::Identity(n, n), 0.0};
  const CMatrix& a = sub.idempotent();
  CMatrix u = CMatrix::Identity(n, n) + (kI * beta) * n_dot_l + (std::cos(beta) - 1.0) * a +
              (kI * (std::sin(beta) - beta)) * (a * n_dot_l);
  return Propagator{std::move(u), beta};
}

CMatrix field_hamiltonian(const RVector& field, const SpinSubalgebra& sub) {
  require_field_size(field, sub);
  CMatrix h = CMatrix::Zero(sub.dim(), sub.dim());
  for (std::size_t k = 0; k < sub.size(); ++k)
    h -= field[static_cast<Eigen::Index>(k)] * sub.element(k);
  return h;
}

}  // namespace qtransfer
