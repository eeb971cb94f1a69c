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
#include "qtransfer/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "qtransfer/errors.hpp"

namespace qtransfer {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

CMatrix pauli(int label) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (label) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = -kI; m(1, 0) = kI; break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw Error(ErrorCode::InvalidArgument, "pauli label out of range");
  }
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix symmetric_pair(int n, int j, int k) {
  CMatrix m = CMatrix::Zero(n, n);
  m(j, k) = 1.0;
  m(k, j) = 1.0;
  return m;
}

CMatrix antisymmetric_pair(int n, int j, int k) {
  CMatrix m = CMatrix::Zero(n, n);
  m(j, k) = -kI;
  m(k, j) = kI;
  return m;
}

// l-th diagonal generator, l = 1..n-1.
CMatrix diagonal_element(int n, int l) {
  CMatrix m = CMatrix::Zero(n, n);
  const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
  for (int j = 0; j < l; ++j) m(j, j) = scale;
  m(l, l) = -l * scale;
  return m;
}

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Pauli: return "pauli";
    case BasisKind::GellMann3: return "gell_mann";
    case BasisKind::GeneralizedGellMann: return "generalized_gell_mann";
    case BasisKind::KroneckerPauli: return "kronecker_pauli";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& name) {
  for (auto kind : {BasisKind::Pauli, BasisKind::GellMann3,
                    BasisKind::GeneralizedGellMann, BasisKind::KroneckerPauli})
    if (to_string(kind) == name) return kind;
  throw Error(ErrorCode::InvalidArgument, "unknown basis kind '" + name + "'");
}

std::string default_ordering(BasisKind kind) {
  switch (kind) {
    case BasisKind::Pauli:
    case BasisKind::GellMann3: return "standard";
    case BasisKind::GeneralizedGellMann: return "sym-anti-diag";
    case BasisKind::KroneckerPauli: return "lexicographic";
  }
  return "standard";
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool BasisCheck::ok(const Tolerances& tol) const {
  return count_ok && max_hermitian_error <= tol.hermitian &&
         max_trace_error <= tol.traceless &&
         max_orthogonality_error <= tol.orthogonality;
}

OperatorBasis OperatorBasis::from_elements(BasisDescriptor descriptor, int dim,
                                           std::vector<CMatrix> elements,
                                           double ortho_const,
                                           const Tolerances& tol) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "basis dimension must be >= 2");
  if (descriptor.ordering.empty()) descriptor.ordering = default_ordering(descriptor.kind);
  auto data = std::make_shared<Data>();
  data->descriptor = std::move(descriptor);
  data->dim = dim;
  data->ortho_const = ortho_const;
  data->elements = std::move(elements);
  OperatorBasis basis(std::move(data));

  for (const auto& e : basis.elements())
    if (e.rows() != dim || e.cols() != dim)
      throw Error(ErrorCode::DimensionMismatch, "basis element has wrong shape");
  const BasisCheck check = check_basis(basis);
  if (!check.ok(tol)) {
    std::ostringstream msg;
    msg << "basis invariants violated: count_ok=" << check.count_ok
        << " hermitian=" << check.max_hermitian_error
        << " trace=" << check.max_trace_error
        << " orthogonality=" << check.max_orthogonality_error;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return basis;
}

BasisCheck check_basis(const OperatorBasis& basis) {
  BasisCheck check;
  const auto n = static_cast<std::size_t>(basis.dim());
  check.count_ok = basis.size() == n * n - 1;
  const auto& els = basis.elements();
  for (std::size_t a = 0; a < els.size(); ++a) {
    check.max_hermitian_error =
        std::max(check.max_hermitian_error, max_abs(els[a] - els[a].adjoint()));
    check.max_trace_error = std::max(check.max_trace_error, std::abs(els[a].trace()));
    for (std::size_t b = 0; b < els.size(); ++b) {
      const cd tr = (els[a] * els[b]).trace();
      const double expected = a == b ? basis.ortho_const() : 0.0;
      check.max_orthogonality_error =
          std::max(check.max_orthogonality_error, std::abs(tr - expected));
    }
  }
  return check;
}

OperatorBasis pauli_basis() {
  return OperatorBasis::from_elements({BasisKind::Pauli, 2, "standard"}, 2,
                                      {pauli(1), pauli(2), pauli(3)}, 2.0);
}

OperatorBasis generalized_gell_mann_basis(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Gell-Mann basis needs N >= 2");
  std::vector<CMatrix> els;
  els.reserve(static_cast<std::size_t>(n * n - 1));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) els.push_back(symmetric_pair(n, j, k));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) els.push_back(antisymmetric_pair(n, j, k));
  for (int l = 1; l < n; ++l) els.push_back(diagonal_element(n, l));
  return OperatorBasis::from_elements(
      {BasisKind::GeneralizedGellMann, n, "sym-anti-diag"}, n, std::move(els), 2.0);
}

OperatorBasis gell_mann_basis(int n) {
  if (n != 3) return generalized_gell_mann_basis(n);
  std::vector<CMatrix> els{
      symmetric_pair(3, 0, 1), antisymmetric_pair(3, 0, 1), diagonal_element(3, 1),
      symmetric_pair(3, 0, 2), antisymmetric_pair(3, 0, 2), symmetric_pair(3, 1, 2),
      antisymmetric_pair(3, 1, 2), diagonal_element(3, 2)};
  return OperatorBasis::from_elements({BasisKind::GellMann3, 3, "standard"}, 3,
                                      std::move(els), 2.0);
}

std::size_t kronecker_index(const std::vector<int>& factors) {
  std::size_t flat = 0;
  for (int f : factors) {
    if (f < 0 || f > 3) throw Error(ErrorCode::InvalidArgument, "Pauli factor out of range");
    flat = flat * 4 + static_cast<std::size_t>(f);
  }
  if (flat == 0) throw Error(ErrorCode::InvalidArgument, "identity is not a basis element");
  return flat - 1;
}

OperatorBasis kronecker_pauli_basis(int num_qubits) {
  if (num_qubits < 1) throw Error(ErrorCode::InvalidArgument, "need at least one qubit");
  if (num_qubits > 10) throw Error(ErrorCode::InvalidArgument, "too many qubits");
  const std::size_t count = std::size_t{1} << (2 * num_qubits);
  const int dim = 1 << num_qubits;
  std::vector<CMatrix> els;
  els.reserve(count - 1);
  for (std::size_t flat = 1; flat < count; ++flat) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (int q = num_qubits - 1; q >= 0; --q) {
      const int label = static_cast<int>((flat >> (2 * q)) & 3u);
      m = kron(m, pauli(label));
    }
    els.push_back(std::move(m));
  }
  return OperatorBasis::from_elements({BasisKind::KroneckerPauli, num_qubits, "lexicographic"},
                                      dim, std::move(els), static_cast<double>(dim));
}

OperatorBasis make_basis(const BasisDescriptor& d) {
  if (!d.ordering.empty() && d.ordering != default_ordering(d.kind))
    throw Error(ErrorCode::InvalidArgument,
                "unsupported ordering '" + d.ordering + "' for " + to_string(d.kind));
  switch (d.kind) {
    case BasisKind::Pauli: return pauli_basis();
    case BasisKind::GellMann3:
      if (d.size != 3) throw Error(ErrorCode::InvalidArgument, "gell_mann kind requires dim 3");
      return gell_mann_basis(3);
    case BasisKind::GeneralizedGellMann: return generalized_gell_mann_basis(d.size);
    case BasisKind::KroneckerPauli: return kronecker_pauli_basis(d.size);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown basis kind");
}

SpinSubalgebra::SpinSubalgebra(OperatorBasis basis, std::vector<std::size_t> indices,
                               CMatrix idempotent, bool verified)
    : basis_(std::move(basis)),
      indices_(std::move(indices)),
      idempotent_(std::move(idempotent)),
      verified_(verified) {
  pauli_like_ = verified_ &&
                max_abs(idempotent_ - CMatrix::Identity(basis_.dim(), basis_.dim())) <=
                    kTolerances.idempotent;
}

SpinSubalgebra SpinSubalgebra::unchecked(const OperatorBasis& basis,
                                         std::vector<std::size_t> indices) {
  for (auto i : indices)
    if (i >= basis.size()) throw Error(ErrorCode::InvalidArgument, "subalgebra index out of range");
  CMatrix a = indices.empty() ? CMatrix::Zero(basis.dim(), basis.dim())
                              : CMatrix(basis.element(indices.front()) *
                                        basis.element(indices.front()));
  return SpinSubalgebra(basis, std::move(indices), std::move(a), false);
}

SpinSubalgebra find_spin_subalgebra(const OperatorBasis& basis,
                                    std::vector<std::size_t> indices,
                                    const Tolerances& tol) {
  if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "empty subalgebra");
  for (auto i : indices)
    if (i >= basis.size()) throw Error(ErrorCode::InvalidArgument, "subalgebra index out of range");

  for (std::size_t x = 0; x < indices.size(); ++x) {
    for (std::size_t y = x + 1; y < indices.size(); ++y) {
      const auto& lx = basis.element(indices[x]);
      const auto& ly = basis.element(indices[y]);
      const double err = max_abs(lx * ly + ly * lx);
      if (!(err <= tol.anticommute)) {
        std::ostringstream msg;
        msg << "elements " << indices[x] << " and " << indices[y]
            << " do not anticommute (max |{a,b}| = " << err << ")";
        throw Error(ErrorCode::NotAnticommuting, msg.str());
      }
    }
  }

  const CMatrix a = basis.element(indices.front()) * basis.element(indices.front());
  for (std::size_t x = 1; x < indices.size(); ++x) {
    const auto& l = basis.element(indices[x]);
    const double err = max_abs(l * l - a);
    if (!(err <= tol.idempotent)) {
      std::ostringstream msg;
      msg << "element " << indices[x] << " squares differently from element "
          << indices.front() << " (max deviation " << err << ")";
      throw Error(ErrorCode::InconsistentSquares, msg.str());
    }
  }

  const double idem = max_abs(a * a - a);
  if (!(idem <= tol.idempotent)) {
    std::ostringstream msg;
    msg << "common square is not idempotent, ||A^2 - A|| = " << idem;
    throw Error(ErrorCode::NotIdempotentSquare, msg.str());
  }
  for (auto i : indices) {
    const auto& l = basis.element(i);
    const double absorb = std::max(max_abs(a * l - l), max_abs(l * a - l));
    if (!(absorb <= tol.idempotent)) {
      std::ostringstream msg;
      msg << "A does not act as identity on element " << i << " (deviation " << absorb << ")";
      throw Error(ErrorCode::NotIdempotentSquare, msg.str());
    }
  }
  return SpinSubalgebra(basis, std::move(indices), a, true);
}

RVector project(const CMatrix& op, const OperatorBasis& basis) {
  RVector coeffs(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    // Tr(l_a op) without forming the product.
    const cd tr = (basis.element(a).transpose().cwiseProduct(op)).sum();
    coeffs[static_cast<Eigen::Index>(a)] = tr.real() / basis.ortho_const();
  }
  return coeffs;
}

DensityState decompose(const CMatrix& rho, const OperatorBasis& basis, const Tolerances& tol) {
  if (rho.rows() != basis.dim() || rho.cols() != basis.dim())
    throw Error(ErrorCode::DimensionMismatch, "density matrix shape does not match basis");
  const double herm = max_abs(rho - rho.adjoint());
  if (!(herm <= tol.state_hermitian))
    throw Error(ErrorCode::NotHermitian, "density matrix deviates from hermiticity by " +
                                             std::to_string(herm));
  const double trace_err = std::abs(rho.trace() - 1.0);
  if (!(trace_err <= tol.state_trace))
    throw Error(ErrorCode::NotUnitTrace, "trace deviates from 1 by " + std::to_string(trace_err));
  return DensityState{basis, project(rho, basis)};
}

CMatrix reconstruct(const DensityState& state) {
  const int n = state.dim();
  if (static_cast<std::size_t>(state.coeffs.size()) != state.basis.size())
    throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match basis");
  CMatrix rho = CMatrix::Identity(n, n) / static_cast<double>(n);
  for (std::size_t a = 0; a < state.basis.size(); ++a)
    rho += state.coeffs[static_cast<Eigen::Index>(a)] * state.basis.element(a);
  return rho;
}

double min_eigenvalue(const DensityState& state) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(reconstruct(state), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void require_physical(const DensityState& state, const Tolerances& tol) {
  const double lowest = min_eigenvalue(state);
  if (lowest < -tol.positivity)
    throw Error(ErrorCode::NotPhysical,
                "density matrix has eigenvalue " + std::to_string(lowest));
}

}  // namespace qtransfer
