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
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtransfer/tolerances.hpp"

namespace qtransfer {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class BasisKind { Pauli, GellMann3, GeneralizedGellMann, KroneckerPauli };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// Names a basis without carrying its matrices. This is what configs store;
/// the matrices are always regenerated from it.
struct BasisDescriptor {
  BasisKind kind = BasisKind::Pauli;
  /// Hilbert-space dimension for Gell-Mann kinds, number of qubits for
  /// KroneckerPauli, ignored (2) for Pauli.
  int size = 2;
  /// "standard" for Pauli / GellMann3, "sym-anti-diag" for generalized
  /// Gell-Mann, "lexicographic" for Kronecker products.
  std::string ordering;

  friend bool operator==(const BasisDescriptor&, const BasisDescriptor&) = default;
};

std::string default_ordering(BasisKind kind);

/// Ordered traceless Hermitian operator basis of an N-level system with
/// Tr(l_a l_b) = ortho_const * delta_ab. The identity is never stored.
///
/// Copies are cheap: the matrices live in shared immutable storage.
class OperatorBasis {
 public:
  int dim() const noexcept { return data_->dim; }
  std::size_t size() const noexcept { return data_->elements.size(); }
  double ortho_const() const noexcept { return data_->ortho_const; }
  BasisKind kind() const noexcept { return data_->descriptor.kind; }
  const BasisDescriptor& descriptor() const noexcept { return data_->descriptor; }
  const CMatrix& element(std::size_t i) const { return data_->elements.at(i); }
  const std::vector<CMatrix>& elements() const noexcept { return data_->elements; }

  friend bool operator==(const OperatorBasis& a, const OperatorBasis& b) {
    return a.data_ == b.data_ || a.descriptor() == b.descriptor();
  }

  /// Assembles a basis from explicit matrices and checks every invariant
  /// (hermiticity, tracelessness, orthogonality, count). Throws on failure.
  static OperatorBasis from_elements(BasisDescriptor descriptor, int dim,
                                     std::vector<CMatrix> elements,
                                     double ortho_const,
                                     const Tolerances& tol = kTolerances);

 private:
  struct Data {
    BasisDescriptor descriptor;
    int dim = 0;
    double ortho_const = 0.0;
    std::vector<CMatrix> elements;
  };
  explicit OperatorBasis(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// Worst-case deviations from the basis invariants.
struct BasisCheck {
  double max_hermitian_error = 0.0;
  double max_trace_error = 0.0;
  double max_orthogonality_error = 0.0;
  bool count_ok = false;
  bool ok(const Tolerances& tol = kTolerances) const;
};

BasisCheck check_basis(const OperatorBasis& basis);

/// sigma_x, sigma_y, sigma_z; ortho_const 2.
OperatorBasis pauli_basis();

/// For N == 3 the eight standard Gell-Mann matrices in lambda_1..lambda_8
/// order. For any other N the generalized set in sym-anti-diag order (see
/// generalized_gell_mann_basis).
OperatorBasis gell_mann_basis(int n);

/// Generalized Gell-Mann matrices: symmetric pairs (j<k, lexicographic),
/// antisymmetric pairs (same order), then the N-1 diagonal elements.
/// ortho_const 2. For N = 2 this is exactly (sigma_x, sigma_y, sigma_z).
OperatorBasis generalized_gell_mann_basis(int n);

/// All 4^n - 1 non-identity tensor products of (I, X, Y, Z), lexicographic in
/// the factor indices with the leftmost factor most significant.
/// ortho_const 2^n.
OperatorBasis kronecker_pauli_basis(int num_qubits);

OperatorBasis make_basis(const BasisDescriptor& descriptor);

/// Index of the Kronecker product with the given factor labels (0 = I,
/// 1 = X, 2 = Y, 3 = Z) inside kronecker_pauli_basis(factors.size()).
std::size_t kronecker_index(const std::vector<int>& factors);

/// Basis elements that pairwise anticommute and share an idempotent square A.
/// Such a set exponentiates in closed form.
class SpinSubalgebra {
 public:
  /// Wraps the selected elements without any verification. Propagators
  /// refuse to use the result; call find_spin_subalgebra instead.
  static SpinSubalgebra unchecked(const OperatorBasis& basis,
                                  std::vector<std::size_t> indices);

  const OperatorBasis& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  int dim() const noexcept { return basis_.dim(); }
  const CMatrix& element(std::size_t k) const { return basis_.element(indices_.at(k)); }
  const CMatrix& idempotent() const noexcept { return idempotent_; }
  bool verified() const noexcept { return verified_; }
  /// True when A is the identity, i.e. the elements act as Pauli matrices.
  bool pauli_like() const noexcept { return pauli_like_; }

 private:
  friend SpinSubalgebra find_spin_subalgebra(const OperatorBasis&,
                                             std::vector<std::size_t>,
                                             const Tolerances&);
  SpinSubalgebra(OperatorBasis basis, std::vector<std::size_t> indices,
                 CMatrix idempotent, bool verified);

  OperatorBasis basis_;
  std::vector<std::size_t> indices_;
  CMatrix idempotent_;
  bool verified_ = false;
  bool pauli_like_ = false;
};

/// Verifies pairwise anticommutation and a common idempotent square.
/// Throws Error with NotAnticommuting, InconsistentSquares or
/// NotIdempotentSquare; the message names the offending elements or norm.
SpinSubalgebra find_spin_subalgebra(const OperatorBasis& basis,
                                    std::vector<std::size_t> indices,
                                    const Tolerances& tol = kTolerances);

/// Coherence-vector representation rho = I/N + sum_a coeffs[a] l_a.
struct DensityState {
  OperatorBasis basis;
  RVector coeffs;

  int dim() const noexcept { return basis.dim(); }
};

/// coeffs[a] = Tr(l_a rho) / c. Requires rho Hermitian with unit trace.
DensityState decompose(const CMatrix& rho, const OperatorBasis& basis,
                       const Tolerances& tol = kTolerances);

/// Same projection without the density-matrix preconditions; used on
/// intermediate results known to be Hermitian up to roundoff.
RVector project(const CMatrix& op, const OperatorBasis& basis);

CMatrix reconstruct(const DensityState& state);

/// Smallest eigenvalue of the reconstructed density matrix.
double min_eigenvalue(const DensityState& state);

/// Throws NotPhysical if the reconstructed matrix has an eigenvalue below
/// -tol.positivity.
void require_physical(const DensityState& state, const Tolerances& tol = kTolerances);

double max_abs(const CMatrix& m);

}  // namespace qtransfer
