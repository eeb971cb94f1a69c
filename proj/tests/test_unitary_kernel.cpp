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
#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qtransfer/errors.hpp"
#include "qtransfer/unitary_kernel.hpp"

namespace qtransfer {
namespace {

using cd = std::complex<double>;

TEST(Expm, MatchesEigendecomposition) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      CMatrix g = CMatrix::Random(n, n);
      const CMatrix h = 0.5 * (g + g.adjoint());
      const double tau = 0.1 + trial * 0.3;
      const auto u = expm_oracle(h, tau);
      EXPECT_LT(max_abs(u.matrix - oracle::eig_propagator(h, tau)), 1e-12) << n << " " << tau;
      EXPECT_LT(unitarity_error(u.matrix), 1e-12);
    }
  }
}

TEST(Expm, FrozenValue) {
  // exp(-i sigma_x pi/4) = (I - i sigma_x)/sqrt2.
  CMatrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const auto u = expm_oracle(sx, std::numbers::pi / 4);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(u.matrix(0, 0) - cd(r, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.matrix(0, 1) - cd(0, -r)), 0.0, 1e-15);
}

TEST(Expm, Preconditions) {
  CMatrix h(2, 2);
  h << 0, 1, 2, 0;
  try {
    expm_oracle(h, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
  h << 0, 100, 100, 0;
  try {
    expm_oracle(h, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormTooLarge);
  }
}

TEST(Su2, ZeroFieldIsIdentity) {
  const auto u = su2_propagator(RVector::Zero(3), 2.0);
  EXPECT_EQ(u.matrix, CMatrix::Identity(2, 2));
  EXPECT_EQ(u.beta, 0.0);
}

TEST(Su2, MatchesOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tau_dist(0.01, 10.0);
  const auto basis = pauli_basis();
  for (int trial = 0; trial < 200; ++trial) {
    const RVector b = oracle::random_field(rng, 3);
    const double tau = tau_dist(rng);
    const auto u = su2_propagator(b, tau);
    EXPECT_LT(max_abs(u.matrix - oracle::eig_propagator(oracle::hamiltonian(basis, {0, 1, 2}, b), tau)),
              1e-12);
    EXPECT_NEAR(u.beta, tau * b.norm(), 1e-14);
  }
}

TEST(Su2, TinyFieldIsWellBehaved) {
  RVector b(3);
  b << 1e-200, 0.0, 0.0;
  const auto u = su2_propagator(b, 1.0);
  EXPECT_TRUE(u.matrix.allFinite());
  EXPECT_LT(unitarity_error(u.matrix), 1e-15);
}

struct Case {
  const char* name;
  OperatorBasis basis;
  std::vector<std::size_t> idx;
};

std::vector<Case> cases() {
  return {{"qutrit", gell_mann_basis(3), {0, 1, 2}},
          {"two_qubit", kronecker_pauli_basis(2), {3, 7, 11}},
          {"n4", generalized_gell_mann_basis(4), {0, 6, 12}},
          {"qubit_in_kron", kronecker_pauli_basis(1), {0, 1, 2}}};
}

TEST(Subalgebra, ClosedFormMatchesOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> tau_dist(0.01, 10.0);
  for (const auto& c : cases()) {
    const auto sub = find_spin_subalgebra(c.basis, c.idx);
    for (int trial = 0; trial < 100; ++trial) {
      const RVector b = oracle::random_field(rng, 3);
      const double tau = tau_dist(rng);
      const auto u = subalgebra_propagator(b, tau, sub);
      const CMatrix ref = oracle::eig_propagator(oracle::hamiltonian(c.basis, c.idx, b), tau);
      EXPECT_LT(max_abs(u.matrix - ref), 1e-12) << c.name;
      EXPECT_LT(max_abs(u.matrix - subalgebra_propagator_series_form(b, tau, sub).matrix), 1e-13)
          << c.name;
      EXPECT_LT(max_abs(field_hamiltonian(b, sub) - oracle::hamiltonian(c.basis, c.idx, b)), 1e-15);
    }
  }
}

TEST(Subalgebra, ComplementIsUntouched) {
  // Outside the support of A the propagator is the identity.
  const auto sub = find_spin_subalgebra(gell_mann_basis(3), {0, 1, 2});
  RVector b(3);
  b << 0.3, -0.7, 0.2;
  const auto u = subalgebra_propagator(b, 1.7, sub);
  EXPECT_NEAR(std::abs(u.matrix(2, 2) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(u.matrix(0, 2), cd(0.0));
  EXPECT_EQ(u.matrix(2, 1), cd(0.0));
}

TEST(Subalgebra, Preconditions) {
  const auto basis = gell_mann_basis(3);
  const auto unverified = SpinSubalgebra::unchecked(basis, {0, 1, 2});
  try {
    subalgebra_propagator(RVector::Ones(3), 1.0, unverified);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnverifiedSubalgebra);
  }
  const auto sub = find_spin_subalgebra(basis, {0, 1, 2});
  EXPECT_THROW(subalgebra_propagator(RVector::Ones(2), 1.0, sub), Error);
  // The SU(2) shortcut is only for A = I.
  EXPECT_THROW(su2_propagator(RVector::Ones(3), 1.0, sub), Error);
}

TEST(Field, TotalFieldAndValidation) {
  FieldConfig f{0.5, 2, 0.1};
  RVector n(3);
  n << 1.0, 2.0, 3.0;
  const RVector t = f.total_field(n);
  EXPECT_EQ(t[2], 3.5);
  EXPECT_EQ(t[0], 1.0);
  EXPECT_NO_THROW(f.validate(3));
  EXPECT_THROW(f.validate(2), Error);
  EXPECT_THROW((FieldConfig{0.0, 0, 0.0}.validate(3)), Error);
}

}  // namespace
}  // namespace qtransfer
