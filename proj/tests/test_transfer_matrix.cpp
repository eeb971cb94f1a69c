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
#include "qtransfer/monte_carlo_oracle.hpp"
#include "qtransfer/transfer_matrix.hpp"

namespace qtransfer {
namespace {

NoiseModel random_discrete(std::mt19937_64& rng, std::size_t atoms, double scale) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<NoiseAtom> out;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    out.push_back({oracle::random_field(rng, 3, scale), u(rng)});
    total += out.back().p;
  }
  for (auto& a : out) a.p /= total;
  return NoiseModel::discrete(out);
}

std::vector<CMatrix> unitaries(const NoiseModel& noise, const FieldConfig& field,
                               const OperatorBasis& basis, const std::vector<std::size_t>& idx,
                               std::vector<double>* weights) {
  std::vector<CMatrix> us;
  weights->clear();
  for (const auto& atom : noise.enumerate()) {
    us.push_back(oracle::eig_propagator(oracle::hamiltonian(basis, idx, field.total_field(atom.b)), field.tau));
    weights->push_back(atom.p);
  }
  return us;
}

TEST(Qubit, PureDephasingTelegraph) {
  for (double b : {0.1, 0.7, 2.3}) {
    for (double tau : {0.05, 0.3, 1.9}) {
      const FieldConfig field{0.0, 2, tau};
      const auto t = general_T(pauli_basis(), find_spin_subalgebra(pauli_basis(), {0, 1, 2}),
                               NoiseModel::telegraph(b, 2), field);
      RMatrix expected = RMatrix::Zero(3, 3);
      expected.diagonal() << std::cos(2 * b * tau), std::cos(2 * b * tau), 1.0;
      EXPECT_LT((t.matrix - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Qubit, StaticFieldRotationFrozen) {
  // No noise, B0 = 0.4 along z, tau = 0.5: rotation by 2 B0 tau = 0.4 rad.
  const FieldConfig field{0.4, 2, 0.5};
  const auto t = general_T(pauli_basis(), find_spin_subalgebra(pauli_basis(), {0, 1, 2}),
                           NoiseModel::telegraph(0.0, 2), field);
  const double c = 0.92106099400288510;  // cos 0.4
  const double s = 0.38941834230865050;  // sin 0.4
  RMatrix expected(3, 3);
  expected << c, s, 0, -s, c, 0, 0, 0, 1;
  EXPECT_LT((t.matrix - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Qubit, TableMatchesGeneral) {
  std::mt19937_64 rng(23);
  const auto basis = pauli_basis();
  const auto sub = find_spin_subalgebra(basis, {0, 1, 2});
  for (int trial = 0; trial < 50; ++trial) {
    const auto noise = random_discrete(rng, 1 + trial % 5, 1.5);
    const FieldConfig field{0.3 * (trial % 3), static_cast<std::size_t>(trial % 3), 0.2 + 0.1 * (trial % 7)};
    const auto m = qubit_integrals(noise, field);
    const auto table = assemble_qubit_T(m, field.tau);
    const auto general = general_T(basis, sub, noise, field);
    EXPECT_LT((table.matrix - general.matrix).cwiseAbs().maxCoeff(), 1e-12) << trial;
    EXPECT_NEAR(m.i0 + m.iij.trace(), 1.0, 1e-14);
  }
}

TEST(Qubit, TableCorrectsTheZYEntry) {
  // Noise with a y-z correlation: T_zy = 2 I_yz - 2 I_x and T_yz = 2 I_yz + 2 I_x.
  RVector b(3);
  b << 0.3, 0.5, 0.4;
  const auto noise = NoiseModel::discrete({{b, 1.0}});
  const FieldConfig field{0.0, 2, 0.8};
  const auto m = qubit_integrals(noise, field);
  const auto t = assemble_qubit_T(m, field.tau);
  EXPECT_NEAR(t.matrix(2, 1), 2 * m.iij(1, 2) - 2 * m.ii[0], 1e-15);
  EXPECT_NEAR(t.matrix(1, 2), 2 * m.iij(1, 2) + 2 * m.ii[0], 1e-15);
}

struct SystemCase {
  const char* name;
  OperatorBasis basis;
  std::vector<std::size_t> idx;
};

std::vector<SystemCase> systems() {
  return {{"qubit", pauli_basis(), {0, 1, 2}},
          {"qutrit", gell_mann_basis(3), {0, 1, 2}},
          {"two_qubit", kronecker_pauli_basis(2), {3, 7, 11}},
          {"n4", generalized_gell_mann_basis(4), {0, 6, 12}}};
}

TEST(General, MatchesDirectAndExpansionOracles) {
  std::mt19937_64 rng(41);
  for (const auto& c : systems()) {
    const auto sub = find_spin_subalgebra(c.basis, c.idx);
    for (int trial = 0; trial < 10; ++trial) {
      const auto noise = random_discrete(rng, 3, 1.0);
      const FieldConfig field{0.5, static_cast<std::size_t>(trial % 3), 0.1 + 0.4 * trial};
      const auto t = general_T(c.basis, sub, noise, field);

      std::vector<double> w;
      const auto us = unitaries(noise, field, c.basis, c.idx, &w);
      EXPECT_LT((t.matrix - oracle::direct_T(c.basis, us, w)).cwiseAbs().maxCoeff(), 1e-12) << c.name;

      std::vector<RVector> fields;
      for (const auto& atom : noise.enumerate()) fields.push_back(field.total_field(atom.b));
      const RMatrix expansion = oracle::expansion_T(c.basis, c.idx, sub.idempotent(), fields, w, field.tau);
      EXPECT_LT((t.matrix - expansion).cwiseAbs().maxCoeff(), 1e-12) << c.name;
    }
  }
}

TEST(General, QutritDephasingFrozen) {
  // Telegraph along l3: the l1/l2 block decays as cos(2 b tau), the l4..l7
  // couplings to level 3 as cos(b tau); l3 and l8 are conserved.
  const double b = 0.9, tau = 0.7;
  const auto basis = gell_mann_basis(3);
  const auto t = general_T(basis, find_spin_subalgebra(basis, {0, 1, 2}), NoiseModel::telegraph(b, 2),
                           FieldConfig{0.0, 2, tau});
  RMatrix expected = RMatrix::Zero(8, 8);
  expected.diagonal() << std::cos(2 * b * tau), std::cos(2 * b * tau), 1, std::cos(b * tau),
      std::cos(b * tau), std::cos(b * tau), std::cos(b * tau), 1;
  EXPECT_LT((t.matrix - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(General, TwoQubitSpectatorBlockIsIdentity) {
  std::mt19937_64 rng(8);
  const auto basis = kronecker_pauli_basis(2);
  const auto t = general_T(basis, find_spin_subalgebra(basis, {3, 7, 11}), random_discrete(rng, 4, 1.0),
                           FieldConfig{0.2, 2, 0.6});
  // I x sigma_{x,y,z} at indices 0..2 do not move.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 15; ++j) {
      EXPECT_NEAR(t.matrix(i, j), i == j ? 1.0 : 0.0, 1e-12);
      EXPECT_NEAR(t.matrix(j, i), i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(General, CollinearNoiseConservesTheAxis) {
  for (const auto& c : systems()) {
    const auto sub = find_spin_subalgebra(c.basis, c.idx);
    for (std::size_t axis = 0; axis < 3; ++axis) {
      const auto t = general_T(c.basis, sub, NoiseModel::telegraph(0.8, axis), FieldConfig{0.6, axis, 0.9});
      const Eigen::Index k = static_cast<Eigen::Index>(c.idx[axis]);
      for (Eigen::Index j = 0; j < t.matrix.cols(); ++j) EXPECT_NEAR(t.matrix(k, j), j == k ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(General, ContractionAndSpectralRadius) {
  std::mt19937_64 rng(99);
  for (const auto& c : systems()) {
    const auto sub = find_spin_subalgebra(c.basis, c.idx);
    for (int trial = 0; trial < 10; ++trial) {
      const auto t = diagonalize(general_T(c.basis, sub, random_discrete(rng, 4, 2.0), FieldConfig{0.3, 1, 1.3}));
      EXPECT_LE(spectral_radius(t.matrix), 1.0 + 1e-10);
      Eigen::JacobiSVD<RMatrix> svd(t.matrix);
      EXPECT_LE(svd.singularValues()[0], 1.0 + 1e-12) << c.name;
    }
  }
}

TEST(General, HeisenbergIsTheTranspose) {
  // <O>(tau) = Tr(O rho(tau)) computed in both pictures.
  std::mt19937_64 rng(4);
  const auto basis = gell_mann_basis(3);
  const auto t = general_T(basis, find_spin_subalgebra(basis, {0, 1, 2}), random_discrete(rng, 3, 1.0),
                           FieldConfig{0.4, 2, 0.7});
  const RVector rho = decompose(oracle::random_density(rng, 3), basis).coeffs;
  const RVector obs = RVector::Random(8);
  EXPECT_NEAR(obs.dot(t.matrix * rho), (t.heisenberg() * obs).dot(rho), 1e-14);
}

TEST(Evolve, ExactAgainstBruteForceSequences) {
  std::mt19937_64 rng(61);
  for (const auto& c : systems()) {
    const auto sub = find_spin_subalgebra(c.basis, c.idx);
    const auto noise = random_discrete(rng, 3, 1.0);
    const FieldConfig field{0.4, 2, 0.6};
    const auto t = diagonalize(general_T(c.basis, sub, noise, field));
    const CMatrix rho0 = oracle::random_density(rng, c.basis.dim());
    const auto state0 = decompose(rho0, c.basis);
    const auto states = evolve(t, state0, 5);
    ASSERT_EQ(states.size(), 6u);
    std::vector<double> w;
    const auto us = unitaries(noise, field, c.basis, c.idx, &w);
    const auto enumerated = exact_enumeration(noise, field, sub, c.basis, state0, 5);
    for (std::size_t m = 0; m <= 5; ++m) {
      const RVector ref = project(oracle::brute_force_rho(rho0, us, w, m), c.basis);
      EXPECT_LT((states[m].coeffs - ref).cwiseAbs().maxCoeff(), 1e-10) << c.name << " m=" << m;
      EXPECT_LT((enumerated[m] - ref).cwiseAbs().maxCoeff(), 1e-10) << c.name << " m=" << m;
    }
  }
}

TEST(Evolve, ZeroStepsReturnsInitialState) {
  const auto basis = pauli_basis();
  const auto t = general_T(basis, find_spin_subalgebra(basis, {0, 1, 2}), NoiseModel::telegraph(1.0, 2),
                           FieldConfig{0.0, 2, 0.3});
  DensityState s{basis, RVector::Zero(3)};
  s.coeffs << 0.5, 0.0, 0.0;
  const auto states = evolve(t, s, 0);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0].coeffs, s.coeffs);
}

TEST(Evolve, SpectralMatchesIterated) {
  std::mt19937_64 rng(13);
  for (const auto& c : systems()) {
    const auto sub = find_spin_subalgebra(c.basis, c.idx);
    const auto t = diagonalize(general_T(c.basis, sub, random_discrete(rng, 3, 1.0), FieldConfig{0.2, 0, 0.8}));
    ASSERT_TRUE(t.spectral && t.spectral->diagonalizable) << c.name;
    const RVector v0 = decompose(oracle::random_density(rng, c.basis.dim()), c.basis).coeffs;
    const auto a = evolve_iterated(t.matrix, v0, 50);
    const auto b = evolve_spectral(*t.spectral, v0, 50);
    for (std::size_t m = 0; m <= 50; ++m) EXPECT_LT((a[m] - b[m]).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Evolve, DefectiveMatrixFallsBackToIteration) {
  TransferMatrix t;
  t.matrix = RMatrix::Zero(3, 3);
  t.matrix << 0.5, 1.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0;  // Jordan block
  t.tau = 1.0;
  t.basis = pauli_basis().descriptor();
  t = diagonalize(t);
  ASSERT_TRUE(t.spectral);
  EXPECT_FALSE(t.spectral->diagonalizable);
  DensityState s{pauli_basis(), RVector::Zero(3)};
  s.coeffs << 0.0, 0.4, 0.1;
  const auto states = evolve(t, s, 3);
  const auto ref = evolve_iterated(t.matrix, s.coeffs, 3);
  for (std::size_t m = 0; m <= 3; ++m) EXPECT_EQ(states[m].coeffs, ref[m]);
}

TEST(Evolve, BasisMismatchRejected) {
  const auto basis = pauli_basis();
  const auto t = general_T(basis, find_spin_subalgebra(basis, {0, 1, 2}), NoiseModel::telegraph(1.0, 2),
                           FieldConfig{0.0, 2, 0.3});
  DensityState wrong{gell_mann_basis(3), RVector::Zero(8)};
  try {
    evolve(t, wrong, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Rates, DephasingRates) {
  const double b = 0.5, tau = 0.4;
  const auto basis = pauli_basis();
  const auto t = diagonalize(general_T(basis, find_spin_subalgebra(basis, {0, 1, 2}),
                                       NoiseModel::telegraph(b, 2), FieldConfig{0.0, 2, tau}));
  int conserved = 0, decaying = 0;
  for (const auto& r : decoherence_rates(t)) {
    if (r.rate == 0.0) {
      ++conserved;
    } else {
      ++decaying;
      EXPECT_NEAR(r.rate, -std::log(std::cos(2 * b * tau)) / tau, 1e-12);
    }
  }
  EXPECT_EQ(conserved, 1);
  EXPECT_EQ(decaying, 2);
}

TEST(Rates, ZeroEigenvalueIsInfinite) {
  // b tau = pi/4 gives cos(2 b tau) = 0 up to roundoff; force an exact zero.
  TransferMatrix t;
  t.matrix = RMatrix::Identity(3, 3);
  t.matrix(0, 0) = 0.0;
  t.tau = 1.0;
  const auto rates = decoherence_rates(t);
  EXPECT_TRUE(std::isinf(rates[0].rate));
}

TEST(MonteCarloT, GaussianDephasingClosedForm) {
  // b_z ~ N(0, s^2): E[cos 2 b tau] = exp(-2 s^2 tau^2).
  const double s = 0.6, tau = 0.9;
  RVector sigma(3);
  sigma << 0.0, 0.0, s;
  const auto basis = pauli_basis();
  const auto t = general_T(basis, find_spin_subalgebra(basis, {0, 1, 2}), NoiseModel::gaussian(sigma),
                           FieldConfig{0.0, 2, tau}, AveragingOptions{200000, 5, 0});
  ASSERT_TRUE(t.standard_error);
  EXPECT_EQ(t.method, BuildMethod::MonteCarloAverage);
  const double expected = std::exp(-2 * s * s * tau * tau);
  EXPECT_LE(std::abs(t.matrix(0, 0) - expected), 6 * (*t.standard_error)(0, 0));
  EXPECT_LE(std::abs(t.matrix(1, 1) - expected), 6 * (*t.standard_error)(1, 1));
  EXPECT_NEAR(t.matrix(2, 2), 1.0, 1e-12);
}

TEST(MonteCarloT, SampleSizesAgreeWithinBands) {
  const auto basis = gell_mann_basis(3);
  const auto sub = find_spin_subalgebra(basis, {0, 1, 2});
  const auto noise = NoiseModel::gaussian_isotropic(0.5);
  const FieldConfig field{0.7, 2, 0.6};
  const auto small = general_T(basis, sub, noise, field, AveragingOptions{20000, 1, 0});
  const auto large = general_T(basis, sub, noise, field, AveragingOptions{80000, 2, 0});
  const RMatrix band = 6.0 * (small.standard_error->array().square() + large.standard_error->array().square())
                                 .sqrt()
                                 .matrix();
  const RMatrix diff = (small.matrix - large.matrix).cwiseAbs();
  for (Eigen::Index i = 0; i < diff.size(); ++i) EXPECT_LE(diff(i), band(i) + 1e-12) << i;
  // Standard errors shrink roughly as 1/sqrt(n).
  EXPECT_NEAR(small.standard_error->maxCoeff() / large.standard_error->maxCoeff(), 2.0, 0.3);
}

TEST(MonteCarloT, SerialAndParallelAreBitIdentical) {
  const auto basis = kronecker_pauli_basis(2);
  const auto sub = find_spin_subalgebra(basis, {3, 7, 11});
  const auto noise = NoiseModel::uniform_sphere(0.8);
  const FieldConfig field{0.3, 2, 0.5};
  const AveragingOptions one{3000, 77, 1};
  const AveragingOptions four{3000, 77, 4};
  const auto serial = general_T_serial(basis, sub, noise, field, one);
  const auto p1 = general_T(basis, sub, noise, field, one);
  const auto p4 = general_T(basis, sub, noise, field, four);
  EXPECT_EQ(p1.matrix, p4.matrix);
  EXPECT_EQ(*p1.standard_error, *p4.standard_error);
  EXPECT_LT((serial.matrix - p1.matrix).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(General, Preconditions) {
  const auto basis = gell_mann_basis(3);
  const auto sub = find_spin_subalgebra(basis, {0, 1, 2});
  try {
    general_T(basis, SpinSubalgebra::unchecked(basis, {0, 1, 2}), NoiseModel::telegraph(1, 2), FieldConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnverifiedSubalgebra);
  }
  try {
    general_T(pauli_basis(), sub, NoiseModel::telegraph(1, 2), FieldConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(general_T(basis, sub, NoiseModel::telegraph(1, 1, 2), FieldConfig{0.0, 1, 1.0}), Error);
}

}  // namespace
}  // namespace qtransfer
