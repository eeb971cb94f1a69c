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
#include "qtransfer/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qtransfer/errors.hpp"
#include "qtransfer/parallel.hpp"
#include "qtransfer/statistics.hpp"

namespace qtransfer {
namespace {

using cd = std::complex<double>;

// cos^2, B^ sin cos, B^B^ sin^2 flattened into 13 entries.
Eigen::Matrix<double, 13, 1> moment_sample(const RVector& b_total, double tau) {
  Eigen::Matrix<double, 13, 1> out = Eigen::Matrix<double, 13, 1>::Zero();
  const double magnitude = b_total.norm();
  const double angle = magnitude * tau;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  out[0] = c * c;
  if (magnitude == 0.0) return out;
  const Eigen::Vector3d unit = b_total / magnitude;
  out.segment<3>(1) = unit * (s * c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[4 + 3 * i + j] = unit[i] * unit[j] * s * s;
  return out;
}

MomentIntegrals unpack_moments(const Eigen::Matrix<double, 13, 1>& v) {
  MomentIntegrals m;
  m.i0 = v[0];
  m.ii = v.segment<3>(1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.iij(i, j) = v[4 + 3 * i + j];
  return m;
}

struct WeightedSum {
  RMatrix sum;
  double max_imag = 0.0;
};

struct SampledSum {
  RunningMoments moments;
  double max_imag = 0.0;
};

void check_inputs(const OperatorBasis& basis, const SpinSubalgebra& sub, const NoiseModel& noise,
                  const FieldConfig& field) {
  if (!sub.verified()) throw Error(ErrorCode::UnverifiedSubalgebra, "subalgebra not verified");
  if (!(sub.basis() == basis))
    throw Error(ErrorCode::DimensionMismatch, "subalgebra belongs to a different basis");
  if (noise.n_components() != sub.size())
    throw Error(ErrorCode::DimensionMismatch,
                "noise has " + std::to_string(noise.n_components()) +
                    " components, subalgebra has " + std::to_string(sub.size()));
  field.validate(sub.size());
}

TransferMatrix finish(const OperatorBasis& basis, RMatrix matrix, double max_imag,
                      const FieldConfig& field, const Tolerances& tol) {
  if (max_imag > tol.transfer_imag)
    throw Error(ErrorCode::InvalidArgument,
                "transfer matrix imaginary residue " + std::to_string(max_imag));
  TransferMatrix t;
  t.matrix = std::move(matrix);
  t.tau = field.tau;
  t.basis = basis.descriptor();
  return t;
}

RMatrix unflatten(const Eigen::ArrayXd& flat, Eigen::Index d) {
  return Eigen::Map<const RMatrix>(flat.data(), d, d);
}

}  // namespace

MomentIntegrals qubit_integrals(const NoiseModel& noise, const FieldConfig& field,
                                const AveragingOptions& options) {
  if (noise.n_components() != 3)
    throw Error(ErrorCode::DimensionMismatch, "qubit integrals need 3-component noise");
  field.validate(3);
  using Vec13 = Eigen::Matrix<double, 13, 1>;
  if (noise.enumerable()) {
    Vec13 acc = Vec13::Zero();
    for (const auto& atom : noise.enumerate())
      acc += atom.p * moment_sample(field.total_field(atom.b), field.tau);
    MomentIntegrals m = unpack_moments(acc);
    m.method = BuildMethod::ExactEnumeration;
    return m;
  }
  if (options.samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  const RunningMoments stats = chunked_reduce(
      options.samples, options.workers, RunningMoments(13),
      [&](std::size_t begin, std::size_t end) {
        RunningMoments local(13);
        for (std::size_t i = begin; i < end; ++i)
          local.add(moment_sample(field.total_field(noise.sample(options.seed, i)), field.tau)
                        .array());
        return local;
      },
      [](RunningMoments& total, const RunningMoments& part) { total.merge(part); });
  MomentIntegrals m = unpack_moments(stats.mean().matrix());
  m.method = BuildMethod::MonteCarloAverage;
  m.n_samples = options.samples;
  return m;
}

TransferMatrix assemble_qubit_T(const MomentIntegrals& m, double tau) {
  const auto& I = m.iij;
  const auto& v = m.ii;
  RMatrix t(3, 3);
  t(0, 0) = m.i0 + I(0, 0) - I(1, 1) - I(2, 2);
  t(1, 1) = m.i0 - I(0, 0) + I(1, 1) - I(2, 2);
  t(2, 2) = m.i0 - I(0, 0) - I(1, 1) + I(2, 2);
  t(0, 1) = 2.0 * I(0, 1) + 2.0 * v[2];
  t(1, 0) = 2.0 * I(0, 1) - 2.0 * v[2];
  t(0, 2) = 2.0 * I(0, 2) - 2.0 * v[1];
  t(2, 0) = 2.0 * I(0, 2) + 2.0 * v[1];
  t(1, 2) = 2.0 * I(1, 2) + 2.0 * v[0];
  t(2, 1) = 2.0 * I(1, 2) - 2.0 * v[0];
  TransferMatrix out;
  out.matrix = std::move(t);
  out.tau = tau;
  out.method = m.method;
  out.n_samples = m.n_samples;
  out.basis = BasisDescriptor{BasisKind::Pauli, 2, "standard"};
  return out;
}

RMatrix conjugation_map(const OperatorBasis& basis, const CMatrix& u, double* max_imag) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  RMatrix t(d, d);
  double worst = 0.0;
  const CMatrix u_dag = u.adjoint();
  for (Eigen::Index b = 0; b < d; ++b) {
    const CMatrix moved = u * basis.element(static_cast<std::size_t>(b)) * u_dag;
    for (Eigen::Index c = 0; c < d; ++c) {
      const cd tr =
          basis.element(static_cast<std::size_t>(c)).transpose().cwiseProduct(moved).sum();
      t(c, b) = tr.real() / basis.ortho_const();
      worst = std::max(worst, std::abs(tr.imag()) / basis.ortho_const());
    }
  }
  if (max_imag) *max_imag = std::max(*max_imag, worst);
  return t;
}

TransferMatrix general_T(const OperatorBasis& basis, const SpinSubalgebra& sub,
                         const NoiseModel& noise, const FieldConfig& field,
                         const AveragingOptions& options, const Tolerances& tol) {
  check_inputs(basis, sub, noise, field);
  const auto d = static_cast<Eigen::Index>(basis.size());
  auto map_for = [&](const RVector& b, double* imag) {
    return conjugation_map(basis, subalgebra_propagator(field.total_field(b), field.tau, sub).matrix,
                           imag);
  };

  if (noise.enumerable()) {
    const auto& atoms = noise.enumerate();
    WeightedSum total = chunked_reduce(
        atoms.size(), options.workers, WeightedSum{RMatrix::Zero(d, d), 0.0},
        [&](std::size_t begin, std::size_t end) {
          WeightedSum local{RMatrix::Zero(d, d), 0.0};
          for (std::size_t i = begin; i < end; ++i)
            local.sum += atoms[i].p * map_for(atoms[i].b, &local.max_imag);
          return local;
        },
        [](WeightedSum& acc, const WeightedSum& part) {
          acc.sum += part.sum;
          acc.max_imag = std::max(acc.max_imag, part.max_imag);
        });
    TransferMatrix t = finish(basis, std::move(total.sum), total.max_imag, field, tol);
    t.method = BuildMethod::ExactEnumeration;
    return t;
  }

  if (options.samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  SampledSum total = chunked_reduce(
      options.samples, options.workers, SampledSum{RunningMoments(d * d), 0.0},
      [&](std::size_t begin, std::size_t end) {
        SampledSum local{RunningMoments(d * d), 0.0};
        for (std::size_t i = begin; i < end; ++i) {
          const RMatrix m = map_for(noise.sample(options.seed, i), &local.max_imag);
          local.moments.add(Eigen::Map<const Eigen::ArrayXd>(m.data(), d * d));
        }
        return local;
      },
      [](SampledSum& acc, const SampledSum& part) {
        acc.moments.merge(part.moments);
        acc.max_imag = std::max(acc.max_imag, part.max_imag);
      });
  TransferMatrix t = finish(basis, unflatten(total.moments.mean(), d), total.max_imag, field, tol);
  t.method = BuildMethod::MonteCarloAverage;
  t.n_samples = options.samples;
  t.seed = options.seed;
  t.standard_error = unflatten(total.moments.standard_error(), d);
  return t;
}

TransferMatrix general_T_serial(const OperatorBasis& basis, const SpinSubalgebra& sub,
                                const NoiseModel& noise, const FieldConfig& field,
                                const AveragingOptions& options, const Tolerances& tol) {
  check_inputs(basis, sub, noise, field);
  const auto d = static_cast<Eigen::Index>(basis.size());
  double max_imag = 0.0;
  auto map_for = [&](const RVector& b) {
    return conjugation_map(basis, subalgebra_propagator(field.total_field(b), field.tau, sub).matrix,
                           &max_imag);
  };
  if (noise.enumerable()) {
    RMatrix sum = RMatrix::Zero(d, d);
    for (const auto& atom : noise.enumerate()) sum += atom.p * map_for(atom.b);
    TransferMatrix t = finish(basis, std::move(sum), max_imag, field, tol);
    t.method = BuildMethod::ExactEnumeration;
    return t;
  }
  if (options.samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  RunningMoments moments(d * d);
  for (std::size_t i = 0; i < options.samples; ++i) {
    const RMatrix m = map_for(noise.sample(options.seed, i));
    moments.add(Eigen::Map<const Eigen::ArrayXd>(m.data(), d * d));
  }
  TransferMatrix t = finish(basis, unflatten(moments.mean(), d), max_imag, field, tol);
  t.method = BuildMethod::MonteCarloAverage;
  t.n_samples = options.samples;
  t.seed = options.seed;
  t.standard_error = unflatten(moments.standard_error(), d);
  return t;
}

double spectral_radius(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<RMatrix> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

TransferMatrix diagonalize(TransferMatrix t, const Tolerances& tol) {
  Spectrum s;
  Eigen::EigenSolver<RMatrix> solver(t.matrix, true);
  if (solver.info() != Eigen::Success) {
    s.diagonalizable = false;
    s.condition = std::numeric_limits<double>::infinity();
    s.eigvals = Eigen::EigenSolver<RMatrix>(t.matrix, false).eigenvalues();
    t.spectral = std::move(s);
    return t;
  }
  s.eigvals = solver.eigenvalues();
  s.r_inv = solver.eigenvectors();
  Eigen::JacobiSVD<CMatrix> svd(s.r_inv);
  const auto& sv = svd.singularValues();
  const double smallest = sv.size() ? sv[sv.size() - 1] : 1.0;
  s.condition = smallest > 0.0 ? sv[0] / smallest : std::numeric_limits<double>::infinity();
  s.diagonalizable = std::isfinite(s.condition) && s.condition <= tol.condition_limit;
  if (s.diagonalizable) {
    s.r = s.r_inv.partialPivLu().inverse();
    const CMatrix rebuilt = s.r_inv * s.eigvals.asDiagonal() * s.r;
    const double err = max_abs(rebuilt - t.matrix.cast<cd>());
    if (!(err <= tol.spectral_reconstruction)) s.diagonalizable = false;
  }
  t.spectral = std::move(s);
  return t;
}

std::vector<RVector> evolve_iterated(const RMatrix& t, const RVector& v0, std::size_t m) {
  std::vector<RVector> out;
  out.reserve(m + 1);
  out.push_back(v0);
  for (std::size_t k = 0; k < m; ++k) out.push_back(t * out.back());
  return out;
}

std::vector<RVector> evolve_spectral(const Spectrum& s, const RVector& v0, std::size_t m) {
  std::vector<RVector> out;
  out.reserve(m + 1);
  out.push_back(v0);
  const CVector w = s.r * v0.cast<cd>();
  CVector powers = CVector::Ones(s.eigvals.size());
  for (std::size_t k = 1; k <= m; ++k) {
    powers = powers.cwiseProduct(s.eigvals);
    out.push_back((s.r_inv * powers.cwiseProduct(w)).real());
  }
  return out;
}

std::vector<DensityState> evolve(const TransferMatrix& t, const DensityState& state0,
                                 std::size_t m) {
  if (static_cast<std::size_t>(state0.coeffs.size()) != t.dim_basis() ||
      t.matrix.rows() != t.matrix.cols())
    throw Error(ErrorCode::DimensionMismatch, "state and transfer matrix sizes differ");
  if (t.basis && !(*t.basis == state0.basis.descriptor()))
    throw Error(ErrorCode::DimensionMismatch, "state and transfer matrix use different bases");
  const bool spectral = t.spectral && t.spectral->diagonalizable;
  const std::vector<RVector> vectors = spectral ? evolve_spectral(*t.spectral, state0.coeffs, m)
                                                : evolve_iterated(t.matrix, state0.coeffs, m);
  std::vector<DensityState> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(DensityState{state0.basis, v});
  out.front().coeffs = state0.coeffs;
  return out;
}

std::vector<DecoherenceRate> decoherence_rates(const TransferMatrix& t, const Tolerances& tol) {
  const CVector eigvals = t.spectral ? t.spectral->eigvals
                                     : CVector(Eigen::EigenSolver<RMatrix>(t.matrix, false).eigenvalues());
  std::vector<DecoherenceRate> out;
  out.reserve(static_cast<std::size_t>(eigvals.size()));
  for (Eigen::Index j = 0; j < eigvals.size(); ++j) {
    const double modulus = std::abs(eigvals[j]);
    double rate = 0.0;
    if (modulus == 0.0)
      rate = std::numeric_limits<double>::infinity();
    else if (std::abs(modulus - 1.0) > tol.unit_modulus)
      rate = -std::log(modulus) / t.tau;
    out.push_back({eigvals[j], rate});
  }
  return out;
}

}  // namespace qtransfer
