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
#include "qtransfer/monte_carlo_oracle.hpp"

#include <ostream>
#include <string>

#include "qtransfer/errors.hpp"
#include "qtransfer/parallel.hpp"
#include "qtransfer/statistics.hpp"
#include "qtransfer/text_io.hpp"

namespace qtransfer {
namespace {

void check_request(const EnsembleRequest& r) {
  if (r.steps < 1) throw Error(ErrorCode::InvalidArgument, "need at least one step");
  if (r.n_traj < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
  if (!r.sub.verified()) throw Error(ErrorCode::UnverifiedSubalgebra, "subalgebra not verified");
  if (!(r.sub.basis() == r.basis) || !(r.state0.basis == r.basis))
    throw Error(ErrorCode::DimensionMismatch, "basis, subalgebra and state disagree");
  if (r.noise.n_components() != r.sub.size())
    throw Error(ErrorCode::DimensionMismatch, "noise components do not match subalgebra");
  if (static_cast<std::size_t>(r.state0.coeffs.size()) != r.basis.size())
    throw Error(ErrorCode::DimensionMismatch, "initial state size does not match basis");
  r.field.validate(r.sub.size());
}

// All steps of one trajectory laid out step-major in a flat array.
Eigen::ArrayXd trajectory_flat(const EnsembleRequest& r, std::size_t t, const CMatrix& rho0) {
  const auto d = static_cast<Eigen::Index>(r.basis.size());
  Eigen::ArrayXd flat(d * static_cast<Eigen::Index>(r.steps + 1));
  flat.head(d) = r.state0.coeffs.array();
  CMatrix rho = rho0;
  for (std::size_t k = 0; k < r.steps; ++k) {
    const RVector b = r.noise.sample(r.seed, t * r.steps + k);
    const CMatrix u = subalgebra_propagator(r.field.total_field(b), r.field.tau, r.sub).matrix;
    rho = u * rho * u.adjoint();
    flat.segment(d * static_cast<Eigen::Index>(k + 1), d) = project(rho, r.basis).array();
  }
  return flat;
}

EnsembleResult unpack(const RunningMoments& stats, const EnsembleRequest& r) {
  const auto d = static_cast<Eigen::Index>(r.basis.size());
  const Eigen::ArrayXd se = stats.standard_error();
  EnsembleResult out;
  out.n_traj = r.n_traj;
  out.seed = r.seed;
  for (std::size_t k = 0; k <= r.steps; ++k) {
    const auto offset = d * static_cast<Eigen::Index>(k);
    out.mean.push_back(stats.mean().segment(offset, d).matrix());
    out.standard_error.push_back(se.segment(offset, d).matrix());
  }
  return out;
}

}  // namespace

std::vector<RVector> simulate_trajectory(const EnsembleRequest& request, std::size_t trajectory) {
  check_request(request);
  const auto d = static_cast<Eigen::Index>(request.basis.size());
  const Eigen::ArrayXd flat = trajectory_flat(request, trajectory, reconstruct(request.state0));
  std::vector<RVector> out;
  for (std::size_t k = 0; k <= request.steps; ++k)
    out.push_back(flat.segment(d * static_cast<Eigen::Index>(k), d).matrix());
  return out;
}

EnsembleResult run_ensemble(const EnsembleRequest& request, int workers) {
  check_request(request);
  const auto width = static_cast<Eigen::Index>(request.basis.size() * (request.steps + 1));
  const CMatrix rho0 = reconstruct(request.state0);
  const RunningMoments stats = chunked_reduce(
      request.n_traj, workers, RunningMoments(width),
      [&](std::size_t begin, std::size_t end) {
        RunningMoments local(width);
        for (std::size_t t = begin; t < end; ++t) local.add(trajectory_flat(request, t, rho0));
        return local;
      },
      [](RunningMoments& total, const RunningMoments& part) { total.merge(part); });
  return unpack(stats, request);
}

EnsembleResult run_ensemble_serial(const EnsembleRequest& request) {
  check_request(request);
  const auto width = static_cast<Eigen::Index>(request.basis.size() * (request.steps + 1));
  const CMatrix rho0 = reconstruct(request.state0);
  RunningMoments stats(width);
  for (std::size_t t = 0; t < request.n_traj; ++t) stats.add(trajectory_flat(request, t, rho0));
  return unpack(stats, request);
}

std::vector<RVector> exact_enumeration(const NoiseModel& noise, const FieldConfig& field,
                                       const SpinSubalgebra& sub, const OperatorBasis& basis,
                                       const DensityState& state0, std::size_t m,
                                       std::size_t max_sequences) {
  const auto& atoms = noise.enumerate();
  if (!sub.verified()) throw Error(ErrorCode::UnverifiedSubalgebra, "subalgebra not verified");
  if (!(sub.basis() == basis) || !(state0.basis == basis))
    throw Error(ErrorCode::DimensionMismatch, "basis, subalgebra and state disagree");
  if (noise.n_components() != sub.size())
    throw Error(ErrorCode::DimensionMismatch, "noise components do not match subalgebra");
  field.validate(sub.size());

  std::size_t sequences = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (sequences > max_sequences / atoms.size())
      throw Error(ErrorCode::TooManySequences,
                  std::to_string(atoms.size()) + "^" + std::to_string(m) + " exceeds " +
                      std::to_string(max_sequences));
    sequences *= atoms.size();
  }

  std::vector<CMatrix> unitaries;
  for (const auto& atom : atoms)
    unitaries.push_back(subalgebra_propagator(field.total_field(atom.b), field.tau, sub).matrix);

  const int n = basis.dim();
  std::vector<CMatrix> averaged(m + 1, CMatrix::Zero(n, n));
  averaged[0] = reconstruct(state0);

  // Each prefix of length k is visited once, carrying its probability.
  auto descend = [&](auto&& self, const CMatrix& rho, double weight, std::size_t depth) -> void {
    if (depth == m) return;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const CMatrix next = unitaries[a] * rho * unitaries[a].adjoint();
      const double w = weight * atoms[a].p;
      averaged[depth + 1] += w * next;
      self(self, next, w, depth + 1);
    }
  };
  descend(descend, averaged[0], 1.0, 0);

  std::vector<RVector> out;
  out.reserve(m + 1);
  out.push_back(state0.coeffs);
  for (std::size_t k = 1; k <= m; ++k) out.push_back(project(averaged[k], basis));
  return out;
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& result) {
  out << "step,coeff,mean,stderr\n";
  for (std::size_t k = 0; k < result.mean.size(); ++k)
    for (Eigen::Index c = 0; c < result.mean[k].size(); ++c)
      out << k << ',' << c << ',' << format_double(result.mean[k][c]) << ','
          << format_double(result.standard_error[k][c]) << '\n';
}

}  // namespace qtransfer
