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
#include "qtransfer/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtransfer/errors.hpp"
#include "qtransfer/philox.hpp"

namespace qtransfer {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Discrete: return "discrete";
    case NoiseKind::GaussianIsotropic: return "gaussian";
    case NoiseKind::UniformSphere: return "uniform_sphere";
    case NoiseKind::UniformAxis: return "uniform_axis";
  }
  return "unknown";
}

NoiseModel NoiseModel::telegraph(double amplitude, std::size_t axis, std::size_t n_components) {
  if (axis >= n_components) throw Error(ErrorCode::InvalidArgument, "telegraph axis out of range");
  RVector up = RVector::Zero(static_cast<Eigen::Index>(n_components));
  up[static_cast<Eigen::Index>(axis)] = amplitude;
  return discrete({{up, 0.5}, {-up, 0.5}});
}

NoiseModel NoiseModel::discrete(std::vector<NoiseAtom> atoms) {
  if (atoms.empty()) throw Error(ErrorCode::InvalidArgument, "discrete noise needs atoms");
  const auto n = static_cast<std::size_t>(atoms.front().b.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "noise vectors must be non-empty");
  NoiseModel model;
  model.kind_ = NoiseKind::Discrete;
  model.n_components_ = n;
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (static_cast<std::size_t>(atom.b.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "noise atoms have inconsistent lengths");
    if (!(atom.p > 0.0)) throw Error(ErrorCode::InvalidArgument, "atom probabilities must be > 0");
    if (!atom.b.allFinite()) throw Error(ErrorCode::InvalidArgument, "atom vector not finite");
    total += atom.p;
    model.cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > kTolerances.probability_sum)
    throw Error(ErrorCode::InvalidArgument,
                "atom probabilities sum to " + std::to_string(total) + ", not 1");
  model.atoms_ = std::move(atoms);
  return model;
}

NoiseModel NoiseModel::gaussian(RVector sigma) {
  if (sigma.size() == 0) throw Error(ErrorCode::InvalidArgument, "sigma must be non-empty");
  if (!((sigma.array() >= 0.0).all()) || !sigma.allFinite())
    throw Error(ErrorCode::InvalidArgument, "sigma entries must be finite and >= 0");
  NoiseModel model;
  model.kind_ = NoiseKind::GaussianIsotropic;
  model.n_components_ = static_cast<std::size_t>(sigma.size());
  model.sigma_ = std::move(sigma);
  return model;
}

NoiseModel NoiseModel::gaussian_isotropic(double sigma, std::size_t n_components) {
  return gaussian(RVector::Constant(static_cast<Eigen::Index>(n_components), sigma));
}

NoiseModel NoiseModel::uniform_sphere(double radius, std::size_t n_components) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidArgument, "radius must be finite and >= 0");
  if (n_components == 0) throw Error(ErrorCode::InvalidArgument, "need at least one component");
  NoiseModel model;
  model.kind_ = NoiseKind::UniformSphere;
  model.n_components_ = n_components;
  model.amplitude_ = radius;
  return model;
}

NoiseModel NoiseModel::uniform_axis(double amplitude, std::size_t axis, std::size_t n_components) {
  if (axis >= n_components) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw Error(ErrorCode::InvalidArgument, "amplitude must be finite and >= 0");
  NoiseModel model;
  model.kind_ = NoiseKind::UniformAxis;
  model.n_components_ = n_components;
  model.amplitude_ = amplitude;
  model.axis_ = axis;
  return model;
}

RVector NoiseModel::sample(std::uint64_t seed, std::uint64_t index) const {
  CounterStream stream(seed, index);
  const auto n = static_cast<Eigen::Index>(n_components_);
  switch (kind_) {
    case NoiseKind::Discrete: {
      const double u = stream.uniform();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto pick = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
      return atoms_[pick].b;
    }
    case NoiseKind::GaussianIsotropic: {
      RVector b(n);
      for (Eigen::Index i = 0; i < n; ++i) b[i] = sigma_[i] * stream.normal();
      return b;
    }
    case NoiseKind::UniformSphere: {
      RVector direction(n);
      double norm = 0.0;
      do {
        for (Eigen::Index i = 0; i < n; ++i) direction[i] = stream.normal();
        norm = direction.norm();
      } while (norm < 1e-300);
      return (amplitude_ / norm) * direction;
    }
    case NoiseKind::UniformAxis: {
      RVector b = RVector::Zero(n);
      b[static_cast<Eigen::Index>(axis_)] = amplitude_ * (2.0 * stream.uniform() - 1.0);
      return b;
    }
  }
  return RVector::Zero(n);
}

const std::vector<NoiseAtom>& NoiseModel::enumerate() const {
  if (kind_ != NoiseKind::Discrete)
    throw Error(ErrorCode::NotEnumerable, to_string(kind_) + " noise has continuous support");
  return atoms_;
}

bool operator==(const NoiseModel& a, const NoiseModel& b) {
  if (a.kind_ != b.kind_ || a.n_components_ != b.n_components_) return false;
  switch (a.kind_) {
    case NoiseKind::Discrete:
      if (a.atoms_.size() != b.atoms_.size()) return false;
      for (std::size_t i = 0; i < a.atoms_.size(); ++i)
        if (a.atoms_[i].p != b.atoms_[i].p || a.atoms_[i].b != b.atoms_[i].b) return false;
      return true;
    case NoiseKind::GaussianIsotropic: return a.sigma_ == b.sigma_;
    case NoiseKind::UniformSphere: return a.amplitude_ == b.amplitude_;
    case NoiseKind::UniformAxis: return a.amplitude_ == b.amplitude_ && a.axis_ == b.axis_;
  }
  return false;
}

}  // namespace qtransfer
