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
#include <cstdint>
#include <string>
#include <vector>

#include "qtransfer/operator_algebra.hpp"

namespace qtransfer {

enum class NoiseKind { Discrete, GaussianIsotropic, UniformSphere, UniformAxis };

std::string to_string(NoiseKind kind);

struct NoiseAtom {
  RVector b;
  double p = 0.0;
};

/// Distribution of the per-interval noise vector b. Draws for different
/// intervals are independent and identically distributed.
class NoiseModel {
 public:
  /// +-amplitude along one axis with probability 1/2 each.
  static NoiseModel telegraph(double amplitude, std::size_t axis, std::size_t n_components = 3);
  /// Finite support; probabilities must be positive and sum to 1.
  static NoiseModel discrete(std::vector<NoiseAtom> atoms);
  /// Independent normal components with the given standard deviations.
  static NoiseModel gaussian(RVector sigma);
  static NoiseModel gaussian_isotropic(double sigma, std::size_t n_components = 3);
  /// Direction uniform on the sphere, fixed magnitude.
  static NoiseModel uniform_sphere(double radius, std::size_t n_components = 3);
  /// Amplitude uniform on [-amplitude, amplitude] along one axis.
  static NoiseModel uniform_axis(double amplitude, std::size_t axis, std::size_t n_components = 3);

  NoiseKind kind() const noexcept { return kind_; }
  std::size_t n_components() const noexcept { return n_components_; }
  bool enumerable() const noexcept { return kind_ == NoiseKind::Discrete; }

  const std::vector<NoiseAtom>& atoms() const noexcept { return atoms_; }
  const RVector& sigma() const noexcept { return sigma_; }
  double radius() const noexcept { return amplitude_; }
  double amplitude() const noexcept { return amplitude_; }
  std::size_t axis() const noexcept { return axis_; }

  /// Draw number `index` of the stream identified by `seed`. Pure function of
  /// its arguments.
  RVector sample(std::uint64_t seed, std::uint64_t index) const;

  /// Exact support with probabilities, in declaration order. Throws
  /// NotEnumerable for continuous laws.
  const std::vector<NoiseAtom>& enumerate() const;

  friend bool operator==(const NoiseModel& a, const NoiseModel& b);

 private:
  NoiseModel() = default;

  NoiseKind kind_ = NoiseKind::Discrete;
  std::size_t n_components_ = 0;
  std::vector<NoiseAtom> atoms_;
  std::vector<double> cumulative_;
  RVector sigma_;
  double amplitude_ = 0.0;
  std::size_t axis_ = 0;
};

}  // namespace qtransfer
