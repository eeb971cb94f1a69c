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
#include <span>
#include <vector>

namespace qtransfer {

/// Finite-difference weights (Fornberg's recursion) for derivatives of
/// order 0..max_order at z from samples at nodes x. Result is indexed
/// [order][node]. Order 0 gives Lagrange interpolation/extrapolation weights.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int max_order);

/// Start index of a window of `width` consecutive nodes centred on node i,
/// clamped to [0, n - width].
std::size_t stencil_start(std::size_t i, std::size_t n, std::size_t width);

/// Derivative of the given order at every grid node from a `width`-point
/// stencil (centred in the interior, one-sided near the ends).
std::vector<double> differentiate(std::span<const double> grid, std::span<const double> f,
                                  int order, std::size_t width = 5);

/// Cubic through the four nodes around interval [grid[i], grid[i+1]],
/// evaluated at t.
double interpolate_cubic(std::span<const double> grid, std::span<const double> f, std::size_t i,
                         double t);

/// Locates the interval containing t (last interval for t beyond the end).
std::size_t find_interval(std::span<const double> grid, double t);

enum class Quadrature { Trapezoid, Cubic };

/// Running integral F[i] = int_{grid[0]}^{grid[i]} f, F[0] = 0. The cubic rule
/// integrates the local four-point interpolant exactly (fourth order).
std::vector<double> cumulative_integral(std::span<const double> grid, std::span<const double> f,
                                        Quadrature rule = Quadrature::Cubic);

}  // namespace qtransfer
