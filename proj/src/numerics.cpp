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
#include "qtransfer/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "qtransfer/errors.hpp"

namespace qtransfer {

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int max_order) {
  const std::size_t n = x.size();
  if (n == 0 || max_order < 0) throw Error(ErrorCode::InvalidArgument, "bad stencil");
  const auto orders = static_cast<std::size_t>(max_order);
  std::vector<std::vector<double>> c(orders + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, orders);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::size_t stencil_start(std::size_t i, std::size_t n, std::size_t width) {
  if (n < width) throw Error(ErrorCode::InvalidArgument, "grid shorter than stencil");
  const std::size_t half = width / 2;
  const std::size_t start = i > half ? i - half : 0;
  return std::min(start, n - width);
}

std::vector<double> differentiate(std::span<const double> grid, std::span<const double> f,
                                  int order, std::size_t width) {
  if (grid.size() != f.size()) throw Error(ErrorCode::DimensionMismatch, "grid/value size mismatch");
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t s = stencil_start(i, grid.size(), width);
    const auto w = fd_weights(grid[i], grid.subspan(s, width), order);
    double acc = 0.0;
    for (std::size_t k = 0; k < width; ++k) acc += w[static_cast<std::size_t>(order)][k] * f[s + k];
    out[i] = acc;
  }
  return out;
}

double interpolate_cubic(std::span<const double> grid, std::span<const double> f, std::size_t i,
                         double t) {
  const std::size_t n = grid.size();
  const std::size_t width = std::min<std::size_t>(4, n);
  std::size_t s = i > 0 ? i - 1 : 0;
  s = std::min(s, n - width);
  const auto w = fd_weights(t, grid.subspan(s, width), 0);
  double acc = 0.0;
  for (std::size_t k = 0; k < width; ++k) acc += w[0][k] * f[s + k];
  return acc;
}

std::size_t find_interval(std::span<const double> grid, double t) {
  if (grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "grid needs two points");
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - grid.begin() - 1, 0));
  return std::min(idx, grid.size() - 2);
}

std::vector<double> cumulative_integral(std::span<const double> grid, std::span<const double> f,
                                        Quadrature rule) {
  if (grid.size() != f.size()) throw Error(ErrorCode::DimensionMismatch, "grid/value size mismatch");
  std::vector<double> out(grid.size(), 0.0);
  if (grid.size() < 2) return out;
  if (rule == Quadrature::Cubic && grid.size() < 4) rule = Quadrature::Trapezoid;
  // Two-point Gauss-Legendre is exact for the cubic interpolant.
  const double offset = 0.5 / std::sqrt(3.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    double piece = 0.0;
    if (rule == Quadrature::Trapezoid) {
      piece = 0.5 * (b - a) * (f[i] + f[i + 1]);
    } else {
      const double mid = 0.5 * (a + b);
      const double g1 = interpolate_cubic(grid, f, i, mid - offset * (b - a));
      const double g2 = interpolate_cubic(grid, f, i, mid + offset * (b - a));
      piece = 0.5 * (b - a) * (g1 + g2);
    }
    out[i + 1] = out[i] + piece;
  }
  return out;
}

}  // namespace qtransfer
