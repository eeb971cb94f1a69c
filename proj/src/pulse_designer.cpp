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
#include "qtransfer/pulse_designer.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qtransfer/errors.hpp"
#include "qtransfer/text_io.hpp"

namespace qtransfer {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 5) throw Error(ErrorCode::InvalidArgument, "pulse grid needs >= 5 points");
  if (grid.front() != 0.0) throw Error(ErrorCode::InvalidArgument, "pulse grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "pulse grid must be strictly increasing");
}

void check_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "h must be > 0");
}

template <typename QFn>
SeedFunction analytic_seed(std::string family, double h, std::vector<double> grid, QFn&& fn) {
  check_h(h);
  check_grid(grid);
  SeedFunction seed;
  seed.family = std::move(family);
  seed.h = h;
  seed.method = DerivativeMethod::Analytic;
  for (double t : grid) {
    const auto [q, q1, q2, margin, numerator] = fn(t);
    seed.q.push_back(q);
    seed.q_dot.push_back(q1);
    seed.q_ddot.push_back(q2);
    seed.margin.push_back(margin);
    seed.drive_numerator.push_back(numerator);
  }
  seed.grid = std::move(grid);
  return seed;
}

// h^2 (1 - q^2) - q'^2.
double margin_at(double h, double q, double q_dot) {
  return h * h * (1.0 - q) * (1.0 + q) - q_dot * q_dot;
}

double margin_at(const SeedFunction& seed, std::size_t i) {
  return seed.margin.empty() ? margin_at(seed.h, seed.q[i], seed.q_dot[i]) : seed.margin[i];
}

double drive_numerator_at(const SeedFunction& seed, std::size_t i) {
  return seed.drive_numerator.empty() ? seed.q_ddot[i] + seed.h * seed.h * seed.q[i]
                                      : seed.drive_numerator[i];
}

struct QuarticValues {
  double q, q_dot, q_ddot, margin, numerator;
};

QuarticValues quartic_values(double h, double a, double t) {
  const double c = std::cos(h * t);
  const double s = std::sin(h * t);
  const double half = std::sin(0.5 * h * t);
  const double x = 2.0 * half * half;  // 1 - cos(ht) without cancellation
  const double h2 = h * h;
  return {c + a * x * x, h * s * (2.0 * a * x - 1.0), -h2 * c + 2.0 * a * h2 * (s * s + x * c),
          a * x * x * h2 * (6.0 - (2.0 + 8.0 * a) * x + 3.0 * a * x * x), a * h2 * x * (6.0 - 3.0 * x)};
}

ConditionCheck point_check(double value, double expected, double tolerance) {
  ConditionCheck c;
  c.value = value;
  c.tolerance = tolerance;
  c.pass = std::abs(value - expected) <= tolerance;
  return c;
}

}  // namespace

std::vector<double> uniform_grid(double t_end, std::size_t points) {
  if (!(t_end > 0.0) || points < 2)
    throw Error(ErrorCode::InvalidArgument, "grid needs t_end > 0 and >= 2 points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = t_end * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

SeedFunction cos_squared_seed(double h, std::vector<double> grid) {
  return analytic_seed("cos_squared", h, std::move(grid), [h](double t) {
    const double c = std::cos(h * t);
    const double s = std::sin(h * t);
    const double s2 = s * s;
    return std::tuple{0.5 * (1.0 + c * c), -h * c * s, -h * h * std::cos(2.0 * h * t),
                      0.75 * h * h * s2 * s2, 1.5 * h * h * s2};
  });
}

SeedFunction cos_plus_quartic_seed(double h, double a, std::vector<double> grid) {
  const ParameterRange range = quartic_parameter_range();
  if (!(a > range.lower && a < range.upper)) {
    std::ostringstream msg;
    msg << "a = " << a << " outside admissible range (" << range.lower << ", " << range.upper
        << ")";
    throw Error(ErrorCode::InvalidSeed, msg.str());
  }
  return analytic_seed("cos_plus_quartic", h, std::move(grid), [h, a](double t) {
    const auto v = quartic_values(h, a, t);
    return std::tuple{v.q, v.q_dot, v.q_ddot, v.margin, v.numerator};
  });
}

SeedFunction cosine_seed(double h, std::vector<double> grid) {
  return analytic_seed("cosine", h, std::move(grid), [h](double t) {
    // Saturates the constraint everywhere: both closed forms are zero.
    return std::tuple{std::cos(h * t), -h * std::sin(h * t), -h * h * std::cos(h * t), 0.0, 0.0};
  });
}

SeedFunction sampled_seed(double h, std::vector<double> grid, std::vector<double> q) {
  check_h(h);
  check_grid(grid);
  if (q.size() != grid.size()) throw Error(ErrorCode::DimensionMismatch, "q and grid differ");
  SeedFunction seed;
  seed.family = "sampled";
  seed.h = h;
  seed.method = DerivativeMethod::FiniteDifference;
  seed.q_dot = differentiate(grid, q, 1);
  seed.q_ddot = differentiate(grid, q, 2);
  seed.q = std::move(q);
  seed.grid = std::move(grid);
  return seed;
}

ParameterRange quartic_parameter_range() {
  static const ParameterRange range = [] {
    // Margin scales with h^2 and depends on h t only, so h = 1 suffices.
    auto admissible = [](double a) {
      constexpr int kSamples = 8000;
      for (int i = 1; i < kSamples; ++i) {
        const double t = 2.0 * std::numbers::pi * i / kSamples;
        const auto v = quartic_values(1.0, a, t);
        if (v.margin < 0.0) return false;
      }
      return true;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
    }
    return ParameterRange{0.0, lo};
  }();
  return range;
}

std::string to_string(SeedStatus status) {
  switch (status) {
    case SeedStatus::Valid: return "valid";
    case SeedStatus::Degenerate: return "degenerate";
    case SeedStatus::Invalid: return "invalid";
  }
  return "unknown";
}

SeedValidation validate_seed(const SeedFunction& seed, const PulseOptions& options) {
  check_h(seed.h);
  check_grid(seed.grid);
  const std::size_t n = seed.grid.size();
  if (seed.q.size() != n || seed.q_dot.size() != n || seed.q_ddot.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "seed arrays do not match the grid");
  if ((!seed.margin.empty() && seed.margin.size() != n) ||
      (!seed.drive_numerator.empty() && seed.drive_numerator.size() != n))
    throw Error(ErrorCode::DimensionMismatch, "closed-form margin arrays do not match the grid");

  const double h2 = seed.h * seed.h;
  const bool numeric = seed.method == DerivativeMethod::FiniteDifference;
  SeedValidation report;
  report.slack = options.slack_factor * h2;
  report.q0 = point_check(seed.q[0], 1.0, 1e-10);
  report.q_dot0 = point_check(seed.q_dot[0], 0.0, numeric ? 1e-6 * std::max(1.0, seed.h) : 1e-8);
  report.q_ddot0 = point_check(seed.q_ddot[0], -h2, numeric ? 1e-3 * std::max(1.0, h2) : 1e-6);

  report.constraint.tolerance = report.slack;
  report.constraint.value = std::numeric_limits<double>::infinity();
  report.interior_margin.tolerance = options.slack_factor;
  report.interior_margin.value = std::numeric_limits<double>::infinity();
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = margin_at(seed, i);
    if (!std::isfinite(m) || !std::isfinite(seed.q_ddot[i])) finite = false;
    if (m + report.slack < report.constraint.value) {
      report.constraint.value = m + report.slack;
      report.constraint.index = i;
      report.constraint.t = seed.grid[i];
    }
    // Every admissible seed has margin ~ t^4 near t = 0, so the interior test
    // uses margin / (h^2 min(1, (h t)^4)); it is O(1) unless the constraint
    // saturates.
    const double ht = seed.h * seed.grid[i];
    const double normalized = m / (h2 * std::min(1.0, ht * ht * ht * ht));
    if (i > 0 && normalized < report.interior_margin.value) {
      report.interior_margin.value = normalized;
      report.interior_margin.index = i;
      report.interior_margin.t = seed.grid[i];
    }
  }
  report.constraint.pass = finite && report.constraint.value >= 0.0;
  report.interior_margin.pass = finite && report.interior_margin.value > options.slack_factor;

  auto note = [&](const char* name, const ConditionCheck& c) {
    if (c.pass) return;
    std::ostringstream msg;
    msg << name << " failed: value " << c.value << " at t = " << c.t << " (tolerance "
        << c.tolerance << ")";
    report.messages.push_back(msg.str());
  };
  note("q(0) = 1", report.q0);
  note("q'(0) = 0", report.q_dot0);
  note("q''(0) = -h^2", report.q_ddot0);
  note("q'^2 <= h^2 (1 - q^2)", report.constraint);
  if (!finite) report.messages.push_back("seed contains non-finite values");

  const bool initial_ok = report.q0.pass && report.q_dot0.pass && report.q_ddot0.pass;
  if (!initial_ok || !report.constraint.pass) {
    report.status = SeedStatus::Invalid;
  } else if (!report.interior_margin.pass) {
    report.status = SeedStatus::Degenerate;
    note("normalized margin > slack on t > 0 (J is 0/0 otherwise)", report.interior_margin);
  } else {
    report.status = SeedStatus::Valid;
  }
  return report;
}

PulseProfile derive_pulse(const SeedFunction& seed, const PulseOptions& options) {
  const SeedValidation report = validate_seed(seed, options);
  auto joined = [&] {
    std::string all;
    for (const auto& m : report.messages) all += (all.empty() ? "" : "; ") + m;
    return all;
  };
  if (report.status == SeedStatus::Degenerate) throw Error(ErrorCode::DegenerateSeed, joined());
  if (report.status == SeedStatus::Invalid) throw Error(ErrorCode::InvalidSeed, joined());

  const std::size_t n = seed.grid.size();
  const double h = seed.h;
  PulseProfile p;
  p.seed = seed;
  p.J.resize(n);
  p.phi.resize(n);
  p.F.resize(n);
  p.margin.resize(n);

  double previous_f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = seed.q[i];
    const double q1 = seed.q_dot[i];
    const double m = margin_at(seed, i);
    p.margin[i] = m;
    const double sin2phi = std::sqrt(q * q + q1 * q1 / (h * h));
    if (sin2phi > 1.0 + options.branch_tolerance) {
      std::ostringstream msg;
      msg << "sin(2 Phi) = " << sin2phi << " at t = " << seed.grid[i];
      throw Error(ErrorCode::BranchAmbiguity, msg.str());
    }
    const double cos2phi = std::sqrt(std::max(m, 0.0)) / h;
    p.phi[i] = 0.5 * std::atan2(sin2phi, cos2phi);

    double f = std::atan2(q1 / h, q);
    while (f - previous_f > std::numbers::pi) f -= 2.0 * std::numbers::pi;
    while (f - previous_f < -std::numbers::pi) f += 2.0 * std::numbers::pi;
    p.F[i] = previous_f = f;

    if (i > 0) p.J[i] = drive_numerator_at(seed, i) / std::sqrt(m);
  }
  {
    const std::span<const double> nodes(seed.grid.data() + 1, 3);
    const auto w = fd_weights(seed.grid[0], nodes, 0)[0];
    p.J[0] = w[0] * p.J[1] + w[1] * p.J[2] + w[2] * p.J[3];
  }

  // Near the phase-plane origin (q, q'/h) -> 0, F and K both swing by about
  // pi over a width ~ |s|/h that the grid need not resolve. Their difference
  // G = F - K (the phase of D+) stays smooth, so integrate that instead.
  std::vector<double> g_dot(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = seed.q[i];
    const double q1 = seed.q_dot[i];
    const double s2 = q * q + q1 * q1 / (h * h);
    if (s2 < 1e-24) {
      std::ostringstream msg;
      msg << "grid point t = " << seed.grid[i] << " lies on the phase-plane origin";
      throw Error(ErrorCode::BranchAmbiguity, msg.str());
    }
    const double f_dot = (q * seed.q_ddot[i] - q1 * q1) / (h * s2);
    const double k_dot = p.J[i] * std::cos(p.F[i]) / (2.0 * std::tan(p.phi[i]));
    g_dot[i] = f_dot - k_dot;
  }
  {
    const auto g = cumulative_integral(seed.grid, g_dot, options.quadrature);
    p.K.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.K[i] = p.F[i] - p.F[0] - g[i];
  }

  p.d_plus.resize(n);
  p.d_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = seed.grid[i];
    p.d_plus[i] = std::polar(std::cos(p.phi[i]), p.F[i] - p.K[i] + h * t);
    p.d_minus[i] = std::polar(std::sin(p.phi[i]), -p.K[i]);
  }

  auto all_finite = [](const auto& v) {
    return std::all_of(v.begin(), v.end(), [](const auto& x) { return std::isfinite(std::abs(x)); });
  };
  if (!all_finite(p.J) || !all_finite(p.phi) || !all_finite(p.F) || !all_finite(p.K) ||
      !all_finite(p.d_plus) || !all_finite(p.d_minus))
    throw Error(ErrorCode::DegenerateSeed, "derived pulse contains non-finite values");

  // Integral form sin 2Phi = sec F exp(h int tan F), valid while q > 0.
  std::size_t prefix = 0;
  while (prefix < n && seed.q[prefix] > 0.0) ++prefix;
  if (prefix >= 4) {
    std::vector<double> tan_f(prefix);
    for (std::size_t i = 0; i < prefix; ++i) tan_f[i] = std::tan(p.F[i]);
    const auto integral = cumulative_integral(std::span(seed.grid).first(prefix), tan_f,
                                              options.quadrature);
    for (std::size_t i = 0; i < prefix; ++i) {
      const double lhs = std::sin(2.0 * p.phi[i]);
      const double rhs = std::exp(h * integral[i]) / std::cos(p.F[i]);
      p.integral_form_discrepancy = std::max(p.integral_form_discrepancy, std::abs(lhs - rhs));
    }
    p.integral_form_points = prefix;
  }
  return p;
}

Matrix2c analytic_propagator(const PulseProfile& pulse, std::size_t t_index) {
  const double t = pulse.seed.grid.at(t_index);
  const double h = pulse.seed.h;
  const cd rot_minus = std::polar(1.0, -0.5 * h * t);
  const cd dp = rot_minus * pulse.d_plus[t_index];
  const cd dm = std::conj(rot_minus) * pulse.d_minus[t_index];
  const double r = 1.0 / std::numbers::sqrt2;
  const cd u11 = r * (dp + dm);
  const cd u21 = r * (dp - dm);
  Matrix2c u;
  u << u11, -std::conj(u21), u21, std::conj(u11);
  return u;
}

std::vector<Matrix2c> integrate_propagator(const std::vector<double>& grid,
                                           const std::vector<double>& J, double h,
                                           const IntegratorOptions& options) {
  if (grid.size() != J.size() || grid.size() < 2)
    throw Error(ErrorCode::DimensionMismatch, "grid and J must match and have >= 2 points");
  // Dormand-Prince 5(4) tableau.
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                   -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr double b4[7] = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  Matrix2c sx;
  sx << 0.0, 1.0, 1.0, 0.0;
  Matrix2c sz;
  sz << 1.0, 0.0, 0.0, -1.0;

  std::vector<Matrix2c> out;
  out.reserve(grid.size());
  Matrix2c u = Matrix2c::Identity();
  out.push_back(u);
  double dt = (grid[1] - grid[0]) / 4.0;
  std::size_t steps = 0;

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t_end = grid[i + 1];
    auto rhs = [&](double t, const Matrix2c& y) -> Matrix2c {
      const double j = interpolate_cubic(grid, J, i, t);
      return (-kI) * ((0.5 * j) * sz + (0.5 * h) * sx) * y;
    };
    double t = grid[i];
    const double span = t_end - t;
    while (t < t_end) {
      if (t + dt > t_end) dt = t_end - t;
      Matrix2c k[7];
      k[0] = rhs(t, u);
      for (int s = 1; s < 7; ++s) {
        Matrix2c y = u;
        for (int r = 0; r < s; ++r)
          if (a[s][r] != 0.0) y += (dt * a[s][r]) * k[r];
        k[s] = rhs(t + c[s] * dt, y);
      }
      Matrix2c next = u;
      Matrix2c err = Matrix2c::Zero();
      for (int s = 0; s < 7; ++s) {
        next += (dt * b5[s]) * k[s];
        err += (dt * (b5[s] - b4[s])) * k[s];
      }
      const double scale =
          options.atol + options.rtol * std::max(u.cwiseAbs().maxCoeff(), next.cwiseAbs().maxCoeff());
      const double ratio = err.cwiseAbs().maxCoeff() / scale;
      if (ratio <= 1.0) {
        t = (t + dt >= t_end || t_end - (t + dt) < 1e-15 * span) ? t_end : t + dt;
        u = next;
      }
      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      dt *= factor;
      if (++steps > options.max_steps)
        throw Error(ErrorCode::IntegratorFailure, "step budget exhausted");
      if (t < t_end && dt < 1e-14 * span)
        throw Error(ErrorCode::IntegratorFailure,
                    "step size collapsed near t = " + format_double(t));
    }
    out.push_back(u);
  }
  return out;
}

PulseVerification verify_pulse(const PulseProfile& pulse, const IntegratorOptions& options) {
  const auto& grid = pulse.seed.grid;
  const double h = pulse.seed.h;
  const std::size_t n = grid.size();
  PulseVerification v;

  for (double j : pulse.J) v.max_abs_J = std::max(v.max_abs_J, std::abs(j));
  v.residual_tolerance = 1e-6 * v.max_abs_J;

  const auto ode = integrate_propagator(grid, pulse.J, h, options);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix2c ua = analytic_propagator(pulse, i);
    const double err = (ode[i] - ua).cwiseAbs().maxCoeff();
    if (err > v.max_propagator_error) {
      v.max_propagator_error = err;
      v.propagator_worst_index = i;
    }
    v.max_analytic_unitarity_error =
        std::max(v.max_analytic_unitarity_error,
                 (ua.adjoint() * ua - Matrix2c::Identity()).cwiseAbs().maxCoeff());
    v.max_analytic_det_error = std::max(v.max_analytic_det_error, std::abs(ua.determinant() - 1.0));
    v.max_ode_unitarity_error =
        std::max(v.max_ode_unitarity_error,
                 (ode[i].adjoint() * ode[i] - Matrix2c::Identity()).cwiseAbs().maxCoeff());
    v.max_ansatz_norm_error =
        std::max(v.max_ansatz_norm_error,
                 std::abs(std::norm(pulse.d_plus[i]) + std::norm(pulse.d_minus[i]) - 1.0));
  }

  auto derivative = [&](const std::vector<cd>& d) {
    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = d[i].real();
      im[i] = d[i].imag();
    }
    const auto dre = differentiate(grid, re, 1);
    const auto dim = differentiate(grid, im, 1);
    std::vector<cd> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {dre[i], dim[i]};
    return out;
  };
  const auto dp_dot = derivative(pulse.d_plus);
  const auto dm_dot = derivative(pulse.d_minus);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid[i];
    const cd half_j = 0.5 * pulse.J[i];
    const cd rp = dp_dot[i] + kI * half_j * std::polar(1.0, h * t) * pulse.d_minus[i];
    const cd rm = dm_dot[i] + kI * half_j * std::polar(1.0, -h * t) * pulse.d_plus[i];
    const double r = std::max(std::abs(rp), std::abs(rm));
    if (r > v.max_first_order_residual) {
      v.max_first_order_residual = r;
      v.residual_worst_index = i;
    }
  }

  v.pass = v.max_propagator_error <= v.propagator_tolerance &&
           v.max_first_order_residual <= v.residual_tolerance &&
           v.max_ansatz_norm_error <= v.unitarity_tolerance &&
           v.max_analytic_unitarity_error <= v.unitarity_tolerance &&
           v.max_analytic_det_error <= v.unitarity_tolerance &&
           v.max_ode_unitarity_error <= v.unitarity_tolerance;
  return v;
}

void write_pulse_csv(std::ostream& out, const PulseProfile& p) {
  out << "t,q,J,Phi,F,K,Re_Dplus,Im_Dplus,Re_Dminus,Im_Dminus,margin\n";
  for (std::size_t i = 0; i < p.seed.grid.size(); ++i) {
    const double row[] = {p.seed.grid[i],      p.seed.q[i],         p.J[i],
                          p.phi[i],            p.F[i],              p.K[i],
                          p.d_plus[i].real(),  p.d_plus[i].imag(),  p.d_minus[i].real(),
                          p.d_minus[i].imag(), p.margin[i]};
    for (std::size_t c = 0; c < std::size(row); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

}  // namespace qtransfer
