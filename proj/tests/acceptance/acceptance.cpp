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
// Acceptance gate: one PASS/FAIL line per criterion. Every tolerance,
// draw count and runtime budget is pinned below; the process exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qtransfer/errors.hpp"
#include "qtransfer/monte_carlo_oracle.hpp"
#include "qtransfer/pulse_designer.hpp"
#include "qtransfer/text_io.hpp"
#include "qtransfer/transfer_matrix.hpp"
#include "qtransfer/unitary_kernel.hpp"

namespace qt = qtransfer;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20260416;

// Tolerances and budgets.
constexpr double kPropagatorTol = 1e-12;        // 1
constexpr double kSeriesFormTol = 1e-13;        // 2
constexpr double kExactnessTol = 1e-10;         // 3
constexpr double kQubitTableTol = 1e-12;        // 4
constexpr double kClosedFormTol = 1e-12;        // 5
constexpr double kMcSigmas = 6.0;               // 6
constexpr double kMcFloor = 1e-12;              // 6: band floor for zero-spread entries
constexpr double kMcAbsTol = 1e-2;              // 6
constexpr double kSpectralTol = 1e-10;          // 7
constexpr double kRadiusSlack = 1e-10;          // 7
constexpr double kAnsatzTol = 1e-8;             // 8a
constexpr double kPulsePropTol = 1e-6;          // 8b
constexpr double kResidualFactor = 1e-6;        // 8c
constexpr double kBudget[11] = {0, 5, 2, 30, 10, 1, 60, 5, 30, 1, 90};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// Every T built by criteria 3-6, revisited by 7.
std::vector<qt::TransferMatrix> g_built;

qt::RVector random_field(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  qt::RVector b(static_cast<Eigen::Index>(n));
  for (auto& x : b) x = u(rng);
  return b;
}

qt::NoiseModel random_discrete(std::mt19937_64& rng, std::size_t atoms, double scale) {
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::vector<qt::NoiseAtom> out;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    out.push_back({random_field(rng, 3, scale), w(rng)});
    total += out.back().p;
  }
  for (auto& a : out) a.p /= total;
  return qt::NoiseModel::discrete(out);
}

qt::CMatrix random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  qt::CVector psi(n);
  for (auto& x : psi) x = {g(rng), g(rng)};
  psi.normalize();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w = u(rng);
  return w * psi * psi.adjoint() + (1.0 - w) * qt::CMatrix::Identity(n, n) / n;
}

struct System {
  const char* name;
  qt::OperatorBasis basis;
  std::vector<std::size_t> idx;
};

std::vector<System> systems(bool with_n4) {
  std::vector<System> s{{"qubit", qt::pauli_basis(), {0, 1, 2}},
                        {"qutrit", qt::gell_mann_basis(3), {0, 1, 2}},
                        {"two-qubit", qt::kronecker_pauli_basis(2), {3, 7, 11}}};
  if (with_n4) s.push_back({"N=4", qt::generalized_gell_mann_basis(4), {0, 6, 12}});
  return s;
}

Outcome criterion1() {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> tau_dist(0.0, 10.0);
  Outcome out;
  for (const auto& sys : systems(true)) {
    const auto sub = qt::find_spin_subalgebra(sys.basis, sys.idx);
    double worst = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
      const qt::RVector b = random_field(rng, 3, 1.0);
      double tau = 0.0;
      while (tau == 0.0) tau = 10.0 - tau_dist(rng);  // (0, 10]
      const qt::CMatrix closed = sys.idx.size() == 3 && sys.name == std::string("qubit")
                                     ? qt::su2_propagator(b, tau).matrix
                                     : qt::subalgebra_propagator(b, tau, sub).matrix;
      const qt::CMatrix ref = qt::expm_oracle(qt::field_hamiltonian(b, sub), tau).matrix;
      worst = std::max(worst, qt::max_abs(closed - ref));
    }
    out.pass &= worst <= kPropagatorTol;
    out.detail += std::string(sys.name) + " " + fmt(worst) + "; ";
  }
  return out;
}

Outcome criterion2() {
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> tau_dist(0.0, 10.0);
  const auto basis = qt::gell_mann_basis(3);
  const auto sub = qt::find_spin_subalgebra(basis, {0, 1, 2});
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const qt::RVector b = random_field(rng, 3, 1.0);
    const double tau = 10.0 - tau_dist(rng);
    worst = std::max(worst, qt::max_abs(qt::subalgebra_propagator(b, tau, sub).matrix -
                                        qt::subalgebra_propagator_series_form(b, tau, sub).matrix));
  }
  return {worst <= kSeriesFormTol, "max deviation " + fmt(worst)};
}

Outcome criterion3() {
  std::mt19937_64 rng(kSeed + 3);
  Outcome out;
  const std::vector<std::pair<const char*, qt::NoiseModel>> laws{
      {"telegraph", qt::NoiseModel::telegraph(0.9, 0)}, {"3-atom", random_discrete(rng, 3, 1.0)}};
  for (const auto& [law_name, noise] : laws) {
    for (const auto& sys : systems(false)) {
      const auto sub = qt::find_spin_subalgebra(sys.basis, sys.idx);
      const qt::FieldConfig field{0.6, 2, 0.45};
      auto t = qt::diagonalize(qt::general_T(sys.basis, sub, noise, field));
      const auto state0 = qt::decompose(random_density(rng, sys.basis.dim()), sys.basis);
      const auto evolved = qt::evolve(t, state0, 6);
      const auto exact = qt::exact_enumeration(noise, field, sub, sys.basis, state0, 6);
      double worst = 0.0;
      for (std::size_t m = 1; m <= 6; ++m)
        worst = std::max(worst, (evolved[m].coeffs - exact[m]).cwiseAbs().maxCoeff());
      out.pass &= worst <= kExactnessTol;
      out.detail += std::string(law_name) + "/" + sys.name + " " + fmt(worst) + "; ";
      g_built.push_back(std::move(t));
    }
  }
  return out;
}

Outcome criterion4() {
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto basis = qt::pauli_basis();
  const auto sub = qt::find_spin_subalgebra(basis, {0, 1, 2});
  double worst = 0.0;
  for (int model = 0; model < 200; ++model) {
    const auto noise = random_discrete(rng, 1 + model % 6, 2.0);
    const qt::FieldConfig field{2.0 * u(rng) - 1.0, static_cast<std::size_t>(model % 3), 0.05 + 2.0 * u(rng)};
    const auto table = qt::assemble_qubit_T(qt::qubit_integrals(noise, field), field.tau);
    auto general = qt::general_T(basis, sub, noise, field);
    worst = std::max(worst, (table.matrix - general.matrix).cwiseAbs().maxCoeff());
    if (model % 20 == 0) g_built.push_back(qt::diagonalize(std::move(general)));
  }
  return {worst <= kQubitTableTol, "200 models, max deviation " + fmt(worst)};
}

Outcome criterion5() {
  const auto basis = qt::pauli_basis();
  const auto sub = qt::find_spin_subalgebra(basis, {0, 1, 2});
  double dephasing = 0.0;
  for (double b : {0.2, 0.8, 1.7})
    for (double tau : {0.1, 0.5, 2.0}) {
      auto t = qt::general_T(basis, sub, qt::NoiseModel::telegraph(b, 2), qt::FieldConfig{0.0, 2, tau});
      qt::RMatrix expected = qt::RMatrix::Zero(3, 3);
      expected.diagonal() << std::cos(2 * b * tau), std::cos(2 * b * tau), 1.0;
      dephasing = std::max(dephasing, (t.matrix - expected).cwiseAbs().maxCoeff());
      g_built.push_back(qt::diagonalize(std::move(t)));
    }
  double conserved = 0.0;
  for (std::size_t axis = 0; axis < 3; ++axis)
    for (double b0 : {0.0, 0.4, -1.1}) {
      const auto t = qt::general_T(basis, sub, qt::NoiseModel::telegraph(0.7, axis),
                                   qt::FieldConfig{b0, axis, 0.8});
      qt::RVector row = qt::RVector::Zero(3);
      row[static_cast<Eigen::Index>(axis)] = 1.0;
      conserved = std::max(conserved, (t.matrix.row(static_cast<Eigen::Index>(axis)).transpose() - row)
                                          .cwiseAbs()
                                          .maxCoeff());
    }
  return {dephasing <= kClosedFormTol && conserved <= kClosedFormTol,
          "dephasing " + fmt(dephasing) + ", conserved row " + fmt(conserved)};
}

Outcome criterion6() {
  const auto basis = qt::pauli_basis();
  const auto sub = qt::find_spin_subalgebra(basis, {0, 1, 2});
  const auto noise = qt::NoiseModel::telegraph(1.0, 2);
  const qt::FieldConfig field{0.5, 0, 0.3};
  qt::DensityState state0{basis, qt::RVector::Zero(3)};
  state0.coeffs << 0.3, 0.2, 0.3;
  const qt::EnsembleRequest req{noise, field, sub, basis, state0, 20, 100000, kSeed + 6};
  const auto mc = qt::run_ensemble(req);
  auto t = qt::diagonalize(qt::general_T(basis, sub, noise, field));
  const auto predicted = qt::evolve(t, state0, 20);
  std::size_t outside = 0;
  double worst = 0.0, worst_sigma = 0.0;
  for (std::size_t k = 0; k <= 20; ++k)
    for (Eigen::Index a = 0; a < 3; ++a) {
      const double dev = std::abs(mc.mean[k][a] - predicted[k].coeffs[a]);
      const double se = mc.standard_error[k][a];
      worst = std::max(worst, dev);
      if (se > 0.0) worst_sigma = std::max(worst_sigma, dev / se);
      if (dev > kMcSigmas * se + kMcFloor || dev > kMcAbsTol) ++outside;
    }
  g_built.push_back(std::move(t));
  return {outside == 0, std::to_string(outside) + " of 63 entries outside; max |dev| " + fmt(worst) +
                            ", max dev/stderr " + fmt(worst_sigma)};
}

Outcome criterion7() {
  double worst = 0.0, radius = 0.0;
  std::size_t not_diag = 0;
  for (const auto& t : g_built) {
    radius = std::max(radius, qt::spectral_radius(t.matrix));
    if (!t.spectral || !t.spectral->diagonalizable) {
      ++not_diag;
      continue;
    }
    qt::RVector v0 = qt::RVector::Zero(t.matrix.rows());
    for (Eigen::Index i = 0; i < v0.size(); ++i) v0[i] = 0.3 * std::cos(1.0 + i);
    const auto a = qt::evolve_iterated(t.matrix, v0, 50);
    const auto b = qt::evolve_spectral(*t.spectral, v0, 50);
    for (std::size_t m = 0; m <= 50; ++m) worst = std::max(worst, (a[m] - b[m]).cwiseAbs().maxCoeff());
  }
  return {worst <= kSpectralTol && radius <= 1.0 + kRadiusSlack && not_diag == 0 && !g_built.empty(),
          std::to_string(g_built.size()) + " matrices, " + std::to_string(not_diag) +
              " defective; spectral vs iterated " + fmt(worst) + ", max radius " +
              qt::format_double(radius)};
}

Outcome criterion8() {
  std::mt19937_64 rng(kSeed + 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double ansatz = 0.0, prop = 0.0, resid_ratio = 0.0;
  std::size_t failed = 0;
  for (int family = 0; family < 2; ++family) {
    for (int draw = 0; draw < 20; ++draw) {
      // Grid spacing h dt ~ 3e-3 in both families.
      const double h = 0.5 + 1.5 * u(rng);
      qt::SeedFunction seed;
      if (family == 0) {
        const double ht_end = 1.0 + 2.0 * u(rng);  // margin vanishes at h t = pi
        const double t_end = ht_end / h;
        const std::size_t points = static_cast<std::size_t>(std::ceil(ht_end / 3e-3)) + 1;
        seed = qt::cos_squared_seed(h, qt::uniform_grid(t_end, points));
      } else {
        const double a = 0.05 + 0.4 * u(rng);
        const double ht_end = 1.0 + 5.0 * u(rng);  // margin vanishes at h t = 2 pi
        const std::size_t points = static_cast<std::size_t>(std::ceil(ht_end / 3e-3)) + 1;
        seed = qt::cos_plus_quartic_seed(h, a, qt::uniform_grid(ht_end / h, points));
      }
      try {
        const auto v = qt::verify_pulse(qt::derive_pulse(seed));
        ansatz = std::max(ansatz, v.max_ansatz_norm_error);
        prop = std::max(prop, v.max_propagator_error);
        resid_ratio = std::max(resid_ratio, v.max_first_order_residual / v.max_abs_J);
        if (v.max_ansatz_norm_error > kAnsatzTol || v.max_propagator_error > kPulsePropTol ||
            v.max_first_order_residual > kResidualFactor * v.max_abs_J)
          ++failed;
      } catch (const qt::Error& e) {
        std::cerr << "  criterion 8: " << seed.family << " h=" << h << ": " << e.what() << '\n';
        ++failed;
      }
    }
  }
  return {failed == 0, "40 draws, " + std::to_string(failed) + " failed; ansatz " + fmt(ansatz) +
                           ", propagator " + fmt(prop) + ", residual/max|J| " + fmt(resid_ratio)};
}

Outcome criterion9() {
  std::size_t degenerate_cosine = 0, cosine_total = 0, leaked = 0, rejected = 0, accepted = 0;
  auto check = [&](const qt::SeedFunction& seed, bool is_cosine) {
    try {
      const auto p = qt::derive_pulse(seed);
      ++accepted;
      auto finite = [](const auto& v) {
        for (const auto& x : v)
          if (!std::isfinite(std::abs(x))) return false;
        return true;
      };
      if (!(finite(p.J) && finite(p.phi) && finite(p.F) && finite(p.K) && finite(p.d_plus) &&
            finite(p.d_minus) && finite(p.margin)))
        ++leaked;
    } catch (const qt::Error& e) {
      ++rejected;
      if (is_cosine && e.code() == qt::ErrorCode::DegenerateSeed) ++degenerate_cosine;
    }
  };
  for (double h : {0.3, 1.0, 2.5})
    for (std::size_t points : {51u, 501u, 2001u}) {
      ++cosine_total;
      check(qt::cosine_seed(h, qt::uniform_grid(2.0, points)), true);
    }
  // cos + a (1 - cos)^2 approaches the cosine seed as a -> 0.
  for (int k = 1; k <= 15; ++k) check(qt::cos_plus_quartic_seed(1.0, std::pow(10.0, -k), qt::uniform_grid(3.0, 1501)), false);
  return {degenerate_cosine == cosine_total && leaked == 0,
          "cosine rejected as Degenerate " + std::to_string(degenerate_cosine) + "/" +
              std::to_string(cosine_total) + "; family: " + std::to_string(accepted) + " accepted, " +
              std::to_string(rejected) + " rejected, " + std::to_string(leaked) + " with non-finite output"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10() {
  const fs::path root = fs::temp_directory_path() / "qtransfer_acceptance_c10";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path config = root / "telegraph.json";
  std::ofstream(config) << R"({
  "system": {"basis": {"kind": "pauli", "size": 2}, "subalgebra": [0, 1, 2]},
  "field": {"b0": 0.5, "axis": 0, "tau": 0.3},
  "noise": {"kind": "telegraph", "amplitude": 1.0, "axis": 2},
  "evolution": {"steps": 20, "initial": "coeffs", "coeffs": [0.3, 0.2, 0.3]},
  "mc": {"n_traj": 100000, "seed": 424242}
})";
  std::vector<std::string> outputs;
  const std::vector<std::pair<std::string, std::string>> runs{
      {"run1", ""}, {"run2", ""}, {"w1", " --workers 1"}, {"w4", " --workers 4"}};
  for (const auto& [name, flags] : runs) {
    const std::string cmd = std::string(QTRANSFER_CLI) + " mc " + config.string() + " " +
                            (root / name).string() + flags + " --compare > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    outputs.push_back(slurp(root / name / "ensemble.csv") + slurp(root / name / "comparison.csv"));
  }
  bool same = true;
  for (const auto& o : outputs) same &= (o == outputs.front());
  return {same && !outputs.front().empty(),
          std::string(same ? "byte-identical" : "DIFFERENT") + " across 2 runs and 1 vs 4 workers (" +
              std::to_string(outputs.front().size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= kBudget[i + 1];
    const bool pass = o.pass && in_budget;
    failures += pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << ": " << (pass ? "PASS" : "FAIL") << " | " << o.detail << " | "
              << fmt(seconds) << " s (budget " << kBudget[i + 1] << " s" << (in_budget ? "" : ", EXCEEDED")
              << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
