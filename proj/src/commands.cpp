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
#include "qtransfer/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "qtransfer/errors.hpp"
#include "qtransfer/monte_carlo_oracle.hpp"
#include "qtransfer/pulse_designer.hpp"
#include "qtransfer/text_io.hpp"
#include "qtransfer/transfer_matrix.hpp"

namespace qtransfer {
namespace {

using ojson = nlohmann::ordered_json;

// Absolute floor added to the 6-sigma band; coefficients with zero spread
// would otherwise compare roundoff against zero.
constexpr double kCompareSigmas = 6.0;
constexpr double kCompareFloor = 1e-12;

template <typename T>
const T& require(const std::optional<T>& section, const char* name) {
  if (!section) throw Error(ErrorCode::ConfigError, std::string(name) + ": required section missing");
  return *section;
}

std::ofstream open_output(const CommandOptions& options, const std::string& name) {
  std::filesystem::create_directories(options.output_dir);
  const auto path = options.output_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  return out;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const CommandOptions& options) {
  if (options.seed) {
    config.averaging.seed = *options.seed;
    if (config.mc) config.mc->seed = *options.seed;
  }
  if (options.workers && config.mc) config.mc->workers = *options.workers;
  return config;
}

struct System {
  OperatorBasis basis;
  SpinSubalgebra sub;
};

System build_system(const ExperimentConfig& config) {
  const SystemSpec& spec = require(config.system, "system");
  OperatorBasis basis = make_basis(spec.basis);
  for (std::size_t index : spec.subalgebra)
    if (index >= basis.size())
      throw Error(ErrorCode::ConfigError, "system.subalgebra: index " + std::to_string(index) +
                                              " out of range for a basis of size " +
                                              std::to_string(basis.size()));
  SpinSubalgebra sub = find_spin_subalgebra(basis, spec.subalgebra);
  return {std::move(basis), std::move(sub)};
}

DensityState initial_state(const ExperimentConfig& config, const OperatorBasis& basis) {
  return make_initial_state(config.evolution.value_or(EvolutionSpec{}), basis);
}

TransferMatrix build_transfer(const ExperimentConfig& config, const System& system, int workers) {
  const NoiseModel noise = require(config.noise, "noise").build();
  const FieldConfig& field = require(config.field, "field");
  AveragingOptions avg{config.averaging.samples, config.averaging.seed, workers};
  return diagonalize(general_T(system.basis, system.sub, noise, field, avg));
}

ojson check_json(const ConditionCheck& c) {
  return {{"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance},
          {"index", c.index}, {"t", c.t}};
}

SeedFunction make_seed(const PulseSpec& spec) {
  std::vector<double> grid = uniform_grid(spec.t_end, spec.points);
  if (spec.family == "cos_squared") return cos_squared_seed(spec.h, std::move(grid));
  if (spec.family == "cos_plus_quartic") return cos_plus_quartic_seed(spec.h, spec.a, std::move(grid));
  if (spec.family == "cosine") return cosine_seed(spec.h, std::move(grid));
  throw Error(ErrorCode::ConfigError, "pulse.family: unknown seed family '" + spec.family + "'");
}

}  // namespace

int cmd_transfer(const ExperimentConfig& raw, const CommandOptions& options, std::ostream& log) {
  const ExperimentConfig config = apply_overrides(raw, options);
  const System system = build_system(config);
  const int workers = config.mc ? config.mc->workers : options.workers.value_or(0);
  const TransferMatrix t = build_transfer(config, system, workers);
  const DensityState state0 = initial_state(config, system.basis);
  const std::size_t steps = config.evolution ? config.evolution->steps : 0;

  {
    auto out = open_output(options, config.outputs.transfer_matrix);
    write_matrix_text(out, t.matrix);
  }
  {
    auto out = open_output(options, config.outputs.spectrum);
    out << "index,eigval_re,eigval_im,modulus,rate\n";
    const auto rates = decoherence_rates(t);
    for (std::size_t j = 0; j < rates.size(); ++j)
      out << j << ',' << format_double(rates[j].eigval.real()) << ','
          << format_double(rates[j].eigval.imag()) << ','
          << format_double(std::abs(rates[j].eigval)) << ',' << format_double(rates[j].rate)
          << '\n';
  }
  {
    auto out = open_output(options, config.outputs.trajectory);
    out << "step";
    for (std::size_t a = 0; a < system.basis.size(); ++a) out << ",c" << a;
    out << '\n';
    const auto states = evolve(t, state0, steps);
    for (std::size_t k = 0; k < states.size(); ++k) {
      out << k;
      for (Eigen::Index a = 0; a < states[k].coeffs.size(); ++a)
        out << ',' << format_double(states[k].coeffs[a]);
      out << '\n';
    }
  }
  log << "transfer: " << t.matrix.rows() << "x" << t.matrix.cols() << " matrix, spectral radius "
      << format_double(spectral_radius(t.matrix)) << '\n';
  return kExitOk;
}

int cmd_mc(const ExperimentConfig& raw, const CommandOptions& options, std::ostream& log) {
  const ExperimentConfig config = apply_overrides(raw, options);
  const McSpec& mc = require(config.mc, "mc");
  if (mc.n_traj < 1) throw Error(ErrorCode::ConfigError, "mc.n_traj: must be >= 1");
  const System system = build_system(config);
  const NoiseModel noise = require(config.noise, "noise").build();
  const FieldConfig& field = require(config.field, "field");
  const DensityState state0 = initial_state(config, system.basis);
  const std::size_t steps = config.evolution ? config.evolution->steps : 0;

  const EnsembleRequest request{noise, field, system.sub, system.basis, state0,
                                steps, mc.n_traj, mc.seed};
  const EnsembleResult result = run_ensemble(request, mc.workers);
  {
    auto out = open_output(options, config.outputs.ensemble);
    write_ensemble_csv(out, result);
  }
  if (!options.compare) {
    log << "mc: " << mc.n_traj << " trajectories, " << steps << " steps\n";
    return kExitOk;
  }

  const TransferMatrix t = build_transfer(config, system, mc.workers);
  const auto predicted = evolve(t, state0, steps);
  std::size_t failures = 0;
  double worst = 0.0;
  auto out = open_output(options, config.outputs.comparison);
  out << "step,coeff,predicted,mean,stderr,deviation,bound,pass\n";
  for (std::size_t k = 0; k < result.mean.size(); ++k) {
    for (Eigen::Index a = 0; a < result.mean[k].size(); ++a) {
      const double p = predicted[k].coeffs[a];
      const double m = result.mean[k][a];
      const double se = result.standard_error[k][a];
      const double deviation = std::abs(m - p);
      const double bound = kCompareSigmas * se + kCompareFloor;
      const bool pass = deviation <= bound;
      failures += pass ? 0 : 1;
      worst = std::max(worst, deviation);
      out << k << ',' << a << ',' << format_double(p) << ',' << format_double(m) << ','
          << format_double(se) << ',' << format_double(deviation) << ','
          << format_double(bound) << ',' << (pass ? 1 : 0) << '\n';
    }
  }
  log << "mc --compare: " << failures << " entries outside the band, max deviation "
      << format_double(worst) << '\n';
  return failures == 0 ? kExitOk : kExitVerificationFailed;
}

int cmd_pulse(const ExperimentConfig& raw, const CommandOptions& options, std::ostream& log) {
  const ExperimentConfig config = apply_overrides(raw, options);
  const PulseSpec& spec = require(config.pulse, "pulse");
  const SeedFunction seed = make_seed(spec);
  PulseOptions pulse_options;
  pulse_options.quadrature = spec.quadrature;
  const SeedValidation validation = validate_seed(seed, pulse_options);
  {
    ojson j;
    j["family"] = spec.family;
    j["status"] = to_string(validation.status);
    j["q0"] = check_json(validation.q0);
    j["q_dot0"] = check_json(validation.q_dot0);
    j["q_ddot0"] = check_json(validation.q_ddot0);
    j["constraint"] = check_json(validation.constraint);
    j["interior_margin"] = check_json(validation.interior_margin);
    j["slack"] = validation.slack;
    j["messages"] = validation.messages;
    auto out = open_output(options, config.outputs.pulse_validation);
    out << j.dump(2) << '\n';
  }
  for (const auto& message : validation.messages) log << "pulse: " << message << '\n';
  if (validation.status == SeedStatus::Degenerate) return kExitDegenerateSeed;
  if (validation.status == SeedStatus::Invalid) return kExitInvalidSeed;

  const PulseProfile pulse = derive_pulse(seed, pulse_options);
  {
    auto out = open_output(options, config.outputs.pulse_csv);
    write_pulse_csv(out, pulse);
  }
  const PulseVerification v = verify_pulse(pulse);
  {
    ojson j;
    j["pass"] = v.pass;
    j["max_propagator_error"] = v.max_propagator_error;
    j["propagator_worst_index"] = v.propagator_worst_index;
    j["propagator_tolerance"] = v.propagator_tolerance;
    j["max_first_order_residual"] = v.max_first_order_residual;
    j["residual_worst_index"] = v.residual_worst_index;
    j["residual_tolerance"] = v.residual_tolerance;
    j["max_abs_J"] = v.max_abs_J;
    j["max_ansatz_norm_error"] = v.max_ansatz_norm_error;
    j["max_analytic_unitarity_error"] = v.max_analytic_unitarity_error;
    j["max_analytic_det_error"] = v.max_analytic_det_error;
    j["max_ode_unitarity_error"] = v.max_ode_unitarity_error;
    j["unitarity_tolerance"] = v.unitarity_tolerance;
    j["integral_form_discrepancy"] = pulse.integral_form_discrepancy;
    j["integral_form_points"] = pulse.integral_form_points;
    auto out = open_output(options, config.outputs.pulse_verification);
    out << j.dump(2) << '\n';
  }
  log << "pulse: max propagator error " << format_double(v.max_propagator_error)
      << ", residual " << format_double(v.max_first_order_residual) << '\n';
  return v.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_basis(const ExperimentConfig& config, const CommandOptions&, std::ostream& out) {
  const SystemSpec& spec = require(config.system, "system");
  const OperatorBasis basis = make_basis(spec.basis);
  const BasisCheck check = check_basis(basis);
  out << "basis " << to_string(basis.kind()) << " size " << spec.basis.size << " dim "
      << basis.dim() << " elements " << basis.size() << " ortho_const "
      << format_double(basis.ortho_const()) << '\n';
  out << "  hermitian error     " << format_double(check.max_hermitian_error) << '\n';
  out << "  trace error         " << format_double(check.max_trace_error) << '\n';
  out << "  orthogonality error " << format_double(check.max_orthogonality_error) << '\n';
  out << "  basis " << (check.ok() ? "ok" : "FAILED") << '\n';
  if (!check.ok()) return kExitFailure;

  out << "subalgebra [";
  for (std::size_t i = 0; i < spec.subalgebra.size(); ++i)
    out << (i ? ", " : "") << spec.subalgebra[i];
  out << "]\n";
  const System system = build_system(config);
  out << "  verified" << (system.sub.pauli_like() ? " (A = I)" : "") << ", rank(A) "
      << static_cast<long>(std::lround(system.sub.idempotent().trace().real())) << '\n';
  return kExitOk;
}

int run_command(const std::string& name, const std::string& config_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig config = load_config(config_path);
    if (name == "transfer") return cmd_transfer(config, options, out);
    if (name == "mc") return cmd_mc(config, options, out);
    if (name == "pulse") return cmd_pulse(config, options, out);
    if (name == "basis") return cmd_basis(config, options, out);
    err << "error: unknown subcommand '" << name << "'\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::ConfigError: return kExitConfigError;
      case ErrorCode::DegenerateSeed: return kExitDegenerateSeed;
      case ErrorCode::InvalidSeed: return kExitInvalidSeed;
      case ErrorCode::IntegratorFailure: return kExitIntegratorFailure;
      default: return kExitFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qtransfer
