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
#include "qtransfer/experiment_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qtransfer/errors.hpp"

namespace qtransfer {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::ConfigError, path + ": " + why);
}

/// One JSON object with its dotted path; remembers which keys were read so
/// leftovers can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(at(key), "required field missing");
    return j_.at(key);
  }

  template <typename T>
  T get(const std::string& key) {
    const json& v = raw(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) fail(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(at(key), "must be finite");
        return d;
      } else if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
          fail(at(key), "expected a non-negative integer");
        return static_cast<T>(v.get<std::uint64_t>());
      } else if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer()) fail(at(key), "expected an integer");
        return v.get<int>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
      } else {
        return v.get<T>();
      }
    } catch (const json::exception& e) {
      fail(at(key), e.what());
    }
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    return has(key) ? get<T>(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Section child(const std::string& key) { return Section(raw(key), at(key)); }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) fail(at(key), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

RVector to_rvector(const std::vector<double>& v) {
  return Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const RVector& v) { return {v.data(), v.data() + v.size()}; }

std::string quadrature_name(Quadrature q) { return q == Quadrature::Cubic ? "cubic" : "trapezoid"; }

SystemSpec parse_system(Section s) {
  SystemSpec spec;
  {
    Section b = s.child("basis");
    const std::string kind = b.get<std::string>("kind");
    try {
      spec.basis.kind = basis_kind_from_string(kind);
    } catch (const Error&) {
      fail(b.at("kind"), "unknown basis kind '" + kind + "'");
    }
    spec.basis.size = spec.basis.kind == BasisKind::Pauli ? 2 : b.get<int>("size");
    if (spec.basis.kind == BasisKind::Pauli && b.has("size") && b.get<int>("size") != 2)
      fail(b.at("size"), "pauli basis has size 2");
    spec.basis.ordering = b.get_or<std::string>("ordering", default_ordering(spec.basis.kind));
    if (spec.basis.ordering != default_ordering(spec.basis.kind))
      fail(b.at("ordering"), "unsupported ordering '" + spec.basis.ordering + "'");
    if (spec.basis.kind == BasisKind::GellMann3 && spec.basis.size != 3)
      fail(b.at("size"), "gell_mann requires size 3");
    if (spec.basis.kind == BasisKind::GeneralizedGellMann && spec.basis.size < 2)
      fail(b.at("size"), "must be >= 2");
    if (spec.basis.kind == BasisKind::KroneckerPauli &&
        (spec.basis.size < 1 || spec.basis.size > 10))
      fail(b.at("size"), "number of qubits must be in 1..10");
    b.finish();
  }
  const json& sub = s.raw("subalgebra");
  if (!sub.is_array() || sub.empty()) fail(s.at("subalgebra"), "expected a non-empty index array");
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (!sub[i].is_number_unsigned())
      fail(s.at("subalgebra") + "[" + std::to_string(i) + "]", "expected a non-negative integer");
    spec.subalgebra.push_back(sub[i].get<std::size_t>());
  }
  s.finish();
  return spec;
}

FieldConfig parse_field(Section s) {
  FieldConfig f;
  f.b0 = s.get<double>("b0");
  f.static_axis = s.get<std::size_t>("axis");
  f.tau = s.get<double>("tau");
  if (!(f.tau > 0.0)) fail(s.at("tau"), "must be > 0");
  s.finish();
  return f;
}

NoiseSpec parse_noise(Section s) {
  NoiseSpec n;
  n.kind = s.get<std::string>("kind");
  if (n.kind == "telegraph" || n.kind == "uniform_axis") {
    n.amplitude = s.get<double>("amplitude");
    n.axis = s.get<std::size_t>("axis");
    n.components = s.get_or<std::size_t>("components", 3);
    if (n.axis >= n.components) fail(s.at("axis"), "must be < components");
    if (n.kind == "uniform_axis" && n.amplitude < 0.0) fail(s.at("amplitude"), "must be >= 0");
  } else if (n.kind == "gaussian") {
    n.sigma = s.numbers("sigma");
    n.components = s.get_or<std::size_t>("components", n.sigma.size() == 1 ? 3 : n.sigma.size());
    if (n.sigma.empty()) fail(s.at("sigma"), "must not be empty");
    if (n.sigma.size() != 1 && n.sigma.size() != n.components)
      fail(s.at("sigma"), "needs 1 or `components` entries");
    for (double v : n.sigma)
      if (!(v >= 0.0)) fail(s.at("sigma"), "entries must be >= 0");
  } else if (n.kind == "uniform_sphere") {
    n.radius = s.get<double>("radius");
    n.components = s.get_or<std::size_t>("components", 3);
    if (n.radius < 0.0) fail(s.at("radius"), "must be >= 0");
  } else if (n.kind == "discrete") {
    const json& atoms = s.raw("atoms");
    if (!atoms.is_array() || atoms.empty()) fail(s.at("atoms"), "expected a non-empty array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Section a(atoms[i], s.at("atoms") + "[" + std::to_string(i) + "]");
      NoiseAtom atom{to_rvector(a.numbers("b")), a.get<double>("p")};
      if (!(atom.p > 0.0)) fail(a.at("p"), "must be > 0");
      a.finish();
      n.atoms.push_back(std::move(atom));
    }
    n.components = static_cast<std::size_t>(n.atoms.front().b.size());
    double total = 0.0;
    for (std::size_t i = 0; i < n.atoms.size(); ++i) {
      if (static_cast<std::size_t>(n.atoms[i].b.size()) != n.components)
        fail(s.at("atoms") + "[" + std::to_string(i) + "].b", "inconsistent length");
      total += n.atoms[i].p;
    }
    if (std::abs(total - 1.0) > kTolerances.probability_sum)
      fail(s.at("atoms"), "probabilities sum to " + std::to_string(total));
  } else {
    fail(s.at("kind"), "unknown noise kind '" + n.kind + "'");
  }
  if (n.components == 0) fail(s.at("components"), "must be >= 1");
  s.finish();
  return n;
}

EvolutionSpec parse_evolution(Section s) {
  EvolutionSpec e;
  e.steps = s.get<std::size_t>("steps");
  e.initial = s.get_or<std::string>("initial", "uniform_superposition");
  if (e.initial == "coeffs") {
    e.coeffs = s.numbers("coeffs");
  } else if (e.initial != "maximally_mixed" && e.initial != "uniform_superposition" &&
             e.initial.rfind("basis_state:", 0) != 0) {
    fail(s.at("initial"), "unknown preset '" + e.initial + "'");
  }
  s.finish();
  return e;
}

McSpec parse_mc(Section s) {
  McSpec m;
  m.n_traj = s.get<std::size_t>("n_traj");
  if (m.n_traj < 1) fail(s.at("n_traj"), "must be >= 1");
  m.seed = s.get_or<std::uint64_t>("seed", 0);
  m.workers = s.get_or<int>("workers", 0);
  if (m.workers < 0) fail(s.at("workers"), "must be >= 0");
  s.finish();
  return m;
}

PulseSpec parse_pulse(Section s) {
  PulseSpec p;
  p.family = s.get<std::string>("family");
  if (p.family != "cos_squared" && p.family != "cos_plus_quartic" && p.family != "cosine")
    fail(s.at("family"), "unknown seed family '" + p.family + "'");
  p.h = s.get<double>("h");
  if (!(p.h > 0.0)) fail(s.at("h"), "must be > 0");
  if (p.family == "cos_plus_quartic") p.a = s.get<double>("a");
  {
    Section g = s.child("grid");
    p.t_end = g.get<double>("t_end");
    if (!(p.t_end > 0.0)) fail(g.at("t_end"), "must be > 0");
    p.points = g.get<std::size_t>("points");
    if (p.points < 5) fail(g.at("points"), "must be >= 5");
    g.finish();
  }
  const std::string q = s.get_or<std::string>("quadrature", "cubic");
  if (q == "cubic")
    p.quadrature = Quadrature::Cubic;
  else if (q == "trapezoid")
    p.quadrature = Quadrature::Trapezoid;
  else
    fail(s.at("quadrature"), "expected 'cubic' or 'trapezoid'");
  s.finish();
  return p;
}

OutputSpec parse_outputs(Section s) {
  OutputSpec o;
  auto name = [&](const char* key, std::string& target) {
    if (!s.has(key)) return;
    target = s.get<std::string>(key);
    if (target.empty()) fail(s.at(key), "must not be empty");
  };
  name("transfer_matrix", o.transfer_matrix);
  name("spectrum", o.spectrum);
  name("trajectory", o.trajectory);
  name("ensemble", o.ensemble);
  name("comparison", o.comparison);
  name("pulse_validation", o.pulse_validation);
  name("pulse_csv", o.pulse_csv);
  name("pulse_verification", o.pulse_verification);
  s.finish();
  return o;
}

}  // namespace

NoiseModel NoiseSpec::build() const {
  if (kind == "telegraph") return NoiseModel::telegraph(amplitude, axis, components);
  if (kind == "uniform_axis") return NoiseModel::uniform_axis(amplitude, axis, components);
  if (kind == "gaussian") {
    if (sigma.size() == 1) return NoiseModel::gaussian_isotropic(sigma.front(), components);
    return NoiseModel::gaussian(to_rvector(sigma));
  }
  if (kind == "uniform_sphere") return NoiseModel::uniform_sphere(radius, components);
  if (kind == "discrete") return NoiseModel::discrete(atoms);
  throw Error(ErrorCode::ConfigError, "noise.kind: unknown noise kind '" + kind + "'");
}

bool operator==(const NoiseSpec& a, const NoiseSpec& b) {
  ExperimentConfig ca;
  ExperimentConfig cb;
  ca.noise = a;
  cb.noise = b;
  return to_json(ca) == to_json(cb);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_json(a) == to_json(b);
}

ojson to_json(const BasisDescriptor& d) {
  ojson j;
  j["kind"] = to_string(d.kind);
  j["size"] = d.size;
  j["ordering"] = d.ordering.empty() ? default_ordering(d.kind) : d.ordering;
  return j;
}

BasisDescriptor basis_descriptor_from_json(const json& j) {
  json wrapper = {{"basis", j}, {"subalgebra", {0}}};
  return parse_system(Section(wrapper, "system")).basis;
}

ojson to_json(const ExperimentConfig& c) {
  ojson j;
  if (c.system) {
    j["system"]["basis"] = to_json(c.system->basis);
    j["system"]["subalgebra"] = c.system->subalgebra;
  }
  if (c.field) {
    j["field"] = {{"b0", c.field->b0}, {"axis", c.field->static_axis}, {"tau", c.field->tau}};
  }
  if (c.noise) {
    const NoiseSpec& n = *c.noise;
    ojson nj;
    nj["kind"] = n.kind;
    if (n.kind == "telegraph" || n.kind == "uniform_axis") {
      nj["amplitude"] = n.amplitude;
      nj["axis"] = n.axis;
      nj["components"] = n.components;
    } else if (n.kind == "gaussian") {
      nj["sigma"] = n.sigma;
      nj["components"] = n.components;
    } else if (n.kind == "uniform_sphere") {
      nj["radius"] = n.radius;
      nj["components"] = n.components;
    } else if (n.kind == "discrete") {
      nj["atoms"] = ojson::array();
      for (const auto& atom : n.atoms) nj["atoms"].push_back({{"b", to_std(atom.b)}, {"p", atom.p}});
    }
    j["noise"] = nj;
  }
  j["averaging"] = {{"samples", c.averaging.samples}, {"seed", c.averaging.seed}};
  if (c.evolution) {
    ojson e;
    e["steps"] = c.evolution->steps;
    e["initial"] = c.evolution->initial;
    if (c.evolution->initial == "coeffs") e["coeffs"] = c.evolution->coeffs;
    j["evolution"] = e;
  }
  if (c.mc) {
    j["mc"] = {{"n_traj", c.mc->n_traj}, {"seed", c.mc->seed}, {"workers", c.mc->workers}};
  }
  if (c.pulse) {
    ojson p;
    p["family"] = c.pulse->family;
    p["h"] = c.pulse->h;
    if (c.pulse->family == "cos_plus_quartic") p["a"] = c.pulse->a;
    p["grid"] = {{"t_end", c.pulse->t_end}, {"points", c.pulse->points}};
    p["quadrature"] = quadrature_name(c.pulse->quadrature);
    j["pulse"] = p;
  }
  const OutputSpec& o = c.outputs;
  j["outputs"] = {{"transfer_matrix", o.transfer_matrix},
                  {"spectrum", o.spectrum},
                  {"trajectory", o.trajectory},
                  {"ensemble", o.ensemble},
                  {"comparison", o.comparison},
                  {"pulse_validation", o.pulse_validation},
                  {"pulse_csv", o.pulse_csv},
                  {"pulse_verification", o.pulse_verification}};
  return j;
}

std::string serialize_config(const ExperimentConfig& config) {
  return to_json(config).dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  Section s(root, "");
  ExperimentConfig c;
  if (s.has("system")) c.system = parse_system(s.child("system"));
  if (s.has("field")) c.field = parse_field(s.child("field"));
  if (s.has("noise")) c.noise = parse_noise(s.child("noise"));
  if (s.has("averaging")) {
    Section a = s.child("averaging");
    c.averaging.samples = a.get_or<std::size_t>("samples", c.averaging.samples);
    if (c.averaging.samples < 1) fail(a.at("samples"), "must be >= 1");
    c.averaging.seed = a.get_or<std::uint64_t>("seed", c.averaging.seed);
    a.finish();
  }
  if (s.has("evolution")) c.evolution = parse_evolution(s.child("evolution"));
  if (s.has("mc")) c.mc = parse_mc(s.child("mc"));
  if (s.has("pulse")) c.pulse = parse_pulse(s.child("pulse"));
  if (s.has("outputs")) c.outputs = parse_outputs(s.child("outputs"));
  s.finish();

  if (c.system && c.field && c.field->static_axis >= c.system->subalgebra.size())
    fail("field.axis", "must index into system.subalgebra");
  if (c.system && c.noise && c.noise->components != c.system->subalgebra.size())
    fail("noise.components", "must equal the subalgebra size");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

DensityState make_initial_state(const EvolutionSpec& spec, const OperatorBasis& basis) {
  const int n = basis.dim();
  DensityState state{basis, RVector::Zero(static_cast<Eigen::Index>(basis.size()))};
  if (spec.initial == "maximally_mixed") {
    // all-zero coefficients
  } else if (spec.initial == "uniform_superposition") {
    const CVector psi = CVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    state = decompose(psi * psi.adjoint(), basis);
  } else if (spec.initial.rfind("basis_state:", 0) == 0) {
    const std::string index = spec.initial.substr(12);
    std::size_t k = 0;
    try {
      k = std::stoul(index);
    } catch (const std::exception&) {
      fail("evolution.initial", "bad basis state index '" + index + "'");
    }
    if (k >= static_cast<std::size_t>(n)) fail("evolution.initial", "basis state out of range");
    CMatrix rho = CMatrix::Zero(n, n);
    rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    state = decompose(rho, basis);
  } else if (spec.initial == "coeffs") {
    if (spec.coeffs.size() != basis.size())
      fail("evolution.coeffs", "expected " + std::to_string(basis.size()) + " entries");
    state.coeffs = to_rvector(spec.coeffs);
  } else {
    fail("evolution.initial", "unknown preset '" + spec.initial + "'");
  }
  try {
    require_physical(state);
  } catch (const Error& e) {
    fail("evolution.initial", e.what());
  }
  return state;
}

}  // namespace qtransfer
