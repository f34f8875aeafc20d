// Copyright 2026 The stinemeas Authors
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

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stinemeas/decoherence.hpp"
#include "stinemeas/detectors.hpp"
#include "stinemeas/protocol.hpp"
#include "stinemeas/random.hpp"
#include "stinemeas/serialize.hpp"
#include "stinemeas/spectral.hpp"
#include "stinemeas/sterngerlach.hpp"

namespace stinemeas {

inline constexpr const char* kVersion = "0.1.0";

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    require(row.size() == columns.size(), "table '" + name + "': row width does not match header");
    rows.push_back(std::move(row));
  }
};

struct ScenarioOutput {
  std::vector<Table> tables;  // first table is the primary output
};

enum class OutputFormat { csv, json };

struct ScenarioConfig {
  std::string scenario;
  json params = json::object();
  std::uint64_t seed = 0;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"measure",      "protocol",   "photodetect",
                                              "homodyne",     "fluorescence", "dispersive",
                                              "sterngerlach", "decohere",   "bell"};
  return names;
}

inline ScenarioConfig parse_scenario_config(const json& j) {
  detail::check_keys(j, {"scenario", "params", "seed", "output"}, "config");
  require(j.contains("scenario") && j["scenario"].is_string(), "config: 'scenario' must be a string");
  ScenarioConfig cfg;
  cfg.scenario = j["scenario"].get<std::string>();
  bool known = false;
  for (const auto& n : scenario_names()) known = known || n == cfg.scenario;
  require(known, "config: unknown scenario '" + cfg.scenario + "'");
  if (j.contains("params")) {
    require(j["params"].is_object(), "config: 'params' must be an object");
    cfg.params = j["params"];
  }
  if (j.contains("seed")) {
    require(j["seed"].is_number_unsigned(), "config: 'seed' must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    detail::check_keys(o, {"path", "format"}, "config.output");
    if (o.contains("path")) {
      require(o["path"].is_string(), "config.output: 'path' must be a string");
      cfg.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      require(o["format"].is_string(), "config.output: 'format' must be a string");
      const auto f = o["format"].get<std::string>();
      require(f == "csv" || f == "json", "config.output: format must be 'csv' or 'json'");
      cfg.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
    }
  }
  return cfg;
}

namespace scenario {

// Reads scenario parameters; finish() rejects keys that were never read.
class Params {
 public:
  Params(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j_.is_object(), where_ + " must be an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    used_.insert(key);
    require(j_.contains(key), where_ + ": missing '" + key + "'");
    return j_[key];
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    require(j_[key].is_number(), where_ + ": '" + key + "' must be a number");
    return j_[key].get<double>();
  }
  std::size_t count(const std::string& key, std::size_t def) {
    if (!has(key)) return def;
    require(j_[key].is_number_unsigned(), where_ + ": '" + key + "' must be a non-negative integer");
    return j_[key].get<std::size_t>();
  }
  std::string text(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    require(j_[key].is_string(), where_ + ": '" + key + "' must be a string");
    return j_[key].get<std::string>();
  }
  cplx complex(const std::string& key, cplx def) {
    if (!has(key)) return def;
    return parse_complex(j_[key], where_ + "." + key);
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    if (!has(key)) return def;
    const json& v = j_[key];
    if (v.is_number()) return {v.get<double>()};
    require(v.is_array() && !v.empty(), where_ + ": '" + key + "' must be a number or non-empty array");
    std::vector<double> out;
    for (const auto& e : v) {
      require(e.is_number(), where_ + ": '" + key + "' entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> def) {
    if (!has(key)) return def;
    const json& v = j_[key];
    if (v.is_number_unsigned()) return {v.get<std::size_t>()};
    require(v.is_array() && !v.empty(), where_ + ": '" + key + "' must be an integer or non-empty array");
    std::vector<std::size_t> out;
    for (const auto& e : v) {
      require(e.is_number_unsigned(), where_ + ": '" + key + "' entries must be non-negative integers");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) require(used_.count(k) > 0, where_ + ": unknown key '" + k + "'");
  }

  static cplx parse_complex(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
            where + ": complex values are numbers or [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

// "random", {"basis": i}, or an array of complex amplitudes (normalized here).
inline Ket parse_state(const json& v, const RegisterLayout& layout, Rng& rng, const std::string& where) {
  if (v.is_string()) {
    require(v.get<std::string>() == "random", where + ": state string must be 'random'");
    return random_ket(layout, rng);
  }
  if (v.is_object()) {
    detail::check_keys(v, {"basis"}, where);
    require(v.contains("basis") && v["basis"].is_number_unsigned(), where + ": 'basis' must be an index");
    return Ket::basis(layout, v["basis"].get<std::size_t>());
  }
  require(v.is_array() && v.size() == layout.total_dim(),
          where + ": amplitude array must have length " + std::to_string(layout.total_dim()));
  CVector a(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) a(static_cast<Eigen::Index>(i)) = Params::parse_complex(v[i], where);
  require(a.norm() > 0.0, where + ": state must be non-zero");
  return Ket(layout, a / a.norm());
}

inline Operator parse_observable(const json& v, const std::string& label, const std::string& where) {
  if (v.is_string()) {
    CMatrix m = named_gate(v.get<std::string>());
    return Operator(RegisterLayout::single(label, static_cast<std::size_t>(m.rows())), m);
  }
  detail::check_keys(v, {"re", "im"}, where);
  require(v.contains("re") && v["re"].is_array(), where + ": matrix needs 're'");
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v["re"].size()))));
  require(n >= 1 && static_cast<std::size_t>(n * n) == v["re"].size(), where + ": matrix must be square");
  return Operator(RegisterLayout::single(label, static_cast<std::size_t>(n)), detail::unflatten(v, n, n));
}

inline std::map<std::vector<std::size_t>, double> sample_outcomes(const TrajectorySampler& sampler, const Ket& psi,
                                                                  std::uint64_t seed, std::size_t samples,
                                                                  const std::vector<std::string>& labels) {
  std::map<std::vector<std::size_t>, std::size_t> hits;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto rec = sampler.sample(psi, seed + s);
    std::vector<std::size_t> key;
    for (const auto& ss : labels) key.push_back(rec.outcomes.at(ss));
    ++hits[key];
  }
  std::map<std::vector<std::size_t>, double> emp;
  for (const auto& [k, n] : hits) emp[k] = static_cast<double>(n) / static_cast<double>(samples);
  return emp;
}

inline std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

inline ScenarioOutput measure(const json& j, std::uint64_t seed, bool dry) {
  Params p(j, "params");
  const Operator obs = parse_observable(p.has("observable") ? p.raw("observable") : json("Z"), "p", "params.observable");
  Rng rng = make_stream(seed, 0);
  const Ket psi = parse_state(p.has("state") ? p.raw("state") : json("random"), obs.layout(), rng, "params.state");
  const std::size_t shots = p.count("shots", 1000);
  p.finish();
  if (dry) return {};
  const auto sd = spectral_decompose(obs);
  const auto mu = measurement_unitary(sd);
  const auto rho = DensityMatrix::pure(psi);
  const auto post = dilate(mu, rho);
  std::vector<double> born(sd.outcome_count());
  for (std::size_t m = 0; m < born.size(); ++m) born[m] = apply_selective(mu, rho, m).probability;
  std::vector<std::size_t> counts(born.size(), 0);
  Rng draw = make_stream(seed, 1);
  std::discrete_distribution<std::size_t> pick(born.begin(), born.end());
  for (std::size_t s = 0; s < shots; ++s) ++counts[pick(draw)];
  Table t{"outcomes", {"outcome", "eigenvalue", "multiplicity", "p_born", "p_dilated", "count"}, {}};
  const DensityMatrix ss = partial_trace(post, {mu.ss_label});
  for (std::size_t m = 0; m < born.size(); ++m)
    t.add({as_int(m), sd.eigenvalues[m], as_int(sd.multiplicities[m]), born[m],
           ss.matrix()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)).real(), as_int(counts[m])});
  return {{t}};
}

inline ScenarioOutput protocol(const json& j, std::uint64_t seed, bool dry) {
  Params p(j, "params");
  const ProtocolSpec spec = protocol_from_json(p.raw("protocol"));
  validate(spec);
  Rng rng = make_stream(seed, 0);
  const Ket psi = parse_state(p.has("state") ? p.raw("state") : json("random"), spec.physical_layout(), rng,
                              "params.state");
  const std::size_t samples = p.count("samples", 10000);
  p.finish();
  if (dry) return {};
  const auto run = run_dilated(spec, DensityMatrix::pure(psi));
  const TrajectorySampler sampler(spec);
  const auto exact = joint_distribution(run, sampler.measured());
  const auto emp = samples > 0 ? sample_outcomes(sampler, psi, seed, samples, sampler.measured()) : decltype(exact){};
  Table t{"joint", sampler.measured(), {}};
  t.columns.push_back("p_dilated");
  t.columns.push_back("p_sampled");
  std::set<std::vector<std::size_t>> keys;
  for (const auto& [k, v] : exact) keys.insert(k);
  for (const auto& [k, v] : emp) keys.insert(k);
  for (const auto& k : keys) {
    std::vector<Cell> row;
    for (std::size_t d : k) row.push_back(as_int(d));
    row.push_back(exact.count(k) ? exact.at(k) : 0.0);
    row.push_back(emp.count(k) ? emp.at(k) : 0.0);
    t.add(std::move(row));
  }
  return {{t}};
}

inline ScenarioOutput photodetect(const json& j, std::uint64_t, bool dry) {
  Params p(j, "params");
  const std::size_t n = p.count("n", 5);
  const double zeta = p.number("zeta", 2.0);
  const std::size_t qubits = p.count("n_qubits", 12);
  p.finish();
  require(zeta > 0.0, "params: 'zeta' must be positive");
  require(qubits >= 1, "params: 'n_qubits' must be positive");
  if (dry) return {};
  const auto closed = photocount_distribution(n, zeta);
  PhotonCounterConfig cfg{qubits, std::sqrt(zeta / static_cast<double>(qubits)), 1.0, n};
  const auto counts = count_distribution(photodetect_exact(fock_number(n, n), cfg));
  Table t{"counts", {"k", "p_k", "p_k_exact"}, {}};
  for (std::size_t k = 0; k <= n; ++k) t.add({as_int(k), closed[k], k < counts.size() ? counts[k] : 0.0});
  return {{t}};
}

inline ScenarioOutput homodyne(const json& j, std::uint64_t seed, bool dry) {
  Params p(j, "params");
  HomodyneConfig cfg;
  cfg.beta_abs = p.number("beta_abs", 8.0);
  cfg.phi = p.number("phi", 0.0);
  cfg.fock_cutoff = p.count("fock_cutoff", 160);
  const std::size_t levels = p.count("input_levels", 30);
  require(levels >= 1, "params: 'input_levels' must be positive");
  const RegisterLayout in = RegisterLayout::single("mode", levels);
  Ket psi = fock_number(0, levels - 1);
  if (p.has("coherent")) {
    psi = coherent_ket(Params::parse_complex(p.raw("coherent"), "params.coherent"), levels - 1).normalized();
  } else if (p.has("state")) {
    Rng rng = make_stream(seed, 0);
    psi = parse_state(p.raw("state"), in, rng, "params.state");
  }
  HomodyneGrid grid{static_cast<int>(p.count("d_max", 0))};
  p.finish();
  cfg.validate();
  require(cfg.beta_abs > 0.0, "params: 'beta_abs' must be positive");
  if (dry) return {};
  const auto d = homodyne_distributions(psi, cfg, grid);
  Table tn{"N", {"N", "pN", "pN_exact"}, {}};
  for (std::size_t i = 0; i < d.n_values.size(); ++i) tn.add({as_int(d.n_values[i]), d.pN[i], d.pN_exact[i]});
  Table td{"D", {"D", "pD", "pD_exact"}, {}};
  for (std::size_t i = 0; i < d.d_values.size(); ++i)
    td.add({static_cast<std::int64_t>(d.d_values[i]), d.pD[i], d.pD_exact[i]});
  return {{tn, td}};
}

inline ScenarioOutput fluorescence(const json& j, std::uint64_t, bool dry) {
  Params p(j, "params");
  const cplx cg = p.complex("c_g", 1.0);
  const cplx ce = p.complex("c_e", 0.0);
  const auto ps = p.numbers("p_detect", {0.5});
  const auto ns = p.counts("n_photons", {10});
  p.finish();
  for (double pd : ps) FluorescenceConfig{pd, 0}.validate();
  (void)fluorescence_measure(cg, ce, {ps.front(), ns.front()});
  if (dry) return {};
  Table t{"sweep",
          {"p_detect", "n_photons", "p_click", "p_no_click", "p_false_negative", "p_false_negative_state",
           "p_outcome_g", "p_outcome_e"},
          {}};
  for (double pd : ps)
    for (std::size_t n : ns) {
      const auto r = fluorescence_measure(cg, ce, {pd, n});
      t.add({pd, as_int(n), r.p_click, r.p_no_click, r.p_false_negative, r.p_false_negative_state, r.p_outcome_g,
             r.p_outcome_e});
    }
  return {{t}};
}

inline ScenarioOutput dispersive(const json& j, std::uint64_t, bool dry) {
  Params p(j, "params");
  const cplx cg = p.complex("c_g", std::numbers::sqrt2 / 2);
  const cplx ce = p.complex("c_e", std::numbers::sqrt2 / 2);
  const auto alphas = p.numbers("alpha", {0.5, 1.0, 2.0});
  const auto thetas = p.numbers("theta", {std::numbers::pi / 2});
  p.finish();
  for (double a : alphas)
    for (double th : thetas) (void)dispersive_readout(cg, ce, {a, th});
  if (dry) return {};
  Table t{"sweep", {"alpha", "theta", "p_error", "p_assign_g", "p_assign_e"}, {}};
  for (double a : alphas)
    for (double th : thetas) {
      const auto r = dispersive_readout(cg, ce, {a, th});
      t.add({a, th, r.p_error, r.p_assign_g, r.p_assign_e});
    }
  return {{t}};
}

inline ScenarioOutput sterngerlach(const json& j, std::uint64_t, bool dry) {
  Params p(j, "params");
  SGConfig cfg;
  cfg.M = p.number("M", cfg.M);
  cfg.b = p.number("b", cfg.b);
  cfg.muB = p.number("muB", cfg.muB);
  cfg.B0 = p.number("B0", cfg.B0);
  cfg.v = p.number("v", cfg.v);
  cfg.L = p.number("L", cfg.L);
  cfg.z0 = p.number("z0", cfg.z0);
  cfg.delta = p.number("delta", cfg.delta);
  cfg.c_plus = p.complex("c_plus", cfg.c_plus);
  cfg.c_minus = p.complex("c_minus", cfg.c_minus);
  const double z_min = p.number("z_min", -20.0);
  const double z_max = p.number("z_max", 20.0);
  const std::size_t points = p.count("points", 2048);
  const std::size_t steps = p.count("steps", 400);
  const std::size_t stride = p.count("stride", 8);
  p.finish();
  cfg.validate();
  require(stride >= 1, "params: 'stride' must be positive");
  require(steps >= 1, "params: 'steps' must be positive");
  require(z_max > z_min && points >= 8, "params: invalid grid");
  require((z_max - z_min) / static_cast<double>(points) <= cfg.delta / 8.0, "params: grid spacing must be at most delta / 8");
  if (dry) return {};
  const double t = cfg.t_exit();
  const auto g = sg_split_step(cfg, sg_initial_packet(cfg, z_min, z_max, points), t, steps);
  Table prof{"profile", {"z", "psi_plus_sq", "psi_minus_sq"}, {}};
  for (std::size_t i = 0; i < g.points; i += stride)
    prof.add({g.z(i), std::norm(g.plus(static_cast<Eigen::Index>(i))), std::norm(g.minus(static_cast<Eigen::Index>(i)))});
  const auto o = sg_outcome_distribution(cfg, t);
  Table sum{"summary",
            {"t", "p_plus", "p_minus", "mean_plus", "mean_minus", "mean_plus_oracle", "mean_minus_oracle", "var_plus",
             "var_minus", "misbin_plus", "misbin_minus", "misbin_plus_oracle", "misbin_minus_oracle", "clean_binning"},
            {}};
  sum.add({t, o.p_plus, o.p_minus, o.mean_plus, o.mean_minus, g.first_moment(+1), g.first_moment(-1), o.var_plus,
           o.var_minus, o.misbin_plus, o.misbin_minus, sg_wrong_sign_mass(cfg, g, +1), sg_wrong_sign_mass(cfg, g, -1),
           std::int64_t{o.clean_binning ? 1 : 0}});
  return {{prof, sum}};
}

inline ScenarioOutput decohere(const json& j, std::uint64_t seed, bool dry) {
  Params p(j, "params");
  const Operator obs = parse_observable(p.has("observable") ? p.raw("observable") : json("Z"), "p", "params.observable");
  const auto sd = spectral_decompose(obs);
  const auto sizes = p.counts("multiplicities", std::vector<std::size_t>(sd.outcome_count(), 1));
  Rng rng = make_stream(seed, 0);
  const Ket psi = parse_state(p.has("state") ? p.raw("state") : json("random"), obs.layout(), rng, "params.state");
  const auto samples = p.counts("samples", {100, 1000, 10000});
  p.finish();
  require(sizes.size() == sd.outcome_count(), "params: 'multiplicities' needs one entry per outcome");
  for (std::size_t s : samples) require(s >= 1, "params: 'samples' entries must be positive");
  if (dry) return {};
  const auto mu = nonminimal_measurement(sd, sizes);
  const auto blocks = SymmetryBlocks::from_multiplicities(sizes);
  const auto post = dilate(mu, DensityMatrix::pure(psi));
  const auto exact = dephase_exact(post, blocks);
  Table t{"convergence", {"samples", "trace_distance", "bound", "coherence_before", "coherence_exact"}, {}};
  const double c0 = coherence_norm(post, blocks), c1 = coherence_norm(exact, blocks);
  for (std::size_t s : samples) {
    const double td = trace_distance(sampled_dephase(post, blocks, s, seed + 1).matrix(), exact.matrix());
    t.add({as_int(s), td, 5.0 / std::sqrt(static_cast<double>(s)), c0, c1});
  }
  return {{t}};
}

inline ScenarioOutput bell(const json& j, std::uint64_t seed, bool dry) {
  Params p(j, "params");
  const Operator oa = parse_observable(p.has("observable_a") ? p.raw("observable_a") : json("Z"), "x", "params.observable_a");
  const Operator ob = parse_observable(p.has("observable_b") ? p.raw("observable_b") : json("Z"), "x", "params.observable_b");
  const std::size_t samples = p.count("samples", 10000);
  const std::string order = p.text("order", "ab");
  p.finish();
  require(order == "ab" || order == "ba", "params: 'order' must be 'ab' or 'ba'");
  const bool b_first = order == "ba";
  require(oa.layout().total_dim() == 2 && ob.layout().total_dim() == 2, "params: Bell observables act on one qubit");
  if (dry) return {};
  const RegisterLayout l({{"a", 2}, {"b", 2}, {"ma", 2, RegisterKind::stinespring}, {"mb", 2, RegisterKind::stinespring}});
  MeasureStep ma{oa, {"a"}, "ma"}, mb{ob, {"b"}, "mb"};
  ProtocolSpec spec{l, {}};
  if (b_first) spec.instructions = {mb, ma};
  else spec.instructions = {ma, mb};
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::numbers::sqrt2;
  const Ket psi(spec.physical_layout(), v);
  const auto run = run_dilated(spec, DensityMatrix::pure(psi));
  const auto joint = joint_distribution(run, {"ma", "mb"});
  const auto ea = spectral_decompose(oa).eigenvalues, eb = spectral_decompose(ob).eigenvalues;
  double corr = 0.0;
  for (const auto& [k, pr] : joint) corr += ea.at(k[0]) * eb.at(k[1]) * pr;
  std::map<std::vector<std::size_t>, double> emp;
  if (samples > 0) emp = sample_outcomes(TrajectorySampler(spec), psi, seed, samples, {"ma", "mb"});
  Table t{"outcomes", {"outcome_a", "outcome_b", "eigenvalue_a", "eigenvalue_b", "p_dilated", "p_sampled", "correlation"}, {}};
  for (std::size_t a = 0; a < ea.size(); ++a)
    for (std::size_t b = 0; b < eb.size(); ++b) {
      const std::vector<std::size_t> k{a, b};
      t.add({as_int(a), as_int(b), ea[a], eb[b], joint.count(k) ? joint.at(k) : 0.0, emp.count(k) ? emp.at(k) : 0.0, corr});
    }
  return {{t}};
}

}  // namespace scenario

// Parses and checks parameters; runs the scenario unless dry.
inline ScenarioOutput run_scenario(const ScenarioConfig& cfg, bool dry = false) {
  using Fn = ScenarioOutput (*)(const json&, std::uint64_t, bool);
  static const std::map<std::string, Fn> table{
      {"measure", scenario::measure},           {"protocol", scenario::protocol},
      {"photodetect", scenario::photodetect},   {"homodyne", scenario::homodyne},
      {"fluorescence", scenario::fluorescence}, {"dispersive", scenario::dispersive},
      {"sterngerlach", scenario::sterngerlach}, {"decohere", scenario::decohere},
      {"bell", scenario::bell}};
  const auto it = table.find(cfg.scenario);
  require(it != table.end(), "unknown scenario '" + cfg.scenario + "'");
  return it->second(cfg.params, cfg.seed, dry);
}

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d == 0.0 ? 0.0 : *d);
    return buf;
  }
  return std::get<std::string>(c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline json to_json_value(const ScenarioConfig& cfg, const ScenarioOutput& out) {
  json tables = json::object();
  for (const auto& t : out.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::array();
      for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
      rows.push_back(r);
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", rows}};
  }
  return {{"scenario", cfg.scenario}, {"seed", cfg.seed}, {"tables", tables}};
}

}  // namespace stinemeas
