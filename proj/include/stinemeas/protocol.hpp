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

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stinemeas/random.hpp"
#include "stinemeas/serialize.hpp"
#include "stinemeas/spectral.hpp"

namespace stinemeas {

using OutcomeAssignment = std::map<std::string, std::size_t>;

struct OutcomeLiteral {
  std::string ss_label;
  std::size_t outcome = 0;
};

using Conjunction = std::vector<OutcomeLiteral>;

// Total predicate over earlier outcomes. Built either from a disjunction of
// conjunctions (serializable) or from an arbitrary callable.
class Condition {
 public:
  static Condition any_of(std::vector<Conjunction> clauses) {
    Condition c;
    std::set<std::string> seen;
    for (const auto& cl : clauses)
      for (const auto& lit : cl)
        if (seen.insert(lit.ss_label).second) c.labels_.push_back(lit.ss_label);
    c.clauses_ = std::move(clauses);
    return c;
  }

  static Condition equals(const std::string& ss_label, std::size_t outcome) {
    return any_of({{OutcomeLiteral{ss_label, outcome}}});
  }

  static Condition predicate(std::vector<std::string> labels,
                             std::function<bool(const OutcomeAssignment&)> fn) {
    Condition c;
    c.labels_ = std::move(labels);
    c.fn_ = std::move(fn);
    return c;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<std::vector<Conjunction>>& clauses() const { return clauses_; }

  bool evaluate(const OutcomeAssignment& a) const {
    if (fn_) return fn_(a);
    for (const auto& cl : *clauses_) {
      bool all = true;
      for (const auto& lit : cl) {
        auto it = a.find(lit.ss_label);
        if (it == a.end() || it->second != lit.outcome) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }

 private:
  std::vector<std::string> labels_;
  std::optional<std::vector<Conjunction>> clauses_;
  std::function<bool(const OutcomeAssignment&)> fn_;
};

struct UnitaryStep {
  Operator op;
  std::vector<std::string> targets;
};

struct MeasureStep {
  Operator observable;
  std::vector<std::string> targets;
  std::string ss_label;
};

struct FeedbackStep {
  Condition condition;
  Operator op;
  std::vector<std::string> targets;
};

struct CondMeasureStep {
  Condition condition;
  Operator observable;
  std::vector<std::string> targets;
  std::string ss_label;
};

using Instruction = std::variant<UnitaryStep, MeasureStep, FeedbackStep, CondMeasureStep>;

struct ProtocolSpec {
  RegisterLayout layout;
  std::vector<Instruction> instructions;

  RegisterLayout physical_layout() const {
    return layout.select(layout.labels_of_kind(RegisterKind::physical));
  }
};

struct MeasurementRecord {
  std::size_t instruction = 0;
  SpectralDecomposition spectrum;
  bool conditional = false;
};

struct DilatedRun {
  DensityMatrix final_state;
  std::map<std::string, std::vector<double>> outcome_marginals;
  std::vector<std::string> measured;  // ss labels in instruction order
  RegisterLayout physical;
};

struct TrajectoryRecord {
  std::map<std::string, std::size_t> outcomes;
  Ket final_physical_state;
  double probability = 1.0;
};

namespace detail {

inline void check_physical_targets(const RegisterLayout& l, const std::vector<std::string>& targets,
                                   const Operator& op, std::size_t idx) {
  const std::string where = "instruction " + std::to_string(idx);
  require(!targets.empty(), where + ": no targets");
  std::set<std::string> seen;
  for (const auto& t : targets) {
    require(l.contains(t), where + ": unknown register '" + t + "'");
    require(l.at(t).kind == RegisterKind::physical, where + ": target '" + t + "' is not physical");
    require(seen.insert(t).second, where + ": repeated target '" + t + "'");
  }
  require(op.layout().size() == targets.size(), where + ": operator register count does not match targets");
  for (std::size_t i = 0; i < targets.size(); ++i)
    require(op.layout()[i].dim == l.at(targets[i]).dim,
            where + ": operator dimension does not match register '" + targets[i] + "'");
}

inline void check_condition(const Condition& c, const std::map<std::string, MeasurementRecord>& done,
                            std::size_t idx) {
  for (const auto& l : c.labels())
    require(done.count(l) != 0, "instruction " + std::to_string(idx) + ": condition references ss register '" +
                                    l + "' that is not measured earlier");
  if (c.clauses())
    for (const auto& cl : *c.clauses())
      for (const auto& lit : cl)
        require(lit.outcome < done.at(lit.ss_label).spectrum.outcome_count(),
                "instruction " + std::to_string(idx) + ": condition outcome out of range");
}

// Diagonal projector (full layout) onto ss basis tuples where `c` holds.
inline Operator condition_projector(const Condition& c, const RegisterLayout& l) {
  const auto& labels = c.labels();
  const RegisterLayout sub = l.select(labels);
  const auto off = l.offsets(labels);
  const auto rest = l.offsets(l.complement(labels));
  const auto D = static_cast<Eigen::Index>(l.total_dim());
  CMatrix p = CMatrix::Zero(D, D);
  for (std::size_t t = 0; t < off.size(); ++t) {
    const auto digits = sub.digits(t);
    OutcomeAssignment a;
    for (std::size_t i = 0; i < labels.size(); ++i) a[labels[i]] = digits[i];
    if (!c.evaluate(a)) continue;
    for (std::size_t r : rest) p(static_cast<Eigen::Index>(off[t] + r), static_cast<Eigen::Index>(off[t] + r)) = 1.0;
  }
  return Operator(l, std::move(p), {std::nullopt, true, true});
}

inline Operator embedded_measurement(const SpectralDecomposition& sd, const std::vector<std::string>& targets,
                                     const std::string& ss_label, const RegisterLayout& l) {
  const auto mu = measurement_unitary(sd, ss_label, l.at(ss_label).dim);
  std::vector<std::string> regs = targets;
  regs.push_back(ss_label);
  return embed(mu.unitary, regs, l);
}

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

}  // namespace detail

struct CompiledProtocol {
  RegisterLayout layout;
  std::vector<Operator> gates;
  std::map<std::string, MeasurementRecord> measurements;
  std::vector<std::string> measured;
};

// Validates the spec and builds one dense dilated gate per instruction.
inline CompiledProtocol compile(const ProtocolSpec& spec) {
  const RegisterLayout& l = spec.layout;
  CompiledProtocol out;
  out.layout = l;
  auto add_measure = [&](const Operator& obs, const std::vector<std::string>& targets, const std::string& ss,
                         std::size_t idx, bool conditional) {
    detail::check_physical_targets(l, targets, obs, idx);
    require(l.contains(ss) && l.at(ss).kind == RegisterKind::stinespring,
            "instruction " + std::to_string(idx) + ": '" + ss + "' is not a stinespring register");
    require(out.measurements.count(ss) == 0,
            "instruction " + std::to_string(idx) + ": ss register '" + ss + "' used twice");
    auto sd = spectral_decompose(obs);
    require(l.at(ss).dim >= std::max<std::size_t>(sd.outcome_count(), 2),
            "instruction " + std::to_string(idx) + ": ss register '" + ss + "' too small for " +
                std::to_string(sd.outcome_count()) + " outcomes");
    Operator g = detail::embedded_measurement(sd, targets, ss, l);
    out.measurements[ss] = MeasurementRecord{idx, std::move(sd), conditional};
    out.measured.push_back(ss);
    return g;
  };
  for (std::size_t idx = 0; idx < spec.instructions.size(); ++idx) {
    const Instruction& ins = spec.instructions[idx];
    Operator gate = std::visit(
        detail::overloaded{
            [&](const UnitaryStep& s) {
              detail::check_physical_targets(l, s.targets, s.op, idx);
              require(s.op.is_unitary(), "instruction " + std::to_string(idx) + ": operator is not unitary");
              return embed(s.op, s.targets, l);
            },
            [&](const MeasureStep& s) { return add_measure(s.observable, s.targets, s.ss_label, idx, false); },
            [&](const FeedbackStep& s) {
              detail::check_physical_targets(l, s.targets, s.op, idx);
              require(s.op.is_unitary(), "instruction " + std::to_string(idx) + ": operator is not unitary");
              detail::check_condition(s.condition, out.measurements, idx);
              const Operator p = detail::condition_projector(s.condition, l);
              const Operator id = Operator::identity(l);
              return Operator(l, embed(s.op, s.targets, l).matrix() * p.matrix() + (id - p).matrix(),
                              {true, std::nullopt, std::nullopt});
            },
            [&](const CondMeasureStep& s) {
              detail::check_condition(s.condition, out.measurements, idx);
              const Operator p = detail::condition_projector(s.condition, l);
              const Operator m = add_measure(s.observable, s.targets, s.ss_label, idx, true);
              const Operator id = Operator::identity(l);
              return Operator(l, m.matrix() * p.matrix() + (id - p).matrix(), {true, std::nullopt, std::nullopt});
            }},
        ins);
    out.gates.push_back(std::move(gate));
  }
  return out;
}

inline void validate(const ProtocolSpec& spec) { (void)compile(spec); }

// rho0 (x) |0...0><0...0| on the full layout.
inline DensityMatrix dilated_initial_state(const ProtocolSpec& spec, const DensityMatrix& rho0) {
  const RegisterLayout phys = spec.physical_layout();
  require_same_layout(rho0.layout(), phys, "dilated initial state");
  const auto off = spec.layout.offsets(phys.labels());
  const auto D = static_cast<Eigen::Index>(spec.layout.total_dim());
  CMatrix m = CMatrix::Zero(D, D);
  for (std::size_t a = 0; a < off.size(); ++a)
    for (std::size_t b = 0; b < off.size(); ++b)
      m(static_cast<Eigen::Index>(off[a]), static_cast<Eigen::Index>(off[b])) =
          rho0.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  return DensityMatrix(spec.layout, std::move(m));
}

// Projector I (x) |m><m| on one ss register, in the full layout.
inline Operator stinespring_projector(const RegisterLayout& l, const std::string& ss_label, std::size_t m) {
  const std::size_t d = l.at(ss_label).dim;
  require(m < d, "stinespring_projector: index out of range");
  CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  p(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = 1.0;
  return embed(Operator(RegisterLayout::single(ss_label, d, RegisterKind::stinespring), p), {ss_label}, l);
}

inline DilatedRun run_dilated(const ProtocolSpec& spec, const DensityMatrix& rho0) {
  const CompiledProtocol cp = compile(spec);
  CMatrix rho = dilated_initial_state(spec, rho0).matrix();
  for (const auto& g : cp.gates) rho = g.matrix() * rho * g.matrix().adjoint();
  DilatedRun run;
  run.final_state = DensityMatrix(spec.layout, std::move(rho));
  run.physical = spec.physical_layout();
  run.measured = cp.measured;
  for (const auto& ss : cp.measured) {
    const std::size_t K = cp.measurements.at(ss).spectrum.outcome_count();
    std::vector<double> p(K);
    for (std::size_t m = 0; m < K; ++m)
      p[m] = (stinespring_projector(spec.layout, ss, m).matrix().diagonal().array() *
              run.final_state.matrix().diagonal().array())
                 .sum()
                 .real();
    run.outcome_marginals[ss] = std::move(p);
  }
  return run;
}

// Born probability as the expectation of the Stinespring projector.
inline double born_from_dilated(const DilatedRun& run, const std::string& ss_label, std::size_t m) {
  auto it = run.outcome_marginals.find(ss_label);
  require(it != run.outcome_marginals.end(), "born_from_dilated: '" + ss_label + "' is not measured");
  require(m < it->second.size(), "born_from_dilated: outcome out of range");
  const Operator p = stinespring_projector(run.final_state.layout(), ss_label, m);
  return (p.matrix() * run.final_state.matrix()).trace().real();
}

inline SelectiveResult marginal_given(const DilatedRun& run, const OutcomeAssignment& assignment,
                                      const Tolerances& tol = kDefaultTolerances) {
  const RegisterLayout& l = run.final_state.layout();
  const auto D = static_cast<Eigen::Index>(l.total_dim());
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(D);
  for (const auto& [label, m] : assignment) {
    auto it = run.outcome_marginals.find(label);
    require(it != run.outcome_marginals.end(), "marginal_given: '" + label + "' is not measured");
    require(m < it->second.size(), "marginal_given: outcome out of range for '" + label + "'");
    mask = mask.cwiseProduct(stinespring_projector(l, label, m).matrix().diagonal().real());
  }
  const CMatrix proj = mask.cast<cplx>().asDiagonal() * run.final_state.matrix() * mask.cast<cplx>().asDiagonal();
  SelectiveResult r;
  r.probability = std::max(0.0, proj.trace().real());
  if (r.probability > tol.zero_probability) {
    const DensityMatrix reduced = partial_trace(DensityMatrix(l, proj), run.physical.labels());
    r.state = DensityMatrix(reduced.layout(), reduced.matrix() / r.probability);
  }
  return r;
}

// Joint distribution of the ss basis digits of `labels` in the final state.
inline std::map<std::vector<std::size_t>, double> joint_distribution(const DilatedRun& run,
                                                                     const std::vector<std::string>& labels) {
  const RegisterLayout& l = run.final_state.layout();
  std::vector<std::size_t> pos;
  for (const auto& s : labels) pos.push_back(l.index_of(s));
  std::map<std::vector<std::size_t>, double> out;
  for (std::size_t i = 0; i < l.total_dim(); ++i) {
    const double p = run.final_state.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    if (p <= 0.0) continue;
    const auto d = l.digits(i);
    std::vector<std::size_t> key;
    for (std::size_t k : pos) key.push_back(d[k]);
    out[key] += p;
  }
  return out;
}

// Monte-Carlo unraveling with eager collapse on the physical registers.
// Instruction i draws from the stream (seed, i). A conditional measurement
// whose condition fails records outcome 0 (ss register left in default).
class TrajectorySampler {
 public:
  explicit TrajectorySampler(ProtocolSpec spec) : spec_(std::move(spec)), cp_(compile(spec_)) {
    phys_ = spec_.physical_layout();
    for (const auto& ins : spec_.instructions) {
      std::vector<CMatrix> ops;
      std::visit(detail::overloaded{
                     [&](const UnitaryStep& s) { ops.push_back(embed(s.op, s.targets, phys_).matrix()); },
                     [&](const FeedbackStep& s) { ops.push_back(embed(s.op, s.targets, phys_).matrix()); },
                     [&](const MeasureStep& s) { ops = projectors(s.ss_label, s.targets); },
                     [&](const CondMeasureStep& s) { ops = projectors(s.ss_label, s.targets); }},
                 ins);
      ops_.push_back(std::move(ops));
    }
  }

  TrajectoryRecord sample(const Ket& psi0, std::uint64_t seed, const Tolerances& tol = kDefaultTolerances) const {
    require_same_layout(psi0.layout(), phys_, "sample_trajectory");
    require(std::abs(psi0.norm() - 1.0) < tol.structural, "sample_trajectory: initial ket not normalized");
    TrajectoryRecord rec;
    CVector psi = psi0.amplitudes();
    auto measure = [&](const std::string& ss, const std::vector<CMatrix>& proj, Rng& rng) {
      std::vector<CVector> branches;
      std::vector<double> w;
      for (const auto& p : proj) {
        branches.push_back(p * psi);
        w.push_back(branches.back().squaredNorm());
      }
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      const std::size_t m = pick(rng);
      rec.outcomes[ss] = m;
      rec.probability *= w[m];
      psi = branches[m] / std::sqrt(w[m]);
    };
    for (std::size_t idx = 0; idx < spec_.instructions.size(); ++idx) {
      Rng rng = make_stream(seed, idx);
      const auto& ops = ops_[idx];
      std::visit(detail::overloaded{
                     [&](const UnitaryStep&) { psi = ops[0] * psi; },
                     [&](const MeasureStep& s) { measure(s.ss_label, ops, rng); },
                     [&](const FeedbackStep& s) {
                       if (s.condition.evaluate(rec.outcomes)) psi = ops[0] * psi;
                     },
                     [&](const CondMeasureStep& s) {
                       if (s.condition.evaluate(rec.outcomes)) measure(s.ss_label, ops, rng);
                       else rec.outcomes[s.ss_label] = 0;
                     }},
                 spec_.instructions[idx]);
    }
    rec.final_physical_state = Ket(phys_, psi);
    return rec;
  }

  const std::vector<std::string>& measured() const { return cp_.measured; }

 private:
  std::vector<CMatrix> projectors(const std::string& ss, const std::vector<std::string>& targets) const {
    std::vector<CMatrix> out;
    for (const auto& p : cp_.measurements.at(ss).spectrum.projectors)
      out.push_back(embed(p, targets, phys_).matrix());
    return out;
  }

  ProtocolSpec spec_;
  CompiledProtocol cp_;
  RegisterLayout phys_;
  std::vector<std::vector<CMatrix>> ops_;
};

inline TrajectoryRecord sample_trajectory(const ProtocolSpec& spec, const Ket& psi0, std::uint64_t seed,
                                          const Tolerances& tol = kDefaultTolerances) {
  return TrajectorySampler(spec).sample(psi0, seed, tol);
}

// Single-qubit and two-qubit gate names accepted in serialized protocols.
inline CMatrix named_gate(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix m;
  if (name == "I") return pauli::I();
  if (name == "X") return pauli::X();
  if (name == "Y") return pauli::Y();
  if (name == "Z") return pauli::Z();
  if (name == "H") {
    m.resize(2, 2);
    m << r, r, r, -r;
    return m;
  }
  if (name == "S") {
    m = CMatrix::Identity(2, 2);
    m(1, 1) = cplx(0, 1);
    return m;
  }
  if (name == "CNOT") {
    m = CMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
  }
  if (name == "ZZ" || name == "XX" || name == "ZX" || name == "XZ") {
    const CMatrix a = named_gate(name.substr(0, 1)), b = named_gate(name.substr(1, 1));
    return tensor(qubit_op(a, "a"), qubit_op(b, "b")).matrix();
  }
  throw InvalidArgument("unknown gate name '" + name + "'");
}

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require(j.is_object(), where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    require(ok, where + ": unknown key '" + k + "'");
  }
}

inline Operator operator_on(const json& j, const RegisterLayout& l, const std::vector<std::string>& targets,
                            const std::string& where) {
  const RegisterLayout sub = l.select(targets);
  const auto d = static_cast<Eigen::Index>(sub.total_dim());
  if (j.is_string()) {
    CMatrix m = named_gate(j.get<std::string>());
    require(m.rows() == d, where + ": gate '" + j.get<std::string>() + "' does not fit the targets");
    return Operator(sub, std::move(m));
  }
  check_keys(j, {"re", "im"}, where);
  return Operator(sub, unflatten(j, d, d));
}

inline json operator_json(const Operator& op) {
  json j;
  to_json(j, op);
  return {{"re", j["re"]}, {"im", j["im"]}};
}

inline Condition condition_from_json(const json& j, const std::string& where) {
  check_keys(j, {"any_of"}, where);
  require(j.contains("any_of") && j["any_of"].is_array(), where + ": 'any_of' must be an array");
  std::vector<Conjunction> clauses;
  for (const auto& cl : j["any_of"]) {
    require(cl.is_array(), where + ": each clause must be an array of [ss_label, outcome] pairs");
    Conjunction c;
    for (const auto& lit : cl) {
      require(lit.is_array() && lit.size() == 2 && lit[0].is_string() && lit[1].is_number_unsigned(),
              where + ": literal must be [ss_label, outcome]");
      c.push_back({lit[0].get<std::string>(), lit[1].get<std::size_t>()});
    }
    clauses.push_back(std::move(c));
  }
  return Condition::any_of(std::move(clauses));
}

inline json condition_json(const Condition& c) {
  require(c.clauses().has_value(), "predicate conditions cannot be serialized");
  json any = json::array();
  for (const auto& cl : *c.clauses()) {
    json conj = json::array();
    for (const auto& lit : cl) conj.push_back({lit.ss_label, lit.outcome});
    any.push_back(conj);
  }
  return {{"any_of", any}};
}

inline std::vector<std::string> targets_of(const json& j, const std::string& where) {
  require(j.contains("targets") && j["targets"].is_array() && !j["targets"].empty(),
          where + ": 'targets' must be a non-empty array");
  return j["targets"].get<std::vector<std::string>>();
}

}  // namespace detail

inline ProtocolSpec protocol_from_json(const json& j) {
  detail::check_keys(j, {"registers", "instructions"}, "protocol");
  require(j.contains("registers"), "protocol: missing 'registers'");
  ProtocolSpec spec;
  spec.layout = j["registers"].get<RegisterLayout>();
  if (!j.contains("instructions")) return spec;
  require(j["instructions"].is_array(), "protocol: 'instructions' must be an array");
  std::size_t idx = 0;
  for (const auto& ins : j["instructions"]) {
    const std::string where = "instruction " + std::to_string(idx++);
    require(ins.is_object() && ins.contains("type") && ins["type"].is_string(), where + ": missing 'type'");
    const auto type = ins["type"].get<std::string>();
    auto need = [&](const char* key) { require(ins.contains(key), where + ": missing '" + key + "'"); };
    if (type == "unitary") {
      detail::check_keys(ins, {"type", "targets", "op"}, where);
      need("op");
      auto t = detail::targets_of(ins, where);
      spec.instructions.push_back(UnitaryStep{detail::operator_on(ins["op"], spec.layout, t, where), t});
    } else if (type == "measure") {
      detail::check_keys(ins, {"type", "targets", "observable", "ss_label"}, where);
      need("observable");
      need("ss_label");
      auto t = detail::targets_of(ins, where);
      spec.instructions.push_back(MeasureStep{detail::operator_on(ins["observable"], spec.layout, t, where), t,
                                              ins["ss_label"].get<std::string>()});
    } else if (type == "feedback") {
      detail::check_keys(ins, {"type", "condition", "targets", "op"}, where);
      need("op");
      need("condition");
      auto t = detail::targets_of(ins, where);
      spec.instructions.push_back(FeedbackStep{detail::condition_from_json(ins["condition"], where),
                                               detail::operator_on(ins["op"], spec.layout, t, where), t});
    } else if (type == "cond_measure") {
      detail::check_keys(ins, {"type", "condition", "targets", "observable", "ss_label"}, where);
      need("observable");
      need("condition");
      need("ss_label");
      auto t = detail::targets_of(ins, where);
      spec.instructions.push_back(CondMeasureStep{detail::condition_from_json(ins["condition"], where),
                                                  detail::operator_on(ins["observable"], spec.layout, t, where), t,
                                                  ins["ss_label"].get<std::string>()});
    } else {
      throw InvalidArgument(where + ": unknown instruction type '" + type + "'");
    }
  }
  return spec;
}

inline json protocol_to_json(const ProtocolSpec& spec) {
  json ins = json::array();
  for (const auto& i : spec.instructions) {
    ins.push_back(std::visit(
        detail::overloaded{
            [](const UnitaryStep& s) -> json {
              return {{"type", "unitary"}, {"targets", s.targets}, {"op", detail::operator_json(s.op)}};
            },
            [](const MeasureStep& s) -> json {
              return {{"type", "measure"},
                      {"targets", s.targets},
                      {"observable", detail::operator_json(s.observable)},
                      {"ss_label", s.ss_label}};
            },
            [](const FeedbackStep& s) -> json {
              return {{"type", "feedback"},
                      {"condition", detail::condition_json(s.condition)},
                      {"targets", s.targets},
                      {"op", detail::operator_json(s.op)}};
            },
            [](const CondMeasureStep& s) -> json {
              return {{"type", "cond_measure"},
                      {"condition", detail::condition_json(s.condition)},
                      {"targets", s.targets},
                      {"observable", detail::operator_json(s.observable)},
                      {"ss_label", s.ss_label}};
            }},
        i));
  }
  return {{"registers", spec.layout}, {"instructions", ins}};
}

}  // namespace stinemeas
