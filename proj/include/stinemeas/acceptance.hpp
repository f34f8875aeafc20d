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

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "stinemeas/decoherence.hpp"
#include "stinemeas/detectors.hpp"
#include "stinemeas/protocol.hpp"
#include "stinemeas/random.hpp"
#include "stinemeas/spectral.hpp"
#include "stinemeas/sterngerlach.hpp"

namespace stinemeas {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0: no limit
};

namespace acceptance {

class Checks {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void metric(const std::string& name, double v) {
    std::ostringstream os;
    os.precision(3);
    os << name << "=" << v;
    metrics_.push_back(os.str());
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& m : metrics_) s += (s.empty() ? "" : " ") + m;
    for (const auto& f : failures_) s += (s.empty() ? "" : " ") + std::string("FAILED:") + f;
    return s;
  }

 private:
  std::vector<std::string> metrics_;
  std::vector<std::string> failures_;
};

inline double binomial_oracle(std::size_t n, std::size_t k, double p) {
  double c = 1.0;
  for (std::size_t j = 1; j <= k; ++j) c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
}

// erfc: positive-term erf series below 3, continued fraction above.
inline double erfc_oracle(double x) {
  if (x < 3.0) {
    long double term = x, sum = x;
    for (int n = 1; n < 400; ++n) {
      term *= 2.0L * x * x / (2.0L * n + 1.0L);
      sum += term;
      if (term < 1e-22L * sum) break;
    }
    return static_cast<double>(1.0L - 2.0L / std::sqrt(std::numbers::pi_v<long double>) *
                                          std::exp(-static_cast<long double>(x) * x) * sum);
  }
  double f = x, C = x, D = 0.0;
  for (int n = 1; n < 500; ++n) {
    const double an = 0.5 * n;
    D = 1.0 / (x + an * D);
    C = x + an / C;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

inline double tv_distance(const std::map<std::vector<std::size_t>, double>& p,
                          const std::map<std::vector<std::size_t>, double>& q) {
  std::map<std::vector<std::size_t>, double> diff = p;
  for (const auto& [k, v] : q) diff[k] -= v;
  double s = 0.0;
  for (const auto& [k, v] : diff) s += std::abs(v);
  return 0.5 * s;
}

inline Checks photodetection() {
  Checks c;
  double worst = 0.0;
  for (std::size_t n = 1; n <= 5; ++n)
    for (double zeta : {0.5, 2.0, 50.0}) {
      const auto p = photocount_distribution(n, zeta);
      const double q = 1.0 - std::exp(-zeta);
      for (std::size_t k = 0; k <= n; ++k) worst = std::max(worst, std::abs(p[k] - binomial_oracle(n, k, q)));
    }
  c.metric("max_dp", worst);
  c.check(worst <= 1e-12, "binomial");
  const Ket psi = fock_number(2, 2);
  double prev = 1.0;
  for (auto [N, gt] : {std::pair<std::size_t, double>{4, 0.1}, {8, 0.0707}, {12, 0.0577}}) {
    const PhotonCounterConfig cfg{N, gt, 1.0, 2};
    const auto counts = count_distribution(photodetect_exact(psi, cfg));
    const auto closed = photocount_distribution(2, cfg.zeta());
    double tv = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) tv += std::abs(counts[k] - (k < 3 ? closed[k] : 0.0));
    tv *= 0.5;
    c.metric("tv_N" + std::to_string(N), tv);
    c.check(tv <= 5.0 * N * gt * gt * gt, "tv budget N=" + std::to_string(N));
    c.check(tv < prev, "tv monotone N=" + std::to_string(N));
    prev = tv;
  }
  return c;
}

inline Checks homodyne() {
  Checks c;
  const double b = 8.0;
  const HomodyneConfig cfg{b, 0.0, 160};
  const auto dist = homodyne_distributions(fock_number(0, 2), cfg);
  double m = 0, m2 = 0, me = 0, me2 = 0;
  for (std::size_t i = 0; i < dist.n_values.size(); ++i) {
    const double N = static_cast<double>(dist.n_values[i]);
    m += N * dist.pN[i];
    m2 += N * N * dist.pN[i];
    me += N * dist.pN_exact[i];
    me2 += N * N * dist.pN_exact[i];
  }
  const double dev = std::max({std::abs(m - b * b), std::abs(m2 - m * m - b * b), std::abs(me - b * b),
                               std::abs(me2 - me * me - b * b)});
  c.metric("pN_moment_dev", dev);
  c.check(dev <= 1e-6, "pN moments");

  const Ket coh = coherent_ket(1.0, 20).normalized();
  const std::size_t Npk = 64;
  const double Dpk = std::round(b);  // x peak sqrt2 at phi = 0 -> D = x |beta| / sqrt2
  const cplx e = homodyne_matrix_element_exact(coh, cfg.beta(), Npk, Dpk);
  const auto a = homodyne_matrix_element_asymptotic(coh, b, cfg.phi, Npk, Dpk);
  const double rel = std::abs(e - a.value) / std::abs(e);
  c.metric("asym_rel_err", rel);
  c.check(rel < 0.05, "asymptotic element");

  double s = 0.0;
  for (std::size_t N = 0; N <= cfg.fock_cutoff; ++N)
    for (std::size_t k = 0; k <= N; ++k)
      s += std::norm(homodyne_matrix_element_exact(coh, cfg.beta(), N, static_cast<double>(k) - 0.5 * N));
  c.metric("completeness_dev", std::abs(s - 1.0));
  c.check(std::abs(s - 1.0) <= 1e-6, "completeness");
  return c;
}

inline Checks measurement_algebra() {
  Checks c;
  Rng rng = make_stream(2026, 3);
  double proj = 0, kraus = 0, unit = 0, chan = 0, born = 0, repeat = 0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 1 + t % 8;
    const CMatrix h = t % 2 ? random_hermitian(n, rng) : random_degenerate_hermitian(n, rng);
    const Operator obs(RegisterLayout::single("p", static_cast<std::size_t>(n)), h);
    const auto sd = spectral_decompose(obs);
    const CMatrix I = CMatrix::Identity(n, n);
    CMatrix sum = CMatrix::Zero(n, n);
    for (std::size_t m = 0; m < sd.outcome_count(); ++m) {
      const CMatrix& p = sd.projectors[m].matrix();
      sum += p;
      for (std::size_t k = 0; k < sd.outcome_count(); ++k)
        proj = std::max(proj, max_abs_diff(p * sd.projectors[k].matrix(), k == m ? p : CMatrix::Zero(n, n)));
    }
    proj = std::max({proj, max_abs_diff(sum, I), max_abs_diff(sd.reconstruct().matrix(), h)});
    kraus = std::max(kraus, max_abs_diff(kraus_from_observable(sd).completeness_sum(), I));
    const auto mu = measurement_unitary(sd);
    const CMatrix& U = mu.unitary.matrix();
    unit = std::max(unit, max_abs_diff(U.adjoint() * U, CMatrix::Identity(U.rows(), U.cols())));
    CMatrix ks = CMatrix::Zero(n, n);
    for (const auto& k : extract_kraus(mu)) ks += k.matrix().adjoint() * k.matrix();
    kraus = std::max(kraus, max_abs_diff(ks, I));

    const auto rho = random_density(sd.layout, rng);
    CMatrix oracle = CMatrix::Zero(n, n);
    for (const auto& p : sd.projectors) oracle += p.matrix() * rho.matrix() * p.matrix();
    chan = std::max(chan, max_abs_diff(apply_channel(mu, rho).matrix(), oracle));
    double total = 0.0;
    for (std::size_t m = 0; m < sd.outcome_count(); ++m) {
      const auto r = apply_selective(mu, rho, m);
      total += r.probability;
      if (r.state) repeat = std::max(repeat, std::abs(apply_selective(mu, *r.state, m).probability - 1.0));
    }
    born = std::max(born, std::abs(total - 1.0));
  }
  c.metric("projector", proj);
  c.metric("kraus", kraus);
  c.metric("unitarity", unit);
  c.metric("channel", chan);
  c.metric("born_sum", born);
  c.metric("repeat", repeat);
  c.check(proj <= 1e-9, "projectors");
  c.check(kraus <= 1e-9, "kraus completeness");
  c.check(unit <= 1e-9, "unitarity");
  c.check(chan <= 1e-10, "channel vs kraus");
  c.check(born <= 1e-10, "born sum");
  c.check(repeat <= 1e-10, "repeatability");
  return c;
}

inline RegisterLayout bell_layout() {
  return RegisterLayout({{"a", 2, RegisterKind::physical},
                         {"b", 2, RegisterKind::physical},
                         {"ma", 2, RegisterKind::stinespring},
                         {"mb", 2, RegisterKind::stinespring}});
}

inline DensityMatrix bell_state() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::numbers::sqrt2;
  return DensityMatrix::pure(Ket(RegisterLayout({{"a", 2}, {"b", 2}}), v));
}

inline ProtocolSpec bell_protocol(const CMatrix& obs_a, const CMatrix& obs_b, bool b_first = false) {
  MeasureStep ma{qubit_op(obs_a), {"a"}, "ma"};
  MeasureStep mb{qubit_op(obs_b), {"b"}, "mb"};
  ProtocolSpec spec{bell_layout(), {}};
  if (b_first) spec.instructions = {mb, ma};
  else spec.instructions = {ma, mb};
  return spec;
}

inline Checks bell() {
  Checks c;
  const RegisterLayout l = bell_layout();
  const double r = 1.0 / std::numbers::sqrt2;
  auto vec = [&](std::initializer_list<std::pair<std::vector<std::size_t>, cplx>> terms) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(l.total_dim()));
    for (const auto& [d, a] : terms) v(static_cast<Eigen::Index>(l.flat_index(d))) += a;
    return v;
  };
  const auto zz = run_dilated(bell_protocol(pauli::Z(), pauli::Z()), bell_state());
  const CVector ghz = vec({{{0, 0, 0, 0}, r}, {{1, 1, 1, 1}, r}});
  const double dz = max_abs_diff(zz.final_state.matrix(), ghz * ghz.adjoint());
  const auto joint = joint_distribution(zz, {"ma", "mb"});
  double corr = 0.0;
  for (const auto& [k, p] : joint) corr += (k[0] == k[1] ? 1.0 : -1.0) * p;
  c.metric("zz_state", dz);
  c.metric("zz_corr", corr);
  c.check(dz < 1e-12, "zz state");
  c.check(std::abs(corr - 1.0) < 1e-12, "zz correlation");
  double loc = 0.0;
  for (const char* q : {"a", "b"})
    loc = std::max(loc, max_abs_diff(partial_trace(trace_out_stinespring(zz.final_state), {q}).matrix(),
                                     0.5 * CMatrix::Identity(2, 2)));
  c.metric("local_marginal", loc);
  c.check(loc < 1e-12, "local marginals");

  const auto zx = run_dilated(bell_protocol(pauli::Z(), pauli::X()), bell_state());
  const CVector four = vec({{{0, 0, 0, 0}, 0.5 * r}, {{0, 1, 0, 0}, 0.5 * r},
                            {{0, 0, 0, 1}, 0.5 * r}, {{0, 1, 0, 1}, -0.5 * r},
                            {{1, 0, 1, 0}, 0.5 * r}, {{1, 1, 1, 0}, 0.5 * r},
                            {{1, 0, 1, 1}, -0.5 * r}, {{1, 1, 1, 1}, 0.5 * r}});
  const double dzx = max_abs_diff(zx.final_state.matrix(), four * four.adjoint());
  c.metric("zx_state", dzx);
  c.check(dzx < 1e-12, "zx four-branch state");

  double perm = 0.0;
  for (const auto& [oa, ob] : {std::pair<CMatrix, CMatrix>{pauli::Z(), pauli::Z()}, {pauli::Z(), pauli::X()}}) {
    const auto f = run_dilated(bell_protocol(oa, ob, false), bell_state());
    const auto g = run_dilated(bell_protocol(oa, ob, true), bell_state());
    perm = std::max(perm, max_abs_diff(f.final_state.matrix(), g.final_state.matrix()));
  }
  c.metric("order_perm", perm);
  c.check(perm < 1e-10, "order permutation");
  return c;
}

inline Checks decoherence() {
  Checks c;
  Rng rng = make_stream(2026, 5);
  const CMatrix h = Eigen::Vector3d(1, 1, -1).cast<cplx>().asDiagonal();
  const CMatrix u = haar_unitary(3, rng);
  const auto sd = spectral_decompose(Operator(RegisterLayout::single("p", 3), u * h * u.adjoint()));
  // Non-minimal ss register: outcome 0 spread over 1 state, outcome 1 over 2.
  const std::vector<std::size_t> sizes{1, 2};
  const auto blocks = SymmetryBlocks::from_multiplicities(sizes);
  const auto mu = nonminimal_measurement(sd, sizes);

  const auto rho0 = random_density(sd.layout, rng);
  const auto post = dilate(mu, rho0);
  const auto exact = dephase_exact(post, blocks);
  CMatrix oracle = CMatrix::Zero(9, 9);
  for (std::size_t m = 0; m < sizes.size(); ++m) {
    const CMatrix pr = sd.projectors[m].matrix() * rho0.matrix() * sd.projectors[m].matrix();
    CMatrix pm = CMatrix::Zero(3, 3);
    for (std::size_t k : blocks.blocks()[m]) pm(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    pm /= static_cast<double>(blocks.blocks()[m].size());
    oracle += tensor(Operator(RegisterLayout::single("x", 3), pr), Operator(RegisterLayout::single("y", 3), pm)).matrix();
  }
  const double d = max_abs_diff(exact.matrix(), oracle);
  c.metric("exact_vs_mixture", d);
  c.check(d <= 1e-10, "dephase_exact");
  const double inv = max_abs_diff(partial_trace(exact, {"p"}).matrix(), partial_trace(post, {"p"}).matrix());
  c.metric("physical_invariance", inv);
  c.check(inv <= 1e-12, "physical invariance");
  for (std::size_t S : {100u, 1000u, 10000u}) {
    const double td = trace_distance(sampled_dephase(post, blocks, S, 7000 + S).matrix(), exact.matrix());
    c.metric("td_S" + std::to_string(S), td);
    c.check(td < 5.0 / std::sqrt(static_cast<double>(S)), "monte carlo S=" + std::to_string(S));
  }
  return c;
}

inline Checks stern_gerlach() {
  Checks c;
  SGConfig cfg;
  cfg.c_plus = std::sqrt(0.4);
  cfg.c_minus = std::polar(std::sqrt(0.6), 0.9);
  const double t = cfg.t_exit();
  const auto p0 = sg_initial_packet(cfg);
  const auto p = sg_split_step(cfg, p0, t, 400);
  double zrel = 0.0, prob = 0.0, var_rel = 0.0, printed_rel = 0.0;
  const auto heis = sg_heisenberg_z(cfg, t, 0.0, 2);
  for (int s : {+1, -1}) {
    const double want = heis[s > 0 ? 0 : 1];
    zrel = std::max(zrel, std::abs(p.first_moment(s) - want) / std::abs(want - cfg.z0));
    prob = std::max(prob, std::abs(p.mass(s) - std::norm(cfg.amplitude(s))));
    const double r = t / (2.0 * cfg.M * cfg.delta * cfg.delta);
    const double derived = cfg.delta * cfg.delta * (1.0 + r * r);
    const double printed = cfg.delta * cfg.delta * (1.0 - r * r);
    var_rel = std::max(var_rel, std::abs(p.variance(s) - derived) / derived);
    printed_rel = std::max(printed_rel, std::abs(p.variance(s) - printed) / derived);
  }
  c.metric("z_rel", zrel);
  c.metric("prob_dev", prob);
  c.metric("var_rel_derived", var_rel);
  c.metric("var_rel_printed", printed_rel);
  c.check(zrel <= 1e-4, "ehrenfest mean");
  c.check(prob <= 1e-8, "branch probabilities");
  c.check(var_rel <= 1e-6, "derived variance");
  const auto o = sg_outcome_distribution(cfg, t);
  const double mis = std::max(std::abs(sg_wrong_sign_mass(cfg, p, +1) - o.misbin_plus),
                              std::abs(sg_wrong_sign_mass(cfg, p, -1) - o.misbin_minus));
  c.metric("misbin_dev", mis);
  c.check(mis <= 1e-4, "misbinning tail");
  const auto ref = sg_split_step(cfg, p0, t, 4096);
  auto l2 = [&](const GridWavepacket& a) {
    return std::sqrt(((a.plus - ref.plus).squaredNorm() + (a.minus - ref.minus).squaredNorm()) * a.spacing());
  };
  const double ratio = l2(sg_split_step(cfg, p0, t, 32)) / l2(sg_split_step(cfg, p0, t, 64));
  c.metric("strang_ratio", ratio);
  c.check(std::abs(ratio - 4.0) <= 0.3, "strang order");
  return c;
}

inline Checks qubit_readout() {
  Checks c;
  const double fn = fluorescence_measure(1.0, 0.0, {0.5, 10}).p_false_negative;
  c.metric("p_false_negative", fn);
  c.check(fn == 0.03125, "false negative");
  double worst = 0.0;
  int points = 0;
  for (double alpha : {0.1, 0.5, 1.0, 2.0, 3.0})
    for (double theta : {0.2, 0.6, 1.0, std::numbers::pi / 2}) {
      const double want = 0.5 * erfc_oracle(std::numbers::sqrt2 * alpha * std::sin(theta));
      worst = std::max(worst, std::abs(dispersive_readout(1.0, 0.0, {alpha, theta}).p_error - want));
      ++points;
    }
  c.metric("erfc_dev", worst);
  c.check(points == 20 && worst <= 1e-10, "erfc grid");
  const double lim = dispersive_error(1e-12, 1.0);
  c.metric("limit", lim);
  c.check(std::abs(lim - 0.5) < 1e-10, "small-argument limit");
  bool mono = true;
  double prev = 0.5 + 1e-9;
  for (double x = 0.0; x <= 6.0; x += 0.01) {
    const double v = dispersive_error(x, std::numbers::pi / 2);
    mono = mono && v < prev;
    prev = v;
  }
  c.check(mono, "monotone");
  return c;
}

inline Checks adaptive() {
  Checks c;
  Rng rng = make_stream(2026, 8);
  const RegisterLayout l({{"a", 2}, {"b", 2},
                          {"m1", 2, RegisterKind::stinespring}, {"m2", 2, RegisterKind::stinespring},
                          {"m3", 2, RegisterKind::stinespring}});
  const auto o2 = qubit_op(random_hermitian(2, rng));
  const Operator u(RegisterLayout({{"x", 2}, {"y", 2}}), haar_unitary(4, rng));
  const ProtocolSpec spec{l,
                          {MeasureStep{qubit_op(pauli::Z()), {"a"}, "m1"},
                           FeedbackStep{Condition::equals("m1", 1), qubit_op(named_gate("H")), {"b"}},
                           UnitaryStep{u, {"a", "b"}},
                           MeasureStep{o2, {"b"}, "m2"},
                           CondMeasureStep{Condition::any_of({{{"m1", 0}, {"m2", 1}}}), qubit_op(pauli::X()), {"a"}, "m3"}}};
  const auto psi = random_ket(RegisterLayout({{"a", 2}, {"b", 2}}), rng);
  const auto exact = joint_distribution(run_dilated(spec, DensityMatrix::pure(psi)), {"m1", "m2", "m3"});
  const TrajectorySampler sampler(spec);
  const int S = 10000;
  std::map<std::vector<std::size_t>, double> emp;
  for (int s = 0; s < S; ++s) {
    auto rec = sampler.sample(psi, static_cast<std::uint64_t>(s));
    emp[{rec.outcomes["m1"], rec.outcomes["m2"], rec.outcomes["m3"]}] += 1.0 / S;
  }
  const double tv = tv_distance(emp, exact);
  c.metric("tv", tv);
  c.check(tv < 5.0 / std::sqrt(static_cast<double>(S)), "sampler vs dilated");

  const ProtocolSpec fb{RegisterLayout({{"q", 2}, {"m", 2, RegisterKind::stinespring}}),
                        {MeasureStep{qubit_op(pauli::Z()), {"q"}, "m"},
                         FeedbackStep{Condition::equals("m", 1), qubit_op(pauli::X()), {"q"}}}};
  CMatrix cnot = CMatrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  CMatrix cx_ss = CMatrix::Zero(4, 4);  // X on q controlled by m = 1
  cx_ss(0, 0) = cx_ss(2, 2) = cx_ss(1, 3) = cx_ss(3, 1) = 1.0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto q = random_ket(RegisterLayout::single("q", 2), rng);
    CVector in = CVector::Zero(4);
    in(0) = q.amplitudes()(0);
    in(2) = q.amplitudes()(1);
    const CVector out = cx_ss * cnot * in;
    const auto run = run_dilated(fb, DensityMatrix::pure(q));
    worst = std::max(worst, max_abs_diff(run.final_state.matrix(), out * out.adjoint()));
  }
  c.metric("feedback_dev", worst);
  c.check(worst <= 1e-10, "feedback compilation");
  return c;
}

}  // namespace acceptance

struct CriterionSpec {
  int id;
  const char* name;
  double limit_seconds;
  std::function<acceptance::Checks()> run;
};

inline std::vector<CriterionSpec> acceptance_criteria() {
  return {{1, "binomial photodetection", 30.0, acceptance::photodetection},
          {2, "homodyne", 60.0, acceptance::homodyne},
          {3, "measurement algebra", 20.0, acceptance::measurement_algebra},
          {4, "bell scenarios", 0.0, acceptance::bell},
          {5, "decoherence", 60.0, acceptance::decoherence},
          {6, "stern-gerlach", 60.0, acceptance::stern_gerlach},
          {7, "fluorescence and dispersive", 0.0, acceptance::qubit_readout},
          {8, "adaptive engine", 0.0, acceptance::adaptive}};
}

inline CriterionResult run_criterion(const CriterionSpec& spec) {
  CriterionResult r{spec.id, spec.name, false, "", 0.0, spec.limit_seconds};
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto checks = spec.run();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = checks.ok();
    r.detail = checks.summary();
  } catch (const std::exception& e) {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.detail = std::string("exception: ") + e.what();
  }
  if (r.limit_seconds > 0.0 && r.seconds > r.limit_seconds) {
    r.pass = false;
    r.detail += " FAILED:runtime";
  }
  return r;
}

inline std::string format_result(const CriterionResult& r, bool with_time = true) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail;
  if (with_time) {
    os.precision(3);
    os << " (" << std::fixed << r.seconds << " s";
    if (r.limit_seconds > 0.0) os << " / limit " << r.limit_seconds << " s";
    os << ")";
  }
  return os.str();
}

}  // namespace stinemeas
