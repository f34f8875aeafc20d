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

#include <gtest/gtest.h>

#include "stinemeas/protocol.hpp"

namespace sm = stinemeas;
using sm::CMatrix;
using sm::CVector;
using sm::cplx;
using sm::RegisterKind;
using sm::RegisterLayout;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

RegisterLayout bell_layout() {
  return RegisterLayout({{"a", 2, RegisterKind::physical},
                         {"b", 2, RegisterKind::physical},
                         {"ma", 2, RegisterKind::stinespring},
                         {"mb", 2, RegisterKind::stinespring}});
}

sm::Ket bell_ket() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = kR;
  return sm::Ket(RegisterLayout({{"a", 2}, {"b", 2}}), v);
}

sm::ProtocolSpec bell_spec(const CMatrix& obs_a, const CMatrix& obs_b, bool b_first = false) {
  sm::ProtocolSpec spec{bell_layout(), {}};
  sm::MeasureStep ma{sm::qubit_op(obs_a), {"a"}, "ma"};
  sm::MeasureStep mb{sm::qubit_op(obs_b), {"b"}, "mb"};
  if (b_first) spec.instructions = {mb, ma};
  else spec.instructions = {ma, mb};
  return spec;
}

CVector dilated_vector(const RegisterLayout& l, std::initializer_list<std::pair<std::vector<std::size_t>, cplx>> terms) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(l.total_dim()));
  for (const auto& [digits, c] : terms) v(static_cast<Eigen::Index>(l.flat_index(digits))) += c;
  return v;
}

double tv(const std::map<std::vector<std::size_t>, double>& p, const std::map<std::vector<std::size_t>, double>& q) {
  std::set<std::vector<std::size_t>> keys;
  for (const auto& [k, v] : p) keys.insert(k);
  for (const auto& [k, v] : q) keys.insert(k);
  double s = 0.0;
  for (const auto& k : keys) {
    const double a = p.count(k) ? p.at(k) : 0.0, b = q.count(k) ? q.at(k) : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

}  // namespace

TEST(RunDilated, EmptyProtocol) {
  sm::ProtocolSpec spec{bell_layout(), {}};
  sm::Rng rng(1);
  auto rho0 = sm::random_density(spec.physical_layout(), rng);
  auto run = sm::run_dilated(spec, rho0);
  auto expect = sm::tensor(rho0, sm::DensityMatrix::pure(sm::Ket::basis(
                                     RegisterLayout({{"ma", 2, RegisterKind::stinespring},
                                                     {"mb", 2, RegisterKind::stinespring}}),
                                     0)));
  EXPECT_LT(sm::max_abs_diff(run.final_state.matrix(), expect.matrix()), 1e-15);
}

TEST(RunDilated, BellZZIsGhzForm) {
  auto run = sm::run_dilated(bell_spec(sm::pauli::Z(), sm::pauli::Z()), sm::DensityMatrix::pure(bell_ket()));
  CVector ghz = dilated_vector(bell_layout(), {{{0, 0, 0, 0}, kR}, {{1, 1, 1, 1}, kR}});
  EXPECT_LT(sm::max_abs_diff(run.final_state.matrix(), ghz * ghz.adjoint()), 1e-15);
  EXPECT_NEAR(run.final_state.trace(), 1.0, 1e-10);
  auto joint = sm::joint_distribution(run, {"ma", "mb"});
  EXPECT_NEAR((joint[{0, 0}] + joint[{1, 1}]), 1.0, 1e-15);
  EXPECT_NEAR(run.outcome_marginals["ma"][0], 0.5, 1e-15);
}

TEST(RunDilated, FeedbackMatchesMatrixProduct) {
  RegisterLayout l({{"q", 2}, {"m", 2, RegisterKind::stinespring}});
  sm::ProtocolSpec spec{l,
                        {sm::MeasureStep{sm::qubit_op(sm::pauli::Z()), {"q"}, "m"},
                         sm::FeedbackStep{sm::Condition::equals("m", 1), sm::qubit_op(sm::pauli::X()), {"q"}}}};
  auto minus = sm::DensityMatrix::pure(sm::qubit_ket(kR, -kR));
  auto run = sm::run_dilated(spec, minus);
  auto phys = sm::trace_out_stinespring(run.final_state);
  CMatrix p0 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  EXPECT_LT(sm::max_abs_diff(phys.matrix(), p0), 1e-15);

  sm::Rng rng(3);
  CMatrix cnot = sm::named_gate("CNOT");
  CMatrix P0 = p0, P1 = CMatrix::Identity(2, 2) - p0;
  CMatrix fb = sm::tensor(sm::qubit_op(sm::pauli::I(), "x"), sm::qubit_op(P0, "y")).matrix() +
               sm::tensor(sm::qubit_op(sm::pauli::X(), "x"), sm::qubit_op(P1, "y")).matrix();
  for (int t = 0; t < 10; ++t) {
    auto psi = sm::random_ket(RegisterLayout::single("q", 2), rng);
    CVector in = sm::tensor(psi, sm::Ket::basis(RegisterLayout::single("m", 2), 0)).amplitudes();
    CVector out = fb * cnot * in;
    auto r = sm::run_dilated(spec, sm::DensityMatrix::pure(psi));
    EXPECT_LT(sm::max_abs_diff(r.final_state.matrix(), out * out.adjoint()), 1e-10);
  }
}

TEST(MarginalGiven, BellCases) {
  auto run = sm::run_dilated(bell_spec(sm::pauli::Z(), sm::pauli::Z()), sm::DensityMatrix::pure(bell_ket()));
  auto r = sm::marginal_given(run, {{"ma", 0}, {"mb", 0}});
  EXPECT_NEAR(r.probability, 0.5, 1e-15);
  ASSERT_TRUE(r.state);
  EXPECT_NEAR(r.state->matrix()(0, 0).real(), 1.0, 1e-15);
  auto z = sm::marginal_given(run, {{"ma", 0}, {"mb", 1}});
  EXPECT_EQ(z.probability, 0.0);
  EXPECT_FALSE(z.state);
  // Local marginal is maximally mixed.
  auto loc = sm::partial_trace(sm::trace_out_stinespring(run.final_state), {"a"});
  EXPECT_LT(sm::max_abs_diff(loc.matrix(), 0.5 * CMatrix::Identity(2, 2)), 1e-12);

  auto zx = sm::run_dilated(bell_spec(sm::pauli::Z(), sm::pauli::X()), sm::DensityMatrix::pure(bell_ket()));
  double total = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      auto m = sm::marginal_given(zx, {{"ma", i}, {"mb", j}});
      EXPECT_NEAR(m.probability, 0.25, 1e-15);
      total += m.probability;
    }
  EXPECT_NEAR(total, 1.0, 1e-9);
  // Four branches, minus sign on the (1, -) branch.
  const RegisterLayout l = bell_layout();
  CVector v = CVector::Zero(16);
  auto add = [&](std::size_t a, CVector b, std::size_t ma, std::size_t mb, double s) {
    for (std::size_t k = 0; k < 2; ++k) v(static_cast<Eigen::Index>(l.flat_index({a, k, ma, mb}))) += s * b(k);
  };
  CVector plus(2), minus(2);
  plus << kR, kR;
  minus << kR, -kR;
  add(0, plus, 0, 0, 0.5);
  add(0, minus, 0, 1, 0.5);
  add(1, plus, 1, 0, 0.5);
  add(1, minus, 1, 1, -0.5);
  EXPECT_LT(sm::max_abs_diff(zx.final_state.matrix(), v * v.adjoint()), 1e-15);
}

TEST(MarginalGiven, MatchesSelectiveChain) {
  sm::Rng rng(8);
  RegisterLayout l({{"p", 3}, {"q", 2}, {"m1", 3, RegisterKind::stinespring}, {"m2", 2, RegisterKind::stinespring}});
  for (int t = 0; t < 5; ++t) {
    sm::Operator o1(RegisterLayout::single("x", 3), sm::random_degenerate_hermitian(3, rng));
    sm::Operator o2(RegisterLayout::single("y", 2), sm::random_hermitian(2, rng));
    sm::ProtocolSpec spec{l, {sm::MeasureStep{o1, {"p"}, "m1"}, sm::MeasureStep{o2, {"q"}, "m2"}}};
    auto ra = sm::random_density(RegisterLayout::single("p", 3), rng);
    auto rb = sm::random_density(RegisterLayout::single("q", 2), rng);
    auto run = sm::run_dilated(spec, sm::tensor(ra, rb));
    auto sd1 = sm::spectral_decompose(o1);
    auto sd2 = sm::spectral_decompose(o2);
    auto mu1 = sm::measurement_unitary(sd1);
    auto mu2 = sm::measurement_unitary(sd2);
    double total = 0.0;
    for (std::size_t i = 0; i < sd1.outcome_count(); ++i)
      for (std::size_t j = 0; j < sd2.outcome_count(); ++j) {
        auto r = sm::marginal_given(run, {{"m1", i}, {"m2", j}});
        auto s1 = sm::apply_selective(mu1, sm::DensityMatrix(mu1.physical_layout(), ra.matrix()), i);
        auto s2 = sm::apply_selective(mu2, sm::DensityMatrix(mu2.physical_layout(), rb.matrix()), j);
        EXPECT_NEAR(r.probability, s1.probability * s2.probability, 1e-12);
        total += r.probability;
        if (r.state && s1.state && s2.state) {
          EXPECT_LT(sm::max_abs_diff(r.state->matrix(), sm::tensor(*s1.state, *s2.state).matrix()), 1e-10);
        }
      }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(BornFromDilated, Examples) {
  RegisterLayout l({{"q", 2}, {"m", 2, RegisterKind::stinespring}});
  sm::ProtocolSpec spec{l, {sm::MeasureStep{sm::qubit_op(sm::pauli::Z()), {"q"}, "m"}}};
  auto r1 = sm::run_dilated(spec, sm::DensityMatrix::pure(sm::qubit_ket(kR, kR)));
  EXPECT_NEAR(sm::born_from_dilated(r1, "m", 0), 0.5, 1e-15);
  auto r2 = sm::run_dilated(spec, sm::DensityMatrix::pure(sm::qubit_ket(std::sqrt(0.3), std::sqrt(0.7))));
  EXPECT_NEAR(sm::born_from_dilated(r2, "m", 1), 0.7, 1e-15);
  EXPECT_THROW(sm::born_from_dilated(r2, "q", 0), sm::InvalidArgument);

  sm::Rng rng(19);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 3);
    RegisterLayout lay({{"p", d}, {"m", d, RegisterKind::stinespring}});
    sm::Operator obs(RegisterLayout::single("x", d), sm::random_degenerate_hermitian(static_cast<Eigen::Index>(d), rng));
    sm::ProtocolSpec s{lay, {sm::MeasureStep{obs, {"p"}, "m"}}};
    auto rho = sm::random_density(RegisterLayout::single("p", d), rng);
    auto run = sm::run_dilated(s, rho);
    auto sd = sm::spectral_decompose(obs);
    auto mu = sm::measurement_unitary(sd);
    for (std::size_t m = 0; m < sd.outcome_count(); ++m)
      EXPECT_NEAR(sm::born_from_dilated(run, "m", m),
                  sm::apply_selective(mu, sm::DensityMatrix(mu.physical_layout(), rho.matrix()), m).probability,
                  1e-10);
  }
}

TEST(Validate, Errors) {
  RegisterLayout l({{"q", 2}, {"m", 2, RegisterKind::stinespring}, {"n", 2, RegisterKind::stinespring}});
  auto z = sm::qubit_op(sm::pauli::Z());
  // Condition on a later register.
  sm::ProtocolSpec later{l,
                         {sm::FeedbackStep{sm::Condition::equals("m", 1), sm::qubit_op(sm::pauli::X()), {"q"}},
                          sm::MeasureStep{z, {"q"}, "m"}}};
  EXPECT_THROW(sm::validate(later), sm::InvalidArgument);
  sm::ProtocolSpec twice{l, {sm::MeasureStep{z, {"q"}, "m"}, sm::MeasureStep{z, {"q"}, "m"}}};
  EXPECT_THROW(sm::validate(twice), sm::InvalidArgument);
  sm::ProtocolSpec ss_target{l, {sm::UnitaryStep{sm::qubit_op(sm::pauli::X()), {"m"}}}};
  EXPECT_THROW(sm::validate(ss_target), sm::InvalidArgument);
  sm::ProtocolSpec phys_ss{l, {sm::MeasureStep{z, {"q"}, "q"}}};
  EXPECT_THROW(sm::validate(phys_ss), sm::InvalidArgument);
  sm::ProtocolSpec non_unitary{l, {sm::UnitaryStep{sm::qubit_op(2.0 * sm::pauli::X()), {"q"}}}};
  EXPECT_THROW(sm::validate(non_unitary), sm::InvalidArgument);
  RegisterLayout small({{"p", 3}, {"m", 2, RegisterKind::stinespring}});
  CMatrix d3 = Eigen::Vector3d(1, 2, 3).cast<cplx>().asDiagonal();
  sm::ProtocolSpec too_small{small, {sm::MeasureStep{sm::Operator(RegisterLayout::single("x", 3), d3), {"p"}, "m"}}};
  EXPECT_THROW(sm::validate(too_small), sm::InvalidArgument);
}

TEST(Properties, DisjointMeasurementsCommute) {
  sm::Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    CMatrix oa = sm::random_hermitian(2, rng), ob = sm::random_hermitian(2, rng);
    auto rho = sm::random_density(RegisterLayout({{"a", 2}, {"b", 2}}), rng);
    auto r1 = sm::run_dilated(bell_spec(oa, ob, false), rho);
    auto r2 = sm::run_dilated(bell_spec(oa, ob, true), rho);
    EXPECT_LT(sm::max_abs_diff(r1.final_state.matrix(), r2.final_state.matrix()), 1e-10);
  }
}

TEST(Properties, NoFeedbackEqualsChannelComposition) {
  sm::Rng rng(13);
  RegisterLayout l({{"a", 2}, {"b", 2}, {"c", 2},
                    {"m1", 2, RegisterKind::stinespring}, {"m2", 2, RegisterKind::stinespring},
                    {"m3", 2, RegisterKind::stinespring}});
  RegisterLayout phys({{"a", 2}, {"b", 2}, {"c", 2}});
  for (int t = 0; t < 3; ++t) {
    sm::Operator u(RegisterLayout({{"x", 2}, {"y", 2}}), sm::haar_unitary(4, rng));
    auto o1 = sm::qubit_op(sm::random_hermitian(2, rng));
    auto o2 = sm::qubit_op(sm::random_hermitian(2, rng));
    auto o3 = sm::qubit_op(sm::random_hermitian(2, rng));
    sm::ProtocolSpec spec{l,
                          {sm::MeasureStep{o1, {"a"}, "m1"}, sm::UnitaryStep{u, {"a", "c"}},
                           sm::MeasureStep{o2, {"c"}, "m2"}, sm::MeasureStep{o3, {"b"}, "m3"}}};
    auto rho = sm::random_density(phys, rng);
    auto run = sm::run_dilated(spec, rho);
    // Oracle: per-measurement projector sums applied in order.
    auto pinch = [&](const sm::Operator& o, const std::string& target, const CMatrix& r) {
      CMatrix out = CMatrix::Zero(r.rows(), r.cols());
      for (const auto& p : sm::spectral_decompose(o).projectors) {
        CMatrix e = sm::embed(p, {target}, phys).matrix();
        out += e * r * e;
      }
      return out;
    };
    CMatrix r = pinch(o1, "a", rho.matrix());
    CMatrix ue = sm::embed(u, {"a", "c"}, phys).matrix();
    r = ue * r * ue.adjoint();
    r = pinch(o2, "c", r);
    r = pinch(o3, "b", r);
    EXPECT_LT(sm::max_abs_diff(sm::trace_out_stinespring(run.final_state).matrix(), r), 1e-10);
  }
}

TEST(Properties, PhysicalPartUnaltered) {
  sm::Rng rng(4);
  RegisterLayout l({{"p", 3}, {"m", 3, RegisterKind::stinespring}});
  CMatrix h = Eigen::Vector3d(1, -1, 1).cast<cplx>().asDiagonal();
  sm::Operator obs(RegisterLayout::single("x", 3), h);
  auto sd = sm::spectral_decompose(obs);
  sm::ProtocolSpec spec{l, {sm::MeasureStep{obs, {"p"}, "m"}}};
  auto psi = sm::random_ket(RegisterLayout::single("p", 3), rng);
  auto run = sm::run_dilated(spec, sm::DensityMatrix::pure(psi));
  // Rank one; recover the dilated ket from the dominant eigenvector.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(run.final_state.matrix());
  CVector big = es.eigenvectors().col(8);
  const cplx phase = big(0) == cplx(0) ? cplx(1) : psi.amplitudes()(0) / big(0);
  big *= phase / std::abs(phase);
  for (std::size_t m = 0; m < 3; ++m) {
    CVector slice(3);
    for (std::size_t a = 0; a < 3; ++a) slice(static_cast<Eigen::Index>(a)) = big(static_cast<Eigen::Index>(l.flat_index({a, m})));
    CVector expect = m < sd.outcome_count() ? CVector(sd.projectors[m].matrix() * psi.amplitudes()) : CVector::Zero(3);
    EXPECT_LT((slice - expect).norm(), 1e-10);
  }
}

TEST(SampleTrajectory, Deterministic) {
  RegisterLayout l({{"q", 2}, {"m", 2, RegisterKind::stinespring}});
  sm::ProtocolSpec spec{l, {sm::MeasureStep{sm::qubit_op(sm::pauli::Z()), {"q"}, "m"}}};
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rec = sm::sample_trajectory(spec, sm::qubit_ket(1, 0, "q"), s);
    EXPECT_EQ(rec.outcomes.at("m"), 0u);
    EXPECT_NEAR(rec.probability, 1.0, 1e-15);
  }
  auto a = sm::sample_trajectory(spec, sm::qubit_ket(kR, kR, "q"), 77);
  auto b = sm::sample_trajectory(spec, sm::qubit_ket(kR, kR, "q"), 77);
  EXPECT_EQ(a.outcomes, b.outcomes);
}

TEST(SampleTrajectory, BellAlwaysEqual) {
  sm::TrajectorySampler sampler(bell_spec(sm::pauli::Z(), sm::pauli::Z()));
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto rec = sampler.sample(bell_ket(), s);
    EXPECT_EQ(rec.outcomes.at("ma"), rec.outcomes.at("mb"));
  }
}

TEST(SampleTrajectory, BinomialBand) {
  RegisterLayout l({{"q", 2}, {"m", 2, RegisterKind::stinespring}});
  sm::TrajectorySampler sampler({l, {sm::MeasureStep{sm::qubit_op(sm::pauli::Z()), {"q"}, "m"}}});
  const int S = 10000;
  int zeros = 0;
  for (int s = 0; s < S; ++s) zeros += sampler.sample(sm::qubit_ket(kR, kR, "q"), static_cast<std::uint64_t>(s)).outcomes.at("m") == 0;
  const double phat = static_cast<double>(zeros) / S;
  EXPECT_LT(std::abs(phat - 0.5), 3.0 * std::sqrt(0.25 / S));
}

TEST(SampleTrajectory, FeedbackProtocolTv) {
  RegisterLayout l({{"a", 2}, {"b", 2},
                    {"m1", 2, RegisterKind::stinespring}, {"m2", 2, RegisterKind::stinespring},
                    {"m3", 2, RegisterKind::stinespring}});
  sm::Rng rng(99);
  auto o2 = sm::qubit_op(sm::random_hermitian(2, rng));
  sm::Operator u(RegisterLayout({{"x", 2}, {"y", 2}}), sm::haar_unitary(4, rng));
  sm::ProtocolSpec spec{l,
                        {sm::MeasureStep{sm::qubit_op(sm::pauli::Z()), {"a"}, "m1"},
                         sm::FeedbackStep{sm::Condition::equals("m1", 1), sm::qubit_op(sm::named_gate("H")), {"b"}},
                         sm::UnitaryStep{u, {"a", "b"}},
                         sm::MeasureStep{o2, {"b"}, "m2"},
                         sm::CondMeasureStep{sm::Condition::any_of({{{"m1", 0}, {"m2", 1}}}),
                                             sm::qubit_op(sm::pauli::X()), {"a"}, "m3"}}};
  auto psi = sm::random_ket(RegisterLayout({{"a", 2}, {"b", 2}}), rng);
  auto run = sm::run_dilated(spec, sm::DensityMatrix::pure(psi));
  auto exact = sm::joint_distribution(run, {"m1", "m2", "m3"});
  sm::TrajectorySampler sampler(spec);
  const int S = 10000;
  std::map<std::vector<std::size_t>, double> emp;
  for (int s = 0; s < S; ++s) {
    auto rec = sampler.sample(psi, static_cast<std::uint64_t>(s));
    emp[{rec.outcomes["m1"], rec.outcomes["m2"], rec.outcomes["m3"]}] += 1.0 / S;
  }
  EXPECT_LT(tv(emp, exact), 5.0 / std::sqrt(S));
}

TEST(Json, RoundTripAndErrors) {
  sm::json j = sm::json::parse(R"({
    "registers": [{"label": "a", "dim": 2}, {"label": "b", "dim": 2},
                  {"label": "ma", "dim": 2, "kind": "stinespring"},
                  {"label": "mb", "dim": 2, "kind": "stinespring"}],
    "instructions": [
      {"type": "unitary", "targets": ["a"], "op": "H"},
      {"type": "unitary", "targets": ["a", "b"], "op": "CNOT"},
      {"type": "measure", "targets": ["a"], "observable": "Z", "ss_label": "ma"},
      {"type": "feedback", "condition": {"any_of": [[["ma", 1]]]}, "targets": ["b"], "op": "X"},
      {"type": "cond_measure", "condition": {"any_of": [[["ma", 0]]]}, "targets": ["b"],
       "observable": {"re": [1, 0, 0, -1], "im": [0, 0, 0, 0]}, "ss_label": "mb"}
    ]})");
  auto spec = sm::protocol_from_json(j);
  auto rho0 = sm::DensityMatrix::pure(sm::Ket::basis(spec.physical_layout(), 0));
  auto run = sm::run_dilated(spec, rho0);
  // Feedback undoes the correlation: b ends in |0>.
  auto pb = sm::partial_trace(sm::trace_out_stinespring(run.final_state), {"b"});
  EXPECT_NEAR(pb.matrix()(0, 0).real(), 1.0, 1e-12);
  auto again = sm::protocol_from_json(sm::protocol_to_json(spec));
  EXPECT_LT(sm::max_abs_diff(sm::run_dilated(again, rho0).final_state.matrix(), run.final_state.matrix()), 1e-15);

  auto bad = j;
  bad["instructions"][0]["extra"] = 1;
  EXPECT_THROW(sm::protocol_from_json(bad), sm::InvalidArgument);
  bad = j;
  bad["instructions"][0]["type"] = "teleport";
  EXPECT_THROW(sm::protocol_from_json(bad), sm::InvalidArgument);
  bad = j;
  bad["instructions"][0]["op"] = "CNOT";
  EXPECT_THROW(sm::protocol_from_json(bad), sm::InvalidArgument);
}
