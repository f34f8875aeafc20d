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

#include <cmath>
#include <numbers>

#include "stinemeas/sterngerlach.hpp"

namespace sm = stinemeas;
using sm::cplx;

namespace {

sm::SGConfig acceptance_config() { return sm::SGConfig{}; }

double l2(const sm::GridWavepacket& a, const sm::GridWavepacket& b) {
  return std::sqrt(((a.plus - b.plus).squaredNorm() + (a.minus - b.minus).squaredNorm()) * a.spacing());
}

// Plain Gaussian density with given mean and variance.
double gauss(double z, double m, double v) {
  return std::exp(-(z - m) * (z - m) / (2 * v)) / std::sqrt(2 * std::numbers::pi * v);
}

}  // namespace

TEST(SternGerlach, AnalyticInitialState) {
  auto cfg = acceptance_config();
  cfg.c_plus = std::polar(std::sqrt(0.3), 0.4);
  cfg.c_minus = std::sqrt(0.7);
  for (double z : {-0.5, 0.0, 0.13, 0.6}) {
    EXPECT_NEAR(std::abs(sm::sg_analytic(cfg, z, 0.0, +1) - cfg.c_plus * std::sqrt(gauss(z, 0.0, 0.04))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(sm::sg_analytic(cfg, z, 0.0, -1) - cfg.c_minus * std::sqrt(gauss(z, 0.0, 0.04))), 0.0, 1e-14);
  }
  auto g = sm::sg_sample(cfg, cfg.t_exit());
  EXPECT_NEAR(g.mass(+1), 0.3, 1e-6);
  EXPECT_NEAR(g.mass(-1), 0.7, 1e-6);
  for (int s : {+1, -1}) {
    for (std::size_t i = 0; i < g.points; i += 97)
      EXPECT_NEAR(std::norm(g.component(s)(static_cast<Eigen::Index>(i))),
                  std::norm(cfg.amplitude(s)) * gauss(g.z(i), sm::sg_branch_center(cfg, 1.0, s), sm::sg_branch_variance(cfg, 1.0)),
                  1e-13);
  }
}

TEST(SternGerlach, ZeroGradientIsFreeSpreading) {
  auto cfg = acceptance_config();
  cfg.b = 0.0;
  cfg.z0 = 0.7;
  auto g = sm::sg_sample(cfg, 0.8);
  EXPECT_NEAR(g.first_moment(+1), 0.7, 1e-10);
  EXPECT_NEAR(g.first_moment(-1), 0.7, 1e-10);
  auto p0 = sm::sg_initial_packet(cfg);
  cfg.B0 = 0.0;
  auto num = sm::sg_split_step(cfg, p0, 0.8, 50);
  EXPECT_LT(l2(num, sm::sg_sample(cfg, 0.8)), 1e-6);
}

TEST(SternGerlach, SplitStepMatchesAnalyticIncludingPhase) {
  auto cfg = acceptance_config();
  cfg.c_minus = std::polar(std::sqrt(0.5), 1.2);
  auto num = sm::sg_split_step(cfg, sm::sg_initial_packet(cfg), cfg.t_exit(), 400);
  EXPECT_LT(l2(num, sm::sg_sample(cfg, cfg.t_exit())), 1e-4);
  for (int s : {+1, -1}) EXPECT_NEAR(num.first_moment(s), sm::sg_branch_center(cfg, 1.0, s), 1e-6);
}

TEST(SternGerlach, NormAndBranchOverlapConserved) {
  auto cfg = acceptance_config();
  cfg.c_plus = std::sqrt(0.25);
  cfg.c_minus = std::polar(std::sqrt(0.75), -0.3);
  auto p0 = sm::sg_initial_packet(cfg);
  auto p1 = sm::sg_split_step(cfg, p0, cfg.t_exit(), 1000);
  EXPECT_NEAR(p1.norm_squared(), p0.norm_squared(), 1e-9);
  EXPECT_NEAR(p1.mass(+1), 0.25, 1e-8);
  EXPECT_NEAR(p1.mass(-1), 0.75, 1e-8);
  EXPECT_NEAR(p0.norm_squared(), 1.0, 1e-8);
}

TEST(SternGerlach, EhrenfestSweepAndVariance) {
  auto cfg = acceptance_config();
  auto p0 = sm::sg_initial_packet(cfg);
  for (double t : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    auto p = sm::sg_split_step(cfg, p0, t, 200);
    const auto heis = sm::sg_heisenberg_z(cfg, t, 0.0, 2);
    for (int s : {+1, -1}) {
      const double want = heis[s > 0 ? 0 : 1];
      EXPECT_NEAR(p.first_moment(s), want, 1e-4 * std::abs(want - cfg.z0));
      EXPECT_NEAR(want, cfg.z0 - cfg.b * cfg.muB / (2 * cfg.M) * s * t * t, 1e-15);
      const double var = cfg.delta * cfg.delta * (1 + std::pow(t / (2 * cfg.M * cfg.delta * cfg.delta), 2));
      EXPECT_NEAR(p.variance(s), var, 1e-6 * var);
    }
  }
}

TEST(SternGerlach, StrangSecondOrder) {
  auto cfg = acceptance_config();
  auto p0 = sm::sg_initial_packet(cfg);
  auto ref = sm::sg_split_step(cfg, p0, 1.0, 4096);
  const double e1 = l2(sm::sg_split_step(cfg, p0, 1.0, 32), ref);
  const double e2 = l2(sm::sg_split_step(cfg, p0, 1.0, 64), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
}

TEST(SternGerlach, MisbinningMatchesGaussianTail) {
  auto cfg = acceptance_config();
  cfg.c_plus = std::sqrt(0.4);
  cfg.c_minus = std::sqrt(0.6);
  const double t = cfg.t_exit();
  auto p = sm::sg_split_step(cfg, sm::sg_initial_packet(cfg), t, 400);
  auto o = sm::sg_outcome_distribution(cfg, t);
  EXPECT_NEAR(sm::sg_wrong_sign_mass(cfg, p, +1), o.misbin_plus, 1e-4);
  EXPECT_NEAR(sm::sg_wrong_sign_mass(cfg, p, -1), o.misbin_minus, 1e-4);
  EXPECT_NEAR(p.mass(+1), o.p_plus, 1e-8);
  EXPECT_FALSE(o.clean_binning);

  auto sharp = cfg;
  sharp.M = 100.0;
  sharp.b = 40.0;
  sharp.delta = 0.05;
  const double ts = 2.0;
  auto os = sm::sg_outcome_distribution(sharp, ts);
  EXPECT_TRUE(os.clean_binning);
  EXPECT_LT(os.misbin_total, 1e-3);
  EXPECT_EQ(sm::sg_bin(cfg, os.mean_plus), +1);
  EXPECT_EQ(sm::sg_bin(cfg, os.mean_minus), -1);
}

TEST(SternGerlach, OutcomeDistributionExamples) {
  auto cfg = acceptance_config();
  cfg.c_plus = 1.0;
  cfg.c_minus = 0.0;
  auto o = sm::sg_outcome_distribution(cfg, 1.0);
  EXPECT_EQ(o.p_plus, 1.0);
  EXPECT_EQ(o.misbin_minus, 0.0);
  auto sym = sm::sg_outcome_distribution(acceptance_config(), 1.0);
  EXPECT_NEAR(sym.p_plus, 0.5, 1e-15);
  EXPECT_NEAR(sym.p_minus, 0.5, 1e-15);
  EXPECT_NEAR(sym.mean_plus + sym.mean_minus, 2 * acceptance_config().z0, 1e-15);
  EXPECT_LT(sym.mean_plus, sym.mean_minus);
}

TEST(SternGerlach, HeisenbergOrders) {
  auto cfg = acceptance_config();
  cfg.z0 = 0.3;
  auto z = sm::sg_heisenberg_z(cfg, 0.0, 0.5, 4);
  EXPECT_EQ(z[0], 0.3);
  EXPECT_EQ(z[1], 0.3);
  for (double t : {0.1, 1.0, 3.0}) EXPECT_EQ(sm::sg_heisenberg_z(cfg, t, 0.0, 4), sm::sg_heisenberg_z(cfg, t, 0.0, 2));
  const double dy = 0.2;
  const double tb = sm::sg_validity_boundary(cfg, dy);
  EXPECT_NEAR(tb, std::sqrt(3e-3) / (cfg.muB * cfg.b * dy), 1e-9);
  EXPECT_LT(sm::sg_correction_ratio(cfg, 0.9 * tb, dy), 1e-3);
  EXPECT_GT(sm::sg_correction_ratio(cfg, 1.1 * tb, dy), 1e-3);
  EXPECT_THROW(sm::sg_heisenberg_z(cfg, 1.0, dy, 3), sm::InvalidArgument);
}

TEST(SternGerlach, Guards) {
  auto cfg = acceptance_config();
  auto p0 = sm::sg_initial_packet(cfg, -4.0, 4.0, 512);
  EXPECT_THROW(sm::sg_split_step(cfg, p0, 1.0, 50), sm::NumericalGuard);
  auto coarse = sm::sg_initial_packet(cfg, -20.0, 20.0, 256);
  EXPECT_THROW(sm::sg_split_step(cfg, coarse, 1.0, 50), sm::InvalidArgument);
  cfg.c_plus = 1.0;
  EXPECT_THROW(cfg.validate(), sm::InvalidArgument);
  EXPECT_THROW(sm::sg_analytic(acceptance_config(), 0.0, 1.0, 0), sm::InvalidArgument);
}
