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

#include "stinemeas/decoherence.hpp"
#include "stinemeas/protocol.hpp"

namespace sm = stinemeas;
using sm::CMatrix;
using sm::CVector;
using sm::cplx;
using sm::RegisterKind;
using sm::RegisterLayout;

namespace {

// Dilated post-measurement state for a qutrit observable with a non-minimal
// ss register of dim n_0 + n_1: outcome m lands on the first state of block m.
struct Fixture {
  sm::SpectralDecomposition sd;
  sm::SymmetryBlocks blocks;
  sm::MeasurementUnitary mu;
};

Fixture nonminimal(sm::Rng& rng, const std::vector<std::size_t>& sizes) {
  CMatrix h = Eigen::Vector3d(1, 1, -1).cast<cplx>().asDiagonal();
  CMatrix u = sm::haar_unitary(3, rng);
  auto sd = sm::spectral_decompose(sm::Operator(RegisterLayout::single("p", 3), u * h * u.adjoint()));
  auto blocks = sm::SymmetryBlocks::from_multiplicities(sizes);
  std::vector<sm::Operator> ks;
  for (std::size_t m = 0; m < sizes.size(); ++m)
    for (std::size_t k = 0; k < sizes[m]; ++k)
      ks.push_back(k == 0 ? sd.projectors[m] : sm::Operator(sd.layout, CMatrix::Zero(3, 3)));
  auto mu = sm::unitary_from_kraus(sm::KrausSet(ks));
  for (std::size_t i = 0; i < blocks.dim(); ++i) mu.outcome_map[i] = blocks.block_of(i);
  mu.outcome_count = sizes.size();
  return {sd, blocks, mu};
}

}  // namespace

TEST(SymmetryBlocks, Validation) {
  EXPECT_THROW(sm::SymmetryBlocks({{0, 1}, {1}}, 2), sm::InvalidArgument);
  EXPECT_THROW(sm::SymmetryBlocks({{0}}, 2), sm::InvalidArgument);
  auto b = sm::SymmetryBlocks::from_multiplicities({2, 1, 3});
  EXPECT_EQ(b.dim(), 6u);
  EXPECT_EQ(b.block_of(5), 2u);
}

TEST(BlockHaar, SingletonsArePhases) {
  auto u = sm::sample_block_haar(sm::SymmetryBlocks::singletons(5), std::uint64_t{3});
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      if (i == j) EXPECT_NEAR(std::abs(u.matrix()(i, j)), 1.0, 1e-14);
      else EXPECT_EQ(u.matrix()(i, j), cplx(0.0));
    }
}

TEST(BlockHaar, UnitaryAndBlockDiagonal) {
  auto blocks = sm::SymmetryBlocks::from_multiplicities({3, 1, 2});
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto u = sm::sample_block_haar(blocks, s);
    EXPECT_TRUE(u.is_unitary());
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        if (blocks.block_of(i) != blocks.block_of(j)) {
          EXPECT_EQ(u.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), cplx(0.0));
        }
  }
}

TEST(BlockHaar, FirstMomentAndInvariance) {
  auto blocks = sm::SymmetryBlocks::from_multiplicities({4});
  sm::Rng rng(5);
  const int S = 10000;
  CVector mean = CVector::Zero(4);
  CMatrix v = sm::haar_unitary(4, rng);
  // Second and fourth moments of |U_00| for U and for V U must agree.
  double m2 = 0, m4 = 0, m2v = 0, m4v = 0;
  for (int s = 0; s < S; ++s) {
    CMatrix u = sm::sample_block_haar(blocks, rng).matrix();
    mean += u.col(0);
    const double a = std::norm(u(0, 0)), b = std::norm((v * u)(0, 0));
    m2 += a, m4 += a * a, m2v += b, m4v += b * b;
  }
  EXPECT_LT((mean / S).norm(), 0.05);
  EXPECT_NEAR(m2 / S, 0.25, 0.02);
  EXPECT_NEAR(m2v / S, 0.25, 0.02);
  EXPECT_NEAR(m4 / S, 2.0 / 20.0, 0.02);
  EXPECT_NEAR(m4v / S, 2.0 / 20.0, 0.02);
}

TEST(DephaseExact, MinimalBlocksGiveClassicalMixture) {
  sm::Rng rng(7);
  auto o = sm::qubit_op(sm::random_hermitian(2, rng), "q");
  auto sd = sm::spectral_decompose(o);
  auto mu = sm::measurement_unitary(sd);
  auto psi = sm::random_ket(sd.layout, rng);
  auto rho0 = sm::DensityMatrix::pure(psi);
  auto post = sm::dilate(mu, rho0);
  auto out = sm::dephase_exact(post, sm::SymmetryBlocks::singletons(2));
  CMatrix oracle = CMatrix::Zero(4, 4);
  for (std::size_t m = 0; m < 2; ++m) {
    CMatrix pm = sd.projectors[m].matrix() * rho0.matrix() * sd.projectors[m].matrix();
    CMatrix ss = CMatrix::Zero(2, 2);
    ss(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = 1.0;
    oracle += sm::tensor(sm::qubit_op(pm, "a"), sm::qubit_op(ss, "b")).matrix();
  }
  EXPECT_LT(sm::max_abs_diff(out.matrix(), oracle), 1e-12);
  // Idempotent.
  EXPECT_LT(sm::max_abs_diff(sm::dephase_exact(out, sm::SymmetryBlocks::singletons(2)).matrix(), out.matrix()), 1e-15);
}

TEST(DephaseExact, OutcomeWeightedMixtureWithMultiplicities) {
  sm::Rng rng(11);
  auto f = nonminimal(rng, {2, 1});
  auto rho0 = sm::random_density(f.sd.layout, rng);
  auto post = sm::dilate(f.mu, rho0);
  auto out = sm::dephase_exact(post, f.blocks);
  CMatrix oracle = CMatrix::Zero(9, 9);
  for (std::size_t m = 0; m < 2; ++m) {
    auto sel = sm::apply_selective(f.mu, rho0, m);
    ASSERT_TRUE(sel.state);
    CMatrix pm = CMatrix::Zero(3, 3);
    for (std::size_t k : f.blocks.blocks()[m]) pm(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    pm /= static_cast<double>(f.blocks.blocks()[m].size());
    oracle += sel.probability * sm::tensor(sm::Operator(RegisterLayout::single("a", 3), sel.state->matrix()),
                                           sm::Operator(RegisterLayout::single("b", 3), pm))
                                    .matrix();
  }
  EXPECT_LT(sm::max_abs_diff(out.matrix(), oracle), 1e-10);
  EXPECT_NEAR(out.trace(), 1.0, 1e-12);
  EXPECT_LT(sm::max_abs_diff(sm::partial_trace(out, {"p"}).matrix(), sm::partial_trace(post, {"p"}).matrix()), 1e-12);
}

TEST(DephaseExact, MatchesSampling) {
  sm::Rng rng(13);
  auto f = nonminimal(rng, {2, 1});
  auto post = sm::dilate(f.mu, sm::random_density(f.sd.layout, rng));
  auto exact = sm::dephase_exact(post, f.blocks);
  auto mc = sm::sampled_dephase(post, f.blocks, 10000, 42);
  EXPECT_LT(sm::trace_distance(mc.matrix(), exact.matrix()), 0.03);
}

TEST(CoherenceNorm, Examples) {
  auto mu = sm::measurement_unitary(sm::spectral_decompose(sm::qubit_op(sm::pauli::Z(), "q")));
  const double r = 1.0 / std::sqrt(2.0);
  auto post = sm::dilate(mu, sm::DensityMatrix::pure(sm::qubit_ket(r, r, "q")));
  auto blocks = sm::SymmetryBlocks::singletons(2);
  const double c = sm::coherence_norm(post, blocks);
  // Direct extraction of the ss (0,1) block.
  CMatrix blk(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b) blk(a, b) = post.matrix()(a * 2 + 0, b * 2 + 1);
  EXPECT_GT(c, 0.0);
  EXPECT_NEAR(c, std::sqrt(2.0) * blk.norm(), 1e-15);
  auto deph = sm::dephase_exact(post, blocks);
  EXPECT_EQ(sm::coherence_norm(deph, blocks), 0.0);
  EXPECT_LE(sm::coherence_norm(deph, blocks), c);
  sm::Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    auto r2 = sm::random_density(RegisterLayout({{"p", 2}, {"ss", 3, RegisterKind::stinespring}}), rng);
    auto b2 = sm::SymmetryBlocks::from_multiplicities({1, 2});
    EXPECT_LE(sm::coherence_norm(sm::dephase_exact(r2, b2), b2), sm::coherence_norm(r2, b2));
  }
}

TEST(Decoherence, MonteCarloConvergence) {
  sm::Rng rng(17);
  auto f = nonminimal(rng, {1, 2});
  auto post = sm::dilate(f.mu, sm::random_density(f.sd.layout, rng));
  auto exact = sm::dephase_exact(post, f.blocks);
  for (std::size_t S : {100u, 1000u}) {
    auto mc = sm::sampled_dephase(post, f.blocks, S, 1000 + S);
    EXPECT_LT(sm::trace_distance(mc.matrix(), exact.matrix()), 5.0 / std::sqrt(static_cast<double>(S)));
  }
}

TEST(Decoherence, WrongBlocksThrow) {
  sm::Rng rng(1);
  auto rho = sm::random_density(RegisterLayout({{"p", 2}, {"ss", 3, RegisterKind::stinespring}}), rng);
  EXPECT_THROW(sm::dephase_exact(rho, sm::SymmetryBlocks::singletons(2)), sm::InvalidArgument);
}

TEST(NonminimalMeasurement, MatchesPaddedKrausConstruction) {
  sm::Rng rng(29);
  auto f = nonminimal(rng, {2, 1});
  auto mu = sm::nonminimal_measurement(f.sd, {2, 1});
  EXPECT_LT(sm::max_abs_diff(mu.unitary.matrix(), f.mu.unitary.matrix()), 1e-15);
  EXPECT_EQ(mu.outcome_map, f.mu.outcome_map);
  EXPECT_EQ(mu.outcome_count, 2u);
  EXPECT_THROW(sm::nonminimal_measurement(f.sd, {1, 1, 1}), sm::InvalidArgument);
}
