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
#include <string>
#include <vector>

#include "stinemeas/random.hpp"
#include "stinemeas/spectral.hpp"

namespace stinemeas {

// Partition of the ss basis into outcome blocks.
class SymmetryBlocks {
 public:
  SymmetryBlocks() = default;

  SymmetryBlocks(std::vector<std::vector<std::size_t>> blocks, std::size_t dim) : blocks_(std::move(blocks)) {
    block_of_.assign(dim, dim);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      require(!blocks_[b].empty(), "SymmetryBlocks: empty block");
      for (std::size_t i : blocks_[b]) {
        require(i < dim, "SymmetryBlocks: index out of range");
        require(block_of_[i] == dim, "SymmetryBlocks: blocks overlap");
        block_of_[i] = b;
      }
    }
    for (std::size_t i = 0; i < dim; ++i) require(block_of_[i] != dim, "SymmetryBlocks: blocks do not cover the basis");
  }

  // Contiguous blocks of sizes n_0, n_1, ...
  static SymmetryBlocks from_multiplicities(const std::vector<std::size_t>& sizes) {
    std::vector<std::vector<std::size_t>> b;
    std::size_t next = 0;
    for (std::size_t n : sizes) {
      std::vector<std::size_t> blk;
      for (std::size_t k = 0; k < n; ++k) blk.push_back(next++);
      b.push_back(std::move(blk));
    }
    return SymmetryBlocks(std::move(b), next);
  }

  static SymmetryBlocks singletons(std::size_t dim) { return from_multiplicities(std::vector<std::size_t>(dim, 1)); }

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t dim() const { return block_of_.size(); }
  std::size_t block_of(std::size_t i) const { return block_of_.at(i); }

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

inline Operator sample_block_haar(const SymmetryBlocks& blocks, Rng& rng, const std::string& label = "ss") {
  const auto d = static_cast<Eigen::Index>(blocks.dim());
  CMatrix u = CMatrix::Zero(d, d);
  for (const auto& blk : blocks.blocks()) {
    const CMatrix h = haar_unitary(static_cast<Eigen::Index>(blk.size()), rng);
    for (std::size_t i = 0; i < blk.size(); ++i)
      for (std::size_t k = 0; k < blk.size(); ++k)
        u(static_cast<Eigen::Index>(blk[i]), static_cast<Eigen::Index>(blk[k])) =
            h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  return Operator(RegisterLayout::single(label, blocks.dim(), RegisterKind::stinespring), std::move(u),
                  {true, std::nullopt, std::nullopt});
}

inline Operator sample_block_haar(const SymmetryBlocks& blocks, std::uint64_t seed, const std::string& label = "ss") {
  Rng rng = make_stream(seed, 0);
  return sample_block_haar(blocks, rng, label);
}

namespace detail {

struct SsIndexing {
  std::vector<std::size_t> rest;  // offsets of all non-ss digits
  std::size_t stride = 1;
};

inline SsIndexing ss_indexing(const RegisterLayout& l, const std::string& ss_label, const SymmetryBlocks& blocks) {
  require(l.at(ss_label).dim == blocks.dim(), "decoherence: blocks do not match ss register '" + ss_label + "'");
  return {l.offsets(l.complement({ss_label})), l.strides()[l.index_of(ss_label)]};
}

}  // namespace detail

// Exact average over block-Haar unitaries on the ss register:
// rho' = sum_l tr_block_l(rho) (x) P_l / n_l, inter-block coherences removed.
inline DensityMatrix dephase_exact(const DensityMatrix& rho, const SymmetryBlocks& blocks,
                                   const std::string& ss_label = "ss") {
  const auto ix = detail::ss_indexing(rho.layout(), ss_label, blocks);
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  const auto at = [&](std::size_t r, std::size_t k) { return static_cast<Eigen::Index>(r + k * ix.stride); };
  for (const auto& blk : blocks.blocks()) {
    const double inv = 1.0 / static_cast<double>(blk.size());
    for (std::size_t a : ix.rest)
      for (std::size_t b : ix.rest) {
        cplx s = 0.0;
        for (std::size_t k : blk) s += m(at(a, k), at(b, k));
        s *= inv;
        for (std::size_t k : blk) out(at(a, k), at(b, k)) = s;
      }
  }
  return DensityMatrix(rho.layout(), std::move(out));
}

// Frobenius norm of the inter-block ss coherences.
inline double coherence_norm(const DensityMatrix& rho, const SymmetryBlocks& blocks,
                             const std::string& ss_label = "ss") {
  const auto ix = detail::ss_indexing(rho.layout(), ss_label, blocks);
  const CMatrix& m = rho.matrix();
  double s = 0.0;
  for (std::size_t i = 0; i < blocks.dim(); ++i)
    for (std::size_t j = 0; j < blocks.dim(); ++j) {
      if (blocks.block_of(i) == blocks.block_of(j)) continue;
      for (std::size_t a : ix.rest)
        for (std::size_t b : ix.rest)
          s += std::norm(m(static_cast<Eigen::Index>(a + i * ix.stride), static_cast<Eigen::Index>(b + j * ix.stride)));
    }
  return std::sqrt(s);
}

// Measurement unitary whose ss register spreads outcome m over sizes[m] basis
// states (block m of SymmetryBlocks::from_multiplicities(sizes)); outcome m
// lands on the first state of its block.
inline MeasurementUnitary nonminimal_measurement(const SpectralDecomposition& sd, const std::vector<std::size_t>& sizes,
                                                 const std::string& ss_label = "ss") {
  require(sizes.size() == sd.outcome_count(), "nonminimal_measurement: one block size per outcome required");
  const auto blocks = SymmetryBlocks::from_multiplicities(sizes);
  const auto d = static_cast<Eigen::Index>(sd.layout.total_dim());
  std::vector<Operator> ks;
  for (std::size_t m = 0; m < sizes.size(); ++m)
    for (std::size_t k = 0; k < sizes[m]; ++k)
      ks.push_back(k == 0 ? sd.projectors[m] : Operator(sd.layout, CMatrix::Zero(d, d)));
  auto mu = unitary_from_kraus(KrausSet(ks), 0, ss_label);
  for (std::size_t i = 0; i < blocks.dim(); ++i) mu.outcome_map[i] = blocks.block_of(i);
  mu.outcome_count = sizes.size();
  return mu;
}

// Average of (I (x) U) rho (I (x) U)^dagger over `samples` block-Haar draws;
// draw s uses the stream (seed, s). Reference for dephase_exact.
inline DensityMatrix sampled_dephase(const DensityMatrix& rho, const SymmetryBlocks& blocks, std::size_t samples,
                                     std::uint64_t seed, const std::string& ss_label = "ss") {
  require(samples > 0, "sampled_dephase: samples must be positive");
  const RegisterLayout& l = rho.layout();
  (void)detail::ss_indexing(l, ss_label, blocks);
  CMatrix acc = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng = make_stream(seed, s);
    const CMatrix u = embed(sample_block_haar(blocks, rng, ss_label), {ss_label}, l).matrix();
    acc += u * rho.matrix() * u.adjoint();
  }
  return DensityMatrix(l, acc / static_cast<double>(samples));
}

}  // namespace stinemeas
