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

#include <Eigen/QR>
#include <cstdint>
#include <random>

#include "stinemeas/hilbert.hpp"

namespace stinemeas {

using Rng = std::mt19937_64;

// Stream for (seed, counter); distinct counters give independent streams.
inline Rng make_stream(std::uint64_t seed, std::uint64_t counter) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32)};
  return Rng(seq);
}

inline CMatrix ginibre(Eigen::Index n, Eigen::Index m, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k) a(i, k) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
  return a;
}

// Haar-distributed U(n): QR of a Ginibre matrix, R diagonal phases removed.
inline CMatrix haar_unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(n, n, rng));
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= a > 0.0 ? d / a : cplx(1.0);
  }
  return q;
}

inline CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  CMatrix a = ginibre(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline Ket random_ket(const RegisterLayout& layout, Rng& rng) {
  CMatrix v = ginibre(static_cast<Eigen::Index>(layout.total_dim()), 1, rng);
  return Ket(layout, v.col(0) / v.norm());
}

// Random mixed state of the given rank (0 means full rank).
inline DensityMatrix random_density(const RegisterLayout& layout, Rng& rng, Eigen::Index rank = 0) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  CMatrix a = ginibre(d, rank > 0 ? rank : d, rng);
  CMatrix rho = a * a.adjoint();
  return DensityMatrix(layout, rho / rho.trace().real());
}

// Hermitian matrix with a random eigenbasis and eigenvalues drawn from a small
// integer set, so that degeneracies occur.
inline CMatrix random_degenerate_hermitian(Eigen::Index n, Rng& rng, int levels = 3) {
  std::uniform_int_distribution<int> pick(0, levels - 1);
  Eigen::VectorXd lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = static_cast<double>(pick(rng)) - 0.5 * levels;
  CMatrix u = haar_unitary(n, rng);
  return u * lam.cast<cplx>().asDiagonal() * u.adjoint();
}

}  // namespace stinemeas
