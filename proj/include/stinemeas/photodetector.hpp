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

#include <bit>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "stinemeas/hilbert.hpp"

namespace stinemeas {

struct PhotonCounterConfig {
  std::size_t n_qubits = 8;
  double coupling = 1.0;  // g
  double step = 0.1;      // tau
  std::size_t fock_cutoff = 4;

  double zeta() const { return static_cast<double>(n_qubits) * coupling * coupling * step * step; }
  double efficiency() const { return -std::expm1(-zeta()); }

  void validate() const {
    require(n_qubits >= 1, "photodetector: n_qubits must be positive");
    require(coupling >= 0.0 && step >= 0.0, "photodetector: coupling and step must be non-negative");
  }
};

inline constexpr std::size_t kMaxPhotodetectorQubits = 16;
inline constexpr std::size_t kMaxPhotodetectorDim = std::size_t{1} << 22;

// Mode register "mode" followed by detector qubits "d1".."dN" (ss kind).
inline RegisterLayout photodetector_layout(std::size_t fock_cutoff, std::size_t n_qubits) {
  std::vector<Register> regs{{"mode", fock_cutoff + 1, RegisterKind::physical}};
  for (std::size_t k = 1; k <= n_qubits; ++k) regs.push_back({"d" + std::to_string(k), 2, RegisterKind::stinespring});
  return RegisterLayout(std::move(regs));
}

inline Ket fock_ket(const CVector& amps, const std::string& label = "mode") {
  return Ket(RegisterLayout::single(label, static_cast<std::size_t>(amps.size())), amps);
}

inline Ket fock_number(std::size_t n, std::size_t cutoff, const std::string& label = "mode") {
  require(n <= cutoff, "fock_number: n exceeds cutoff");
  return Ket::basis(RegisterLayout::single(label, cutoff + 1), n);
}

inline Ket coherent_ket(cplx alpha, std::size_t cutoff, const std::string& label = "mode") {
  CVector v(static_cast<Eigen::Index>(cutoff + 1));
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 1; n <= cutoff; ++n)
    v(static_cast<Eigen::Index>(n)) = v(static_cast<Eigen::Index>(n - 1)) * alpha / std::sqrt(static_cast<double>(n));
  return Ket(RegisterLayout::single(label, cutoff + 1), v);
}

// Ordered product of exp(g tau (a s+_k - a^dag s-_k)), k = 1..N, each applied
// exactly on its two-dimensional blocks {|n,0_k>, |n-1,1_k>}.
inline Ket photodetect_exact(const Ket& psi, const PhotonCounterConfig& cfg,
                             const Tolerances& tol = kDefaultTolerances) {
  cfg.validate();
  require(psi.layout().size() == 1, "photodetect_exact: input must be a single Fock register");
  const std::size_t d = psi.dim();
  const std::size_t N = cfg.n_qubits;
  guard(N <= kMaxPhotodetectorQubits, "photodetect_exact: too many detector qubits for the exact oracle");
  guard(d <= kMaxPhotodetectorDim >> N, "photodetect_exact: dilated dimension exceeds the guard");
  const std::size_t Q = std::size_t{1} << N;
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d * Q));
  for (std::size_t n = 0; n < d; ++n) v(static_cast<Eigen::Index>(n * Q)) = psi.amplitudes()(static_cast<Eigen::Index>(n));
  const double gt = cfg.coupling * cfg.step;
  std::vector<double> c(d), s(d);
  for (std::size_t n = 0; n < d; ++n) {
    c[n] = std::cos(gt * std::sqrt(static_cast<double>(n)));
    s[n] = std::sin(gt * std::sqrt(static_cast<double>(n)));
  }
  for (std::size_t k = 1; k <= N; ++k) {
    const std::size_t bit = std::size_t{1} << (N - k);
    for (std::size_t n = 1; n < d; ++n)
      for (std::size_t b = 0; b < Q; ++b) {
        if (b & bit) continue;
        const auto i0 = static_cast<Eigen::Index>(n * Q + b);
        const auto i1 = static_cast<Eigen::Index>((n - 1) * Q + (b | bit));
        const cplx a0 = v(i0), a1 = v(i1);
        v(i0) = c[n] * a0 - s[n] * a1;
        v(i1) = s[n] * a0 + c[n] * a1;
      }
  }
  guard(std::abs(v.norm() - psi.norm()) < tol.structural, "photodetect_exact: norm drift");
  return Ket(photodetector_layout(d - 1, N), std::move(v));
}

// Probability of k excited detector qubits, k = 0..N.
inline std::vector<double> count_distribution(const Ket& dilated) {
  const RegisterLayout& l = dilated.layout();
  const std::size_t N = l.size() - 1;
  const std::size_t Q = std::size_t{1} << N;
  std::vector<double> p(N + 1, 0.0);
  for (std::size_t i = 0; i < dilated.dim(); ++i)
    p[static_cast<std::size_t>(std::popcount(i % Q))] += std::norm(dilated.amplitudes()(static_cast<Eigen::Index>(i)));
  return p;
}

// Binomial(n, 1 - e^{-zeta}).
inline std::vector<double> photocount_distribution(std::size_t n, double zeta) {
  require(zeta >= 0.0, "photocount_distribution: zeta must be non-negative");
  const double p = -std::expm1(-zeta);
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double lp = k == 0 ? 0.0 : static_cast<double>(k) * std::log(p);
    const double lq = n == k ? 0.0 : -zeta * static_cast<double>(n - k);
    out[k] = p == 0.0 && k > 0 ? 0.0 : std::exp(lc + lp + lq);
  }
  return out;
}

struct JointAmplitude {
  std::size_t n_remaining = 0;
  std::size_t counted = 0;
  double magnitude = 0.0;
};

// |<n-m, m|Psi>| for every Fock component n of psi and m = 0..n. The
// microscopic m-dependent phases are not modelled.
inline std::vector<JointAmplitude> photodetect_closed_form(const Ket& psi, double zeta) {
  require(zeta > 0.0, "photodetect_closed_form: zeta must be positive");
  require(psi.layout().size() == 1, "photodetect_closed_form: input must be a single Fock register");
  std::vector<JointAmplitude> out;
  for (std::size_t n = 0; n < psi.dim(); ++n) {
    const double cn = std::abs(psi.amplitudes()(static_cast<Eigen::Index>(n)));
    if (cn == 0.0) continue;
    const auto pk = photocount_distribution(n, zeta);
    for (std::size_t m = 0; m <= n; ++m) out.push_back({n - m, m, cn * std::sqrt(pk[m])});
  }
  return out;
}

// |[B, B^dag] - 1| on the ordered-excitation state with n excited qubits,
// for n = 0..N.
inline std::vector<double> collective_commutator_defect(std::size_t N, double g, double tau) {
  require(N >= 1 && N <= kMaxPhotodetectorQubits, "collective_commutator_defect: N must be in 1..16");
  const double x = g * g * tau * tau;
  require(x > 0.0, "collective_commutator_defect: g tau must be non-zero");
  const double pref = x / std::expm1(x);
  std::vector<double> out(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    const double ratio = std::expm1(-static_cast<double>(n) * x) / std::expm1(-static_cast<double>(N) * x);
    out[n] = std::abs(pref * (1.0 - 2.0 * ratio) - 1.0);
  }
  return out;
}

inline double max_defect(const std::vector<double>& table, std::size_t n_max) {
  double m = 0.0;
  for (std::size_t n = 0; n <= n_max && n < table.size(); ++n) m = std::max(m, table[n]);
  return m;
}

// exp((pi/4)(a^dag b - a b^dag)) on two Fock registers, built block by block
// in the total-number sectors.
inline Ket beam_splitter(const Ket& state, std::size_t cutoff) {
  const RegisterLayout& l = state.layout();
  require(l.size() == 2 && l[0].dim == cutoff + 1 && l[1].dim == cutoff + 1,
          "beam_splitter: expected two Fock registers of dimension cutoff + 1");
  const std::size_t d = cutoff + 1;
  const auto idx = [d](std::size_t na, std::size_t nb) { return static_cast<Eigen::Index>(na * d + nb); };
  for (std::size_t na = 0; na < d; ++na)
    for (std::size_t nb = 0; nb < d; ++nb)
      guard(na + nb <= cutoff || state.amplitudes()(idx(na, nb)) == cplx(0.0),
            "beam_splitter: joint excitation exceeds the cutoff");
  CVector out = CVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t N = 0; N <= cutoff; ++N) {
    // Basis |k, N-k>, k = 0..N. Hermitian H with exp(-iH) = exp(G).
    const auto dim = static_cast<Eigen::Index>(N + 1);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t k = 0; k < N; ++k) {
      const double amp = std::sqrt(static_cast<double>((k + 1) * (N - k)));
      G(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) += 0.25 * std::numbers::pi * amp;
      G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) -= 0.25 * std::numbers::pi * amp;
    }
    const CMatrix H = cplx(0, 1) * G.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    const CVector phases = (cplx(0, -1) * es.eigenvalues().cast<cplx>()).array().exp();
    const CMatrix U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    CVector block(dim);
    for (std::size_t k = 0; k <= N; ++k) block(static_cast<Eigen::Index>(k)) = state.amplitudes()(idx(k, N - k));
    const CVector res = U * block;
    for (std::size_t k = 0; k <= N; ++k) out(idx(k, N - k)) = res(static_cast<Eigen::Index>(k));
  }
  return Ket(l, std::move(out));
}

}  // namespace stinemeas
