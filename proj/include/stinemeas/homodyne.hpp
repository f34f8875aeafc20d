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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "stinemeas/hilbert.hpp"

namespace stinemeas {

struct HomodyneConfig {
  double beta_abs = 8.0;
  double phi = 0.0;
  std::size_t fock_cutoff = 112;

  cplx beta() const { return std::polar(beta_abs, phi); }

  void validate() const {
    require(beta_abs >= 0.0, "homodyne: beta_abs must be non-negative");
    require(static_cast<double>(fock_cutoff) >= beta_abs * beta_abs + 6.0 * beta_abs,
            "homodyne: fock_cutoff must be at least |beta|^2 + 6|beta|");
  }
};

// Orthonormal Hermite functions h_0..h_{count-1} at x.
inline std::vector<double> hermite_functions(std::size_t count, double x) {
  std::vector<double> h(std::max<std::size_t>(count, 1));
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (count > 1) h[1] = std::numbers::sqrt2 * x * h[0];
  for (std::size_t n = 1; n + 1 < count; ++n) {
    const double dn = static_cast<double>(n);
    h[n + 1] = x * std::sqrt(2.0 / (dn + 1.0)) * h[n] - std::sqrt(dn / (dn + 1.0)) * h[n - 1];
  }
  h.resize(count);
  return h;
}

inline cplx quadrature_wavefunction(const Ket& psi, double phi, double x) {
  require(psi.layout().size() == 1, "quadrature_wavefunction: input must be a single Fock register");
  const auto h = hermite_functions(psi.dim(), x);
  cplx acc = 0.0;
  for (std::size_t n = 0; n < psi.dim(); ++n)
    acc += std::polar(h[n], -static_cast<double>(n) * phi) * psi.amplitudes()(static_cast<Eigen::Index>(n));
  return acc;
}

namespace detail {

inline bool half_integer_split(std::size_t N, double D, std::size_t& k, std::size_t& l) {
  const double kd = 0.5 * static_cast<double>(N) + D;
  const double r = std::round(kd);
  if (std::abs(kd - r) > 1e-9 || r < 0.0 || r > static_cast<double>(N)) return false;
  k = static_cast<std::size_t>(r);
  l = N - k;
  return true;
}

}  // namespace detail

// e^{-|b|^2/2} <0|(b+a)^k (b-a)^l|psi> / sqrt(2^N k! l!), k = N/2 + D, l = N/2 - D.
inline cplx homodyne_matrix_element_exact(const Ket& psi, cplx beta, std::size_t N, double D) {
  require(psi.layout().size() == 1, "homodyne_matrix_element_exact: input must be a single Fock register");
  std::size_t k = 0, l = 0;
  require(detail::half_integer_split(N, D, k, l), "homodyne_matrix_element_exact: D must lie in {-N/2, ..., N/2}");
  const auto d = static_cast<Eigen::Index>(psi.dim());
  CVector v = psi.amplitudes();
  CVector w(d);
  double log_scale = 0.0;
  const auto step = [&](double sign, std::size_t j) {
    for (Eigen::Index n = 0; n < d; ++n) {
      const cplx lowered = n + 1 < d ? v(n + 1) * std::sqrt(static_cast<double>(n + 1)) : cplx(0.0);
      w(n) = (beta * v(n) + sign * lowered) / std::sqrt(2.0 * static_cast<double>(j));
    }
    v.swap(w);
    const double m = v.cwiseAbs().maxCoeff();
    if (m > 0.0) {
      v /= m;
      log_scale += std::log(m);
    }
  };
  for (std::size_t j = 1; j <= l; ++j) step(-1.0, j);
  for (std::size_t j = 1; j <= k; ++j) step(+1.0, j);
  if (v(0) == cplx(0.0)) return 0.0;
  return v(0) * std::exp(log_scale - 0.5 * std::norm(beta));
}

struct HomodyneElement {
  cplx value;
  bool in_regime = true;
};

inline double mean_photon_number(const Ket& psi) {
  double acc = 0.0;
  for (std::size_t n = 0; n < psi.dim(); ++n)
    acc += static_cast<double>(n) * std::norm(psi.amplitudes()(static_cast<Eigen::Index>(n)));
  return acc / psi.amplitudes().squaredNorm();
}

inline bool homodyne_in_regime(const Ket& psi, double beta_abs) {
  return beta_abs * beta_abs >= 10.0 * (mean_photon_number(psi) + 1.0);
}

inline HomodyneElement homodyne_matrix_element_asymptotic(const Ket& psi, double beta_abs, double phi,
                                                         std::size_t N, double D) {
  require(beta_abs > 0.0, "homodyne_matrix_element_asymptotic: beta_abs must be positive");
  const double dn = static_cast<double>(N) - beta_abs * beta_abs;
  const double env = std::pow(std::numbers::pi, -0.25) / beta_abs * std::exp(-dn * dn / (4.0 * beta_abs * beta_abs));
  const cplx value = std::polar(env, static_cast<double>(N) * phi) *
                     quadrature_wavefunction(psi, phi, D * std::numbers::sqrt2 / beta_abs);
  return {value, homodyne_in_regime(psi, beta_abs)};
}

struct HomodyneGrid {
  int d_max = 0;  // D in {-d_max, ..., d_max}; 0 picks fock_cutoff / 2
};

struct HomodyneDistributions {
  std::vector<std::size_t> n_values;
  std::vector<double> pN;
  std::vector<double> pN_exact;
  std::vector<int> d_values;
  std::vector<double> pD;
  std::vector<double> pD_exact;
  bool in_regime = true;
};

// pN and pD from the asymptotic factorised form; the exact columns sum |f|^2
// from the exact element (pN_exact over all D, pD_exact over even N then
// normalised on the D grid).
inline HomodyneDistributions homodyne_distributions(const Ket& psi, const HomodyneConfig& cfg,
                                                    const HomodyneGrid& grid = {}) {
  cfg.validate();
  require(cfg.beta_abs > 0.0, "homodyne_distributions: beta_abs must be positive");
  require(grid.d_max >= 0, "homodyne_distributions: d_max must be non-negative");
  const Ket in = psi.normalized();
  const double b = cfg.beta_abs;
  const int d_max = grid.d_max > 0 ? grid.d_max : static_cast<int>(cfg.fock_cutoff / 2);
  HomodyneDistributions out;
  out.in_regime = homodyne_in_regime(in, b);

  double zn = 0.0;
  for (std::size_t N = 0; N <= cfg.fock_cutoff; ++N) {
    const double dn = static_cast<double>(N) - b * b;
    out.n_values.push_back(N);
    out.pN.push_back(std::exp(-dn * dn / (2.0 * b * b)));
    zn += out.pN.back();
  }
  for (double& p : out.pN) p /= zn;

  double zd = 0.0;
  for (int D = -d_max; D <= d_max; ++D) {
    out.d_values.push_back(D);
    out.pD.push_back(std::norm(quadrature_wavefunction(in, cfg.phi, D * std::numbers::sqrt2 / b)));
    zd += out.pD.back();
  }
  guard(zd > 0.0, "homodyne_distributions: pD vanishes on the D grid");
  for (double& p : out.pD) p /= zd;

  out.pN_exact.assign(out.n_values.size(), 0.0);
  out.pD_exact.assign(out.d_values.size(), 0.0);
  const cplx beta = cfg.beta();
  for (std::size_t N = 0; N <= cfg.fock_cutoff; ++N)
    for (std::size_t k = 0; k <= N; ++k) {
      const double D = static_cast<double>(k) - 0.5 * static_cast<double>(N);
      const double w = std::norm(homodyne_matrix_element_exact(in, beta, N, D));
      out.pN_exact[N] += w;
      if (N % 2 == 0 && std::abs(D) <= d_max)
        out.pD_exact[static_cast<std::size_t>(static_cast<int>(D) + d_max)] += w;
    }
  double ze = 0.0;
  for (double p : out.pD_exact) ze += p;
  guard(ze > 0.0, "homodyne_distributions: exact pD vanishes on the D grid");
  for (double& p : out.pD_exact) p /= ze;
  return out;
}

}  // namespace stinemeas
