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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "stinemeas/numeric_policy.hpp"
#include "stinemeas/photodetector.hpp"

namespace stinemeas {

namespace detail {

inline void require_normalized(cplx c_g, cplx c_e, const char* who) {
  require(std::abs(std::norm(c_g) + std::norm(c_e) - 1.0) < 1e-9,
          std::string(who) + ": amplitudes must be normalized");
}

}  // namespace detail

struct FluorescenceConfig {
  double p_detect = 0.5;
  std::size_t n_photons = 10;

  void validate() const {
    require(p_detect >= 0.0 && p_detect <= 1.0, "fluorescence: p_detect must lie in [0, 1]");
  }
};

// qubit 'g' or 'e', photons left in the mode, photons counted.
struct FluorescenceBranch {
  char qubit = 'g';
  std::size_t em_photons = 0;
  std::size_t detected = 0;
  cplx amplitude;
};

struct FluorescenceResult {
  std::vector<FluorescenceBranch> branches;
  std::vector<double> count_distribution;  // P(detected = m), m = 0..n
  double p_click = 0.0;
  double p_no_click = 0.0;
  double p_false_negative = 0.0;
  double p_false_negative_state = 0.0;  // weight of |g>|n>|0> in the dilated state
  // Binned outcomes: 0 = g (m > 0), 1 = e (m = 0).
  double p_outcome_g = 0.0;
  double p_outcome_e = 0.0;
};

inline FluorescenceResult fluorescence_measure(cplx c_g, cplx c_e, const FluorescenceConfig& cfg) {
  cfg.validate();
  detail::require_normalized(c_g, c_e, "fluorescence_measure");
  const std::size_t n = cfg.n_photons;
  const double p = cfg.p_detect;
  const double wg = std::norm(c_g);
  FluorescenceResult r;
  std::vector<double> binom(n + 1, 0.0);
  if (p >= 1.0) {
    binom[n] = 1.0;
  } else {
    binom = photocount_distribution(n, -std::log1p(-p));
  }
  r.branches.push_back({'e', 0, 0, c_e});
  for (std::size_t m = 0; m <= n; ++m)
    if (binom[m] > 0.0) r.branches.push_back({'g', n - m, m, c_g * std::sqrt(binom[m])});
  r.count_distribution.assign(n + 1, 0.0);
  r.count_distribution[0] = std::norm(c_e);
  for (std::size_t m = 0; m <= n; ++m) r.count_distribution[m] += wg * binom[m];
  r.p_no_click = r.count_distribution[0];
  r.p_click = 1.0 - r.p_no_click;
  if (wg == 0.0) r.p_click = 0.0;
  r.p_false_negative = wg * std::pow(1.0 - p, 0.5 * static_cast<double>(n));
  r.p_false_negative_state = wg * binom[0];
  r.p_outcome_g = r.p_click;
  r.p_outcome_e = r.p_no_click;
  return r;
}

struct DispersiveConfig {
  double alpha = 1.0;
  double theta = std::numbers::pi / 2;

  void validate() const {
    require(alpha >= 0.0, "dispersive: alpha must be non-negative");
    require(theta > 0.0 && theta <= std::numbers::pi / 2, "dispersive: theta must lie in (0, pi/2]");
  }
};

struct DispersiveResult {
  cplx c_g, c_e;
  cplx alpha_g, alpha_e;    // outgoing coherent amplitudes per branch
  double momentum_offset;   // branch g centred at +offset, branch e at -offset
  double p_error = 0.0;
  double p_assign_g = 0.0;  // P(p > 0)
  double p_assign_e = 0.0;  // P(p < 0)
};

inline double dispersive_error(double alpha, double theta) {
  return 0.5 * std::erfc(std::numbers::sqrt2 * alpha * std::sin(theta));
}

inline DispersiveResult dispersive_readout(cplx c_g, cplx c_e, const DispersiveConfig& cfg) {
  cfg.validate();
  detail::require_normalized(c_g, c_e, "dispersive_readout");
  DispersiveResult r;
  r.c_g = c_g;
  r.c_e = c_e;
  r.alpha_g = std::polar(cfg.alpha, 2.0 * cfg.theta);
  r.alpha_e = std::polar(cfg.alpha, -2.0 * cfg.theta);
  r.momentum_offset = std::numbers::sqrt2 * cfg.alpha * std::sin(cfg.theta);
  r.p_error = dispersive_error(cfg.alpha, cfg.theta);
  r.p_assign_g = std::norm(c_g) * (1.0 - r.p_error) + std::norm(c_e) * r.p_error;
  r.p_assign_e = 1.0 - r.p_assign_g;
  return r;
}

// Momentum-quadrature wavefunction of branch s (+1 for g, -1 for e).
inline cplx dispersive_branch_wavefunction(const DispersiveConfig& cfg, int s, double p) {
  const double c = std::numbers::sqrt2 * cfg.alpha * std::sin(cfg.theta);
  const double q = std::numbers::sqrt2 * cfg.alpha * std::cos(cfg.theta);
  const double u = p - s * c;
  return std::polar(std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u), -q * p);
}

inline double dispersive_momentum_density(const DispersiveResult& r, const DispersiveConfig& cfg, double p) {
  return std::norm(r.c_g) * std::norm(dispersive_branch_wavefunction(cfg, +1, p)) +
         std::norm(r.c_e) * std::norm(dispersive_branch_wavefunction(cfg, -1, p));
}

}  // namespace stinemeas
