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

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "stinemeas/hilbert.hpp"

namespace stinemeas {

struct SGConfig {
  double M = 1.0;
  double b = 0.5;
  double muB = 1.0;
  double B0 = 10.0;
  double v = 1.0;
  double L = 1.0;
  double z0 = 0.0;
  double delta = 0.2;
  cplx c_plus = std::numbers::sqrt2 / 2;
  cplx c_minus = std::numbers::sqrt2 / 2;

  double t_exit() const { return L / v; }
  cplx amplitude(int s) const { return s > 0 ? c_plus : c_minus; }
  // Gradient of the potential seen by spin s.
  double force(int s) const { return static_cast<double>(s) * muB * b; }
  double kappa(double t) const { return b * muB * t * t / (M * delta); }

  void validate() const {
    require(M > 0.0, "sterngerlach: M must be positive");
    require(delta > 0.0, "sterngerlach: delta must be positive");
    require(v > 0.0 && L > 0.0, "sterngerlach: t_exit = L / v must be positive");
    require(std::abs(std::norm(c_plus) + std::norm(c_minus) - 1.0) < 1e-9,
            "sterngerlach: spin amplitudes must be normalized");
  }
};

namespace detail {

inline void require_spin(int s) { require(s == 1 || s == -1, "sterngerlach: s must be +1 or -1"); }

}  // namespace detail

inline double sg_branch_center(const SGConfig& cfg, double t, int s) {
  detail::require_spin(s);
  return cfg.z0 - cfg.force(s) * t * t / (2.0 * cfg.M);
}

inline double sg_branch_variance(const SGConfig& cfg, double t) {
  const double r = t / (2.0 * cfg.M * cfg.delta * cfg.delta);
  return cfg.delta * cfg.delta * (1.0 + r * r);
}

inline cplx sg_analytic(const SGConfig& cfg, double z, double t, int s) {
  detail::require_spin(s);
  require(t >= 0.0, "sg_analytic: t must be non-negative");
  const double F = cfg.force(s);
  const cplx w = 1.0 + cplx(0.0, t / (2.0 * cfg.M * cfg.delta * cfg.delta));
  const double xi = z + F * t * t / (2.0 * cfg.M) - cfg.z0;
  const cplx free = std::pow(2.0 * std::numbers::pi, -0.25) / std::sqrt(cfg.delta * w) *
                    std::exp(-xi * xi / (4.0 * cfg.delta * cfg.delta * w));
  const double phase = -static_cast<double>(s) * cfg.muB * cfg.B0 * t - F * t * z - F * F * t * t * t / (6.0 * cfg.M);
  return cfg.amplitude(s) * std::polar(1.0, phase) * free;
}

// Periodic grid z_i = z_min + i dz, dz = (z_max - z_min) / points.
struct GridWavepacket {
  double z_min = -20.0;
  double z_max = 20.0;
  std::size_t points = 2048;
  CVector plus;
  CVector minus;

  double spacing() const { return (z_max - z_min) / static_cast<double>(points); }
  double z(std::size_t i) const { return z_min + static_cast<double>(i) * spacing(); }
  const CVector& component(int s) const { return s > 0 ? plus : minus; }
  CVector& component(int s) { return s > 0 ? plus : minus; }

  double mass(int s) const { return component(s).squaredNorm() * spacing(); }
  double norm_squared() const { return mass(+1) + mass(-1); }
  cplx cross_overlap() const { return plus.dot(minus) * spacing(); }

  double first_moment(int s) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points; ++i) acc += z(i) * std::norm(component(s)(static_cast<Eigen::Index>(i)));
    return acc * spacing() / mass(s);
  }

  double variance(int s) const {
    const double m = first_moment(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      const double d = z(i) - m;
      acc += d * d * std::norm(component(s)(static_cast<Eigen::Index>(i)));
    }
    return acc * spacing() / mass(s);
  }

  // Mass of branch s on z > cut (above = true) or z < cut; a node on the cut counts half.
  double mass_beyond(int s, double cut, bool above) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      const double w = std::norm(component(s)(static_cast<Eigen::Index>(i)));
      if (std::abs(z(i) - cut) < 1e-9 * spacing())
        acc += 0.5 * w;
      else if (above ? z(i) > cut : z(i) < cut)
        acc += w;
    }
    return acc * spacing();
  }

  double edge_mass(double band) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points; ++i)
      if (z(i) < z_min + band || z(i) > z_max - band)
        acc += std::norm(plus(static_cast<Eigen::Index>(i))) + std::norm(minus(static_cast<Eigen::Index>(i)));
    return acc * spacing();
  }
};

inline constexpr double kEscapeThreshold = 1e-6;

inline GridWavepacket sg_sample(const SGConfig& cfg, double t, double z_min = -20.0, double z_max = 20.0,
                                std::size_t points = 2048) {
  cfg.validate();
  require(z_max > z_min && points >= 8, "sg_sample: invalid grid");
  GridWavepacket g{z_min, z_max, points, CVector(static_cast<Eigen::Index>(points)), CVector(static_cast<Eigen::Index>(points))};
  for (std::size_t i = 0; i < points; ++i) {
    g.plus(static_cast<Eigen::Index>(i)) = sg_analytic(cfg, g.z(i), t, +1);
    g.minus(static_cast<Eigen::Index>(i)) = sg_analytic(cfg, g.z(i), t, -1);
  }
  return g;
}

// Initial packet, each component renormalized to |c_s|^2 on the grid.
inline GridWavepacket sg_initial_packet(const SGConfig& cfg, double z_min = -20.0, double z_max = 20.0,
                                        std::size_t points = 2048) {
  GridWavepacket g = sg_sample(cfg, 0.0, z_min, z_max, points);
  for (int s : {+1, -1}) {
    const double m = g.mass(s);
    if (m > 0.0) g.component(s) *= std::sqrt(std::norm(cfg.amplitude(s)) / m);
  }
  return g;
}

// Strang splitting: half potential, exact kinetic in k-space, half potential.
inline GridWavepacket sg_split_step(const SGConfig& cfg, const GridWavepacket& packet, double t, std::size_t n_steps,
                                    const Tolerances& tol = kDefaultTolerances) {
  cfg.validate();
  require(n_steps >= 1, "sg_split_step: n_steps must be positive");
  require(t >= 0.0, "sg_split_step: t must be non-negative");
  require(packet.spacing() <= cfg.delta / 8.0, "sg_split_step: grid spacing must be at most delta / 8");
  const auto n = static_cast<Eigen::Index>(packet.points);
  require(packet.plus.size() == n && packet.minus.size() == n, "sg_split_step: component length mismatch");
  const double band = 10.0 * cfg.delta;
  guard(packet.edge_mass(band) <= kEscapeThreshold, "sg_split_step: wavepacket mass in the guard band before evolution");

  const double dt = t / static_cast<double>(n_steps);
  const double dz = packet.spacing();
  const std::size_t N = packet.points;
  std::vector<cplx> kin(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double idx = j < N / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(N);
    const double k = 2.0 * std::numbers::pi * idx / (static_cast<double>(N) * dz);
    kin[j] = std::polar(1.0, -k * k * dt / (2.0 * cfg.M));
  }

  GridWavepacket out = packet;
  Eigen::FFT<double> fft;
  std::vector<cplx> x(N), k(N);
  for (int s : {+1, -1}) {
    std::vector<cplx> half(N);
    for (std::size_t i = 0; i < N; ++i)
      half[i] = std::polar(1.0, -0.5 * dt * static_cast<double>(s) * cfg.muB * (cfg.B0 + cfg.b * packet.z(i)));
    CVector& c = out.component(s);
    for (std::size_t i = 0; i < N; ++i) x[i] = c(static_cast<Eigen::Index>(i));
    for (std::size_t step = 0; step < n_steps; ++step) {
      for (std::size_t i = 0; i < N; ++i) x[i] *= half[i];
      fft.fwd(k, x);
      for (std::size_t j = 0; j < N; ++j) k[j] *= kin[j];
      fft.inv(x, k);
      for (std::size_t i = 0; i < N; ++i) x[i] *= half[i];
    }
    for (std::size_t i = 0; i < N; ++i) c(static_cast<Eigen::Index>(i)) = x[i];
  }
  guard(out.edge_mass(band) <= kEscapeThreshold, "sg_split_step: wavepacket escaped into the guard band");
  guard(std::abs(out.norm_squared() - packet.norm_squared()) < 1e3 * tol.trace, "sg_split_step: norm drift");
  return out;
}

// Expected z for s = +1, -1. Order 4 adds the transverse-spread correction.
inline std::array<double, 2> sg_heisenberg_z(const SGConfig& cfg, double t, double delta_y, int order) {
  require(order == 2 || order == 4, "sg_heisenberg_z: order must be 2 or 4");
  std::array<double, 2> out{};
  for (int i = 0; i < 2; ++i) {
    const double s = i == 0 ? 1.0 : -1.0;
    double z = cfg.z0 - cfg.b * cfg.muB / (2.0 * cfg.M) * s * t * t;
    if (order == 4) z += std::pow(cfg.muB * cfg.b, 3) * std::pow(t, 4) / (6.0 * cfg.M) * delta_y * delta_y * s;
    out[static_cast<std::size_t>(i)] = z;
  }
  return out;
}

inline double sg_correction_ratio(const SGConfig& cfg, double t, double delta_y) {
  const auto z2 = sg_heisenberg_z(cfg, t, delta_y, 2);
  const auto z4 = sg_heisenberg_z(cfg, t, delta_y, 4);
  const double base = std::abs(z2[0] - cfg.z0);
  require(base > 0.0, "sg_correction_ratio: no displacement at this t");
  return std::abs(z4[0] - z2[0]) / base;
}

// Largest t with correction ratio below threshold, by bisection on (0, t_hi].
inline double sg_validity_boundary(const SGConfig& cfg, double delta_y, double threshold = 1e-3, double t_hi = 1e6) {
  require(threshold > 0.0, "sg_validity_boundary: threshold must be positive");
  require(cfg.b != 0.0 && cfg.muB != 0.0, "sg_validity_boundary: no force");
  if (delta_y == 0.0) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = t_hi;
  require(sg_correction_ratio(cfg, hi, delta_y) > threshold, "sg_validity_boundary: t_hi inside the validity region");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid > 0.0 && sg_correction_ratio(cfg, mid, delta_y) > threshold ? hi : lo) = mid;
  }
  return lo;
}

struct SGOutcome {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  double var_plus = 0.0;
  double var_minus = 0.0;
  // Branch mass on the wrong side of z0, weighted by |c_s|^2.
  double misbin_plus = 0.0;
  double misbin_minus = 0.0;
  double misbin_total = 0.0;
  bool clean_binning = false;
};

// Outcome s is assigned to -sign(z - z0): s = +1 is deflected towards z < z0.
inline int sg_bin(const SGConfig& cfg, double z) { return z < cfg.z0 ? +1 : -1; }

inline SGOutcome sg_outcome_distribution(const SGConfig& cfg, double t) {
  cfg.validate();
  SGOutcome o;
  o.p_plus = std::norm(cfg.c_plus);
  o.p_minus = std::norm(cfg.c_minus);
  o.mean_plus = sg_branch_center(cfg, t, +1);
  o.mean_minus = sg_branch_center(cfg, t, -1);
  o.var_plus = o.var_minus = sg_branch_variance(cfg, t);
  const double sigma = std::sqrt(o.var_plus);
  const double d = std::abs(o.mean_plus - cfg.z0);
  const double tail = 0.5 * std::erfc(d / (std::numbers::sqrt2 * sigma));
  o.misbin_plus = o.p_plus * tail;
  o.misbin_minus = o.p_minus * tail;
  o.misbin_total = o.misbin_plus + o.misbin_minus;
  o.clean_binning = std::abs(cfg.b * cfg.muB * t * t / cfg.M) > 4.0 * sigma;
  return o;
}

// Wrong-side mass of branch s measured on a grid packet.
inline double sg_wrong_sign_mass(const SGConfig& cfg, const GridWavepacket& g, int s) {
  detail::require_spin(s);
  return g.mass_beyond(s, cfg.z0, s > 0);
}

}  // namespace stinemeas
