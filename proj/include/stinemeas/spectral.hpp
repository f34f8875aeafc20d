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
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "stinemeas/hilbert.hpp"
#include "stinemeas/serialize.hpp"

namespace stinemeas {

// Outcome m carries eigenvalue lambda[m]; outcomes are ordered by strictly
// decreasing eigenvalue, so outcome 0 of Z is |0>.
struct SpectralDecomposition {
  RegisterLayout layout;
  std::vector<double> eigenvalues;
  std::vector<std::size_t> multiplicities;
  std::vector<Operator> projectors;

  std::size_t outcome_count() const { return eigenvalues.size(); }

  Operator reconstruct() const {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    CMatrix m = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) m += eigenvalues[k] * projectors[k].matrix();
    return Operator(layout, std::move(m));
  }
};

inline SpectralDecomposition spectral_decompose(const Operator& obs,
                                                std::optional<double> degeneracy_tol = std::nullopt,
                                                const Tolerances& tol = kDefaultTolerances) {
  require(obs.is_hermitian(tol.structural), "spectral_decompose: observable is not Hermitian");
  const CMatrix h = 0.5 * (obs.matrix() + obs.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const CMatrix& vec = es.eigenvectors();
  const Eigen::Index n = lam.size();
  const double range = lam(n - 1) - lam(0);
  const double merge = degeneracy_tol.value_or(tol.relative_degeneracy * range);

  SpectralDecomposition sd;
  sd.layout = obs.layout();
  // Single-linkage clusters of the ascending spectrum, emitted high to low.
  Eigen::Index end = n;
  while (end > 0) {
    Eigen::Index begin = end - 1;
    while (begin > 0 && lam(begin) - lam(begin - 1) <= merge) --begin;
    const Eigen::Index count = end - begin;
    const CMatrix v = vec.middleCols(begin, count);
    sd.eigenvalues.push_back(lam.segment(begin, count).mean());
    sd.multiplicities.push_back(static_cast<std::size_t>(count));
    sd.projectors.emplace_back(sd.layout, v * v.adjoint(), OperatorTags{std::nullopt, true, true});
    end = begin;
  }
  return sd;
}

// Sigma^m |k> = |k + m mod K> on a register of dimension K.
inline Operator weyl_shift(std::size_t K, std::size_t m, const std::string& label = "ss") {
  require(K >= 2, "weyl_shift: K must be at least 2");
  require(m < K, "weyl_shift: m out of range");
  const auto d = static_cast<Eigen::Index>(K);
  CMatrix s = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < K; ++k) s(static_cast<Eigen::Index>((k + m) % K), static_cast<Eigen::Index>(k)) = 1.0;
  return Operator(RegisterLayout::single(label, K, RegisterKind::stinespring), std::move(s),
                  {true, m == 0 || 2 * m == K, m == 0});
}

enum class KrausClass { channel, operation };

inline std::string to_string(KrausClass c) { return c == KrausClass::channel ? "channel" : "operation"; }

class KrausSet {
 public:
  KrausSet() = default;

  explicit KrausSet(std::vector<Operator> ops, const Tolerances& tol = kDefaultTolerances)
      : ops_(std::move(ops)) {
    require(!ops_.empty(), "KrausSet: needs at least one operator");
    for (const auto& k : ops_) require_same_layout(k.layout(), ops_.front().layout(), "KrausSet");
    const CMatrix def = defect();
    if (def.cwiseAbs().maxCoeff() < tol.completeness) {
      cls_ = KrausClass::channel;
      return;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (def + def.adjoint()), Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -tol.completeness,
            "KrausSet: sum of K^dagger K exceeds the identity");
    cls_ = KrausClass::operation;
  }

  const std::vector<Operator>& operators() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  KrausClass classification() const { return cls_; }
  const RegisterLayout& layout() const { return ops_.front().layout(); }

  CMatrix completeness_sum() const {
    const auto d = ops_.front().matrix().rows();
    CMatrix s = CMatrix::Zero(d, d);
    for (const auto& k : ops_) s += k.matrix().adjoint() * k.matrix();
    return s;
  }

  // I - sum K^dagger K; positive semidefinite for a valid set.
  CMatrix defect() const {
    const auto d = ops_.front().matrix().rows();
    return CMatrix::Identity(d, d) - completeness_sum();
  }

  // Appends sqrt(defect) so the set becomes a channel.
  KrausSet completed(const Tolerances& tol = kDefaultTolerances) const {
    if (cls_ == KrausClass::channel) return *this;
    const CMatrix def = defect();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (def + def.adjoint()));
    const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    CMatrix root = es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    auto ops = ops_;
    ops.emplace_back(layout(), std::move(root));
    return KrausSet(std::move(ops), tol);
  }

  DensityMatrix apply(const DensityMatrix& rho) const {
    require_same_layout(layout(), rho.layout(), "KrausSet::apply");
    const auto d = rho.matrix().rows();
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& k : ops_) out += k.matrix() * rho.matrix() * k.matrix().adjoint();
    return DensityMatrix(rho.layout(), std::move(out));
  }

 private:
  std::vector<Operator> ops_;
  KrausClass cls_ = KrausClass::channel;
};

struct MeasurementUnitary {
  Operator unitary;                      // physical registers then the ss register
  std::vector<std::size_t> outcome_map;  // ss basis index -> outcome
  std::size_t default_index = 0;
  std::size_t outcome_count = 0;
  std::string ss_label = "ss";

  RegisterLayout physical_layout() const {
    return unitary.layout().select(unitary.layout().complement({ss_label}));
  }
  std::size_t ss_dim() const { return unitary.layout().at(ss_label).dim; }
};

// Completes the columns flagged in `fixed` (assumed orthonormal) to a unitary.
// Free columns are filled, in increasing index, by Gram-Schmidt (two passes)
// over the canonical basis vectors e_0, e_1, ... in order.
inline CMatrix complete_isometry(const CMatrix& partial, const std::vector<bool>& fixed) {
  const Eigen::Index d = partial.rows();
  require(partial.cols() == d && static_cast<Eigen::Index>(fixed.size()) == d,
          "complete_isometry: shape mismatch");
  CMatrix u = partial;
  std::vector<Eigen::Index> basis;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < d; ++c) {
    if (fixed[static_cast<std::size_t>(c)]) basis.push_back(c);
    else free_cols.push_back(c);
  }
  std::size_t next = 0;
  for (Eigen::Index e = 0; e < d && next < free_cols.size(); ++e) {
    CVector v = CVector::Unit(d, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index c : basis) v -= u.col(c).dot(v) * u.col(c);
    const double n = v.norm();
    if (n < 1e-7) continue;
    const Eigen::Index c = free_cols[next++];
    u.col(c) = v / n;
    basis.push_back(c);
  }
  guard(next == free_cols.size(), "complete_isometry: fixed columns are not orthonormal");
  return u;
}

// U = sum_m Pi_m (x) Sigma^m; ss register appended after the physical ones.
inline MeasurementUnitary measurement_unitary(const SpectralDecomposition& sd,
                                              const std::string& ss_label = "ss",
                                              std::size_t ss_dim = 0) {
  const std::size_t K = sd.outcome_count();
  const std::size_t dim = ss_dim == 0 ? std::max<std::size_t>(K, 2) : ss_dim;
  require(dim >= K, "measurement_unitary: ss register smaller than the outcome count");
  require(dim >= 2, "measurement_unitary: ss register needs dimension >= 2");
  const RegisterLayout ss = RegisterLayout::single(ss_label, dim, RegisterKind::stinespring);
  const RegisterLayout full = sd.layout.concat(ss);
  const auto D = static_cast<Eigen::Index>(full.total_dim());
  CMatrix u = CMatrix::Zero(D, D);
  for (std::size_t m = 0; m < K; ++m) u += tensor(sd.projectors[m], weyl_shift(dim, m, ss_label)).matrix();
  MeasurementUnitary mu;
  mu.unitary = Operator(full, std::move(u), {true, std::nullopt, std::nullopt});
  mu.outcome_map.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) mu.outcome_map[k] = k;
  mu.default_index = 0;
  mu.outcome_count = K;
  mu.ss_label = ss_label;
  return mu;
}

// Traceless involutory part of a two-level observable.
inline Operator qubit_observable_involution(const Operator& obs,
                                            const Tolerances& tol = kDefaultTolerances) {
  require(obs.dim() == 2, "qubit_observable_involution: observable must be 2x2");
  require(obs.is_hermitian(tol.structural), "qubit_observable_involution: observable is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(obs.matrix(), Eigen::EigenvaluesOnly);
  const double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  require(gap > tol.structural * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()),
          "qubit_observable_involution: degenerate observable");
  CMatrix out = CMatrix::Zero(2, 2);
  for (const CMatrix& s : {pauli::X(), pauli::Y(), pauli::Z()}) out += (obs.matrix() * s).trace() * s;
  return Operator(obs.layout(), out / gap, {true, true, false});
}

inline KrausSet kraus_from_observable(const SpectralDecomposition& sd,
                                      const Tolerances& tol = kDefaultTolerances) {
  return KrausSet(sd.projectors, tol);
}

// U(|psi> (x) |i>) = sum_k K_k|psi> (x) |k>, other columns completed.
inline MeasurementUnitary unitary_from_kraus(const KrausSet& ks, std::size_t default_index = 0,
                                             const std::string& ss_label = "ss") {
  require(ks.classification() == KrausClass::channel,
          "unitary_from_kraus: Kraus set is incomplete; complete it first");
  const std::size_t n = ks.size();
  require(default_index < n, "unitary_from_kraus: default index out of range");
  const RegisterLayout full =
      ks.layout().concat(RegisterLayout::single(ss_label, n, RegisterKind::stinespring));
  const auto d = static_cast<Eigen::Index>(ks.layout().total_dim());
  const auto D = static_cast<Eigen::Index>(full.total_dim());
  const auto N = static_cast<Eigen::Index>(n);
  const auto i = static_cast<Eigen::Index>(default_index);
  CMatrix u = CMatrix::Zero(D, D);
  std::vector<bool> fixed(static_cast<std::size_t>(D), false);
  for (Eigen::Index j = 0; j < d; ++j) {
    fixed[static_cast<std::size_t>(j * N + i)] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (Eigen::Index a = 0; a < d; ++a)
        u(a * N + static_cast<Eigen::Index>(k), j * N + i) = ks.operators()[k].matrix()(a, j);
  }
  MeasurementUnitary mu;
  mu.unitary = Operator(full, complete_isometry(u, fixed), {true, std::nullopt, std::nullopt});
  mu.outcome_map.resize(n);
  for (std::size_t k = 0; k < n; ++k) mu.outcome_map[k] = k;
  mu.default_index = default_index;
  mu.outcome_count = n;
  mu.ss_label = ss_label;
  return mu;
}

// K_k = (<k|_ss) U (|i>_ss) for every ss basis state k.
inline std::vector<Operator> extract_kraus(const MeasurementUnitary& mu) {
  const RegisterLayout phys = mu.physical_layout();
  const RegisterLayout& full = mu.unitary.layout();
  const auto p_off = full.offsets(phys.labels());
  const auto st = full.strides()[full.index_of(mu.ss_label)];
  const auto d = static_cast<Eigen::Index>(p_off.size());
  std::vector<Operator> out;
  for (std::size_t k = 0; k < mu.ss_dim(); ++k) {
    CMatrix m(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        m(a, b) = mu.unitary.matrix()(static_cast<Eigen::Index>(p_off[a] + k * st),
                                      static_cast<Eigen::Index>(p_off[b] + mu.default_index * st));
    out.emplace_back(phys, std::move(m));
  }
  return out;
}

// rho (x) |i><i| on the ss register, in the unitary's layout.
inline DensityMatrix attach_default(const MeasurementUnitary& mu, const DensityMatrix& rho) {
  require_same_layout(rho.layout(), mu.physical_layout(), "attach_default");
  const RegisterLayout& full = mu.unitary.layout();
  const auto p_off = full.offsets(rho.layout().labels());
  const auto shift = mu.default_index * full.strides()[full.index_of(mu.ss_label)];
  const auto D = static_cast<Eigen::Index>(full.total_dim());
  CMatrix out = CMatrix::Zero(D, D);
  for (std::size_t a = 0; a < p_off.size(); ++a)
    for (std::size_t b = 0; b < p_off.size(); ++b)
      out(static_cast<Eigen::Index>(p_off[a] + shift), static_cast<Eigen::Index>(p_off[b] + shift)) =
          rho.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  return DensityMatrix(full, std::move(out));
}

// U (rho (x) |i><i|) U^dagger.
inline DensityMatrix dilate(const MeasurementUnitary& mu, const DensityMatrix& rho) {
  return conjugate(mu.unitary, attach_default(mu, rho));
}

inline DensityMatrix apply_channel(const MeasurementUnitary& mu, const DensityMatrix& rho) {
  const DensityMatrix big = dilate(mu, rho);
  return partial_trace(big, mu.physical_layout().labels());
}

struct SelectiveResult {
  double probability = 0.0;
  std::optional<DensityMatrix> state;
};

// Projector onto the ss states binned to `outcome`, in the unitary's layout.
inline Operator outcome_projector(const MeasurementUnitary& mu, std::size_t outcome) {
  const std::size_t n = mu.ss_dim();
  CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k)
    if (mu.outcome_map[k] == outcome) p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return embed(Operator(RegisterLayout::single(mu.ss_label, n, RegisterKind::stinespring), p,
                        {std::nullopt, true, true}),
               {mu.ss_label}, mu.unitary.layout());
}

inline SelectiveResult apply_selective(const MeasurementUnitary& mu, const DensityMatrix& rho,
                                       std::size_t outcome,
                                       const Tolerances& tol = kDefaultTolerances) {
  require(outcome < mu.outcome_count, "apply_selective: outcome out of range");
  const DensityMatrix big = dilate(mu, rho);
  const Operator p = outcome_projector(mu, outcome);
  const CMatrix proj = p.matrix() * big.matrix() * p.matrix();
  SelectiveResult r;
  r.probability = std::max(0.0, proj.trace().real());
  if (r.probability > tol.zero_probability) {
    const DensityMatrix reduced =
        partial_trace(DensityMatrix(big.layout(), proj), mu.physical_layout().labels());
    r.state = DensityMatrix(reduced.layout(), reduced.matrix() / r.probability);
  }
  return r;
}

// |n> (x) |0> -> |0> (x) |n> for n <= cutoff, completed to a unitary.
inline MeasurementUnitary destructive_number_unitary(std::size_t cutoff,
                                                     const std::string& mode_label = "mode",
                                                     const std::string& ss_label = "counter") {
  require(cutoff >= 1, "destructive_number_unitary: cutoff must be at least 1");
  const std::size_t d = cutoff + 1;
  const RegisterLayout full({Register{mode_label, d, RegisterKind::physical},
                             Register{ss_label, d, RegisterKind::stinespring}});
  const auto D = static_cast<Eigen::Index>(d * d);
  CMatrix u = CMatrix::Zero(D, D);
  std::vector<bool> fixed(static_cast<std::size_t>(D), false);
  for (std::size_t n = 0; n < d; ++n) {
    u(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n * d)) = 1.0;
    fixed[n * d] = true;
  }
  MeasurementUnitary mu;
  mu.unitary = Operator(full, complete_isometry(u, fixed), {true, std::nullopt, std::nullopt});
  mu.outcome_map.resize(d);
  for (std::size_t k = 0; k < d; ++k) mu.outcome_map[k] = k;
  mu.default_index = 0;
  mu.outcome_count = d;
  mu.ss_label = ss_label;
  return mu;
}

inline Operator number_operator(std::size_t cutoff, const std::string& label = "mode") {
  const auto d = static_cast<Eigen::Index>(cutoff + 1);
  CMatrix n = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return Operator(RegisterLayout::single(label, cutoff + 1), std::move(n), {std::nullopt, true, std::nullopt});
}

// Uniform pointer grid, endpoints included.
struct PointerGrid {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t points = 1001;

  double spacing() const { return (x_max - x_min) / static_cast<double>(points - 1); }
  double x(std::size_t i) const { return x_min + spacing() * static_cast<double>(i); }
};

struct GaussianPointer {
  double x0 = 0.0;
  double sigma = 1.0;
  PointerGrid grid;
};

inline double trapezoid(const Eigen::VectorXd& f, double dx) {
  if (f.size() < 2) return 0.0;
  return dx * (f.sum() - 0.5 * (f(0) + f(f.size() - 1)));
}

// Joint amplitudes: row = physical basis index, column = grid point.
struct PointerState {
  RegisterLayout physical;
  PointerGrid grid;
  CMatrix amplitudes;

  Eigen::VectorXd position_density() const { return amplitudes.cwiseAbs2().colwise().sum().transpose(); }
  double norm_squared() const { return trapezoid(position_density(), grid.spacing()); }
};

// Effective-limit pointer coupling: psi (x) phi0 -> sum_m Pi_m psi (x) phi0(x - lambda t lambda_m).
inline PointerState pointer_evolve(const SpectralDecomposition& sd, const GaussianPointer& packet,
                                   double coupling, double t, const Ket& psi) {
  require_same_layout(sd.layout, psi.layout(), "pointer_evolve");
  require(packet.sigma > 0.0, "pointer_evolve: sigma must be positive");
  require(packet.grid.points >= 3 && packet.grid.x_max > packet.grid.x_min,
          "pointer_evolve: degenerate grid");
  const auto& g = packet.grid;
  const auto np = static_cast<Eigen::Index>(g.points);
  PointerState out;
  out.physical = sd.layout;
  out.grid = g;
  out.amplitudes = CMatrix::Zero(static_cast<Eigen::Index>(psi.dim()), np);
  for (std::size_t m = 0; m < sd.outcome_count(); ++m) {
    const double c = packet.x0 + coupling * t * sd.eigenvalues[m];
    guard(c - 5.0 * packet.sigma >= g.x_min && c + 5.0 * packet.sigma <= g.x_max,
          "pointer_evolve: shifted packet leaves the grid");
    Eigen::VectorXd phi(np);
    for (Eigen::Index i = 0; i < np; ++i) {
      const double u = (g.x(static_cast<std::size_t>(i)) - c) / packet.sigma;
      phi(i) = std::exp(-0.25 * u * u);
    }
    phi /= std::sqrt(trapezoid(phi.cwiseAbs2(), g.spacing()));
    const CVector branch = sd.projectors[m].matrix() * psi.amplitudes();
    out.amplitudes += branch * phi.cast<cplx>().transpose();
  }
  return out;
}

inline void to_json(json& j, const KrausSet& ks) {
  json ops = json::array();
  for (const auto& k : ks.operators()) {
    json e;
    to_json(e, k);
    ops.push_back({{"re", e["re"]}, {"im", e["im"]}});
  }
  json map = json::array();
  for (std::size_t k = 0; k < ks.size(); ++k) map.push_back(k);
  j = {{"layout", ks.layout()},
       {"operators", ops},
       {"classification", to_string(ks.classification())},
       {"outcome_map", map}};
}

inline void to_json(json& j, const MeasurementUnitary& mu) {
  to_json(j, mu.unitary);
  j["outcome_map"] = mu.outcome_map;
  j["default_index"] = mu.default_index;
  j["ss_label"] = mu.ss_label;
}

}  // namespace stinemeas
