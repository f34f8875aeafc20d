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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stinemeas/numeric_policy.hpp"

namespace stinemeas {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class RegisterKind { physical, stinespring };

inline std::string to_string(RegisterKind k) {
  return k == RegisterKind::physical ? "physical" : "stinespring";
}

inline RegisterKind register_kind_from_string(std::string_view s) {
  if (s == "physical") return RegisterKind::physical;
  if (s == "stinespring") return RegisterKind::stinespring;
  throw InvalidArgument("unknown register kind: " + std::string(s));
}

struct Register {
  std::string label;
  std::size_t dim = 1;
  RegisterKind kind = RegisterKind::physical;
  bool operator==(const Register&) const = default;
};

// Ordered list of named registers. The first register is the most
// significant digit of the flat basis index (Kronecker order).
class RegisterLayout {
 public:
  RegisterLayout() = default;

  explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    for (std::size_t i = 0; i < regs_.size(); ++i) {
      require(!regs_[i].label.empty(), "register label must be non-empty");
      require(regs_[i].dim >= 1, "register '" + regs_[i].label + "' has dim 0");
      for (std::size_t j = 0; j < i; ++j)
        require(regs_[j].label != regs_[i].label,
                "duplicate register label '" + regs_[i].label + "'");
    }
  }

  static RegisterLayout single(std::string label, std::size_t dim,
                               RegisterKind kind = RegisterKind::physical) {
    return RegisterLayout({Register{std::move(label), dim, kind}});
  }

  const std::vector<Register>& registers() const { return regs_; }
  std::size_t size() const { return regs_.size(); }
  bool empty() const { return regs_.empty(); }
  const Register& operator[](std::size_t i) const { return regs_.at(i); }

  std::size_t total_dim() const {
    std::size_t d = 1;
    for (const auto& r : regs_) d *= r.dim;
    return d;
  }

  std::optional<std::size_t> find(std::string_view label) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
      if (regs_[i].label == label) return i;
    return std::nullopt;
  }

  bool contains(std::string_view label) const { return find(label).has_value(); }

  std::size_t index_of(std::string_view label) const {
    auto i = find(label);
    require(i.has_value(), "unknown register label '" + std::string(label) + "'");
    return *i;
  }

  const Register& at(std::string_view label) const { return regs_[index_of(label)]; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& r : regs_) out.push_back(r.label);
    return out;
  }

  std::vector<std::string> labels_of_kind(RegisterKind k) const {
    std::vector<std::string> out;
    for (const auto& r : regs_)
      if (r.kind == k) out.push_back(r.label);
    return out;
  }

  RegisterLayout concat(const RegisterLayout& other) const {
    std::vector<Register> regs = regs_;
    regs.insert(regs.end(), other.regs_.begin(), other.regs_.end());
    return RegisterLayout(std::move(regs));
  }

  // Registers named in `labels`, in the order given.
  RegisterLayout select(const std::vector<std::string>& labels) const {
    std::vector<Register> regs;
    for (const auto& l : labels) regs.push_back(at(l));
    return RegisterLayout(std::move(regs));
  }

  // Registers named in `labels`, in layout order.
  RegisterLayout subset(const std::vector<std::string>& labels) const {
    std::vector<Register> regs;
    for (const auto& l : labels) index_of(l);
    for (const auto& r : regs_)
      if (std::find(labels.begin(), labels.end(), r.label) != labels.end()) regs.push_back(r);
    return RegisterLayout(std::move(regs));
  }

  std::vector<std::string> complement(const std::vector<std::string>& labels) const {
    std::vector<std::string> out;
    for (const auto& r : regs_)
      if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) out.push_back(r.label);
    return out;
  }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(regs_.size(), 1);
    for (std::size_t i = regs_.size(); i-- > 1;) s[i - 1] = s[i] * regs_[i].dim;
    return s;
  }

  std::vector<std::size_t> digits(std::size_t index) const {
    std::vector<std::size_t> d(regs_.size());
    for (std::size_t i = regs_.size(); i-- > 0;) {
      d[i] = index % regs_[i].dim;
      index /= regs_[i].dim;
    }
    return d;
  }

  std::size_t flat_index(const std::vector<std::size_t>& digits) const {
    require(digits.size() == regs_.size(), "digit count does not match layout");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < regs_.size(); ++i) {
      require(digits[i] < regs_[i].dim, "basis digit out of range");
      idx = idx * regs_[i].dim + digits[i];
    }
    return idx;
  }

  // Flat-index offsets obtained by enumerating all digit tuples of the
  // named registers (first label most significant), other digits zero.
  std::vector<std::size_t> offsets(const std::vector<std::string>& labels) const {
    const auto st = strides();
    std::vector<std::size_t> out{0};
    for (const auto& l : labels) {
      const std::size_t i = index_of(l);
      std::vector<std::size_t> next;
      next.reserve(out.size() * regs_[i].dim);
      for (std::size_t base : out)
        for (std::size_t k = 0; k < regs_[i].dim; ++k) next.push_back(base + k * st[i]);
      out = std::move(next);
    }
    return out;
  }

  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Register> regs_;
};

inline std::string describe(const RegisterLayout& l) {
  std::string s = "[";
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) s += ", ";
    s += l[i].label + ":" + std::to_string(l[i].dim);
  }
  return s + "]";
}

inline void require_same_layout(const RegisterLayout& a, const RegisterLayout& b,
                                const char* what) {
  require(a == b, std::string(what) + ": layout mismatch " + describe(a) + " vs " + describe(b));
}

// Known structural properties. Unset entries are computed on request.
struct OperatorTags {
  std::optional<bool> unitary;
  std::optional<bool> hermitian;
  std::optional<bool> projector;
};

class Operator {
 public:
  Operator() = default;
  Operator(RegisterLayout layout, CMatrix m, OperatorTags tags = {})
      : layout_(std::move(layout)), m_(std::move(m)), tags_(tags) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    require(m_.rows() == d && m_.cols() == d,
            "operator matrix shape does not match layout " + describe(layout_));
  }

  static Operator identity(const RegisterLayout& layout) {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    return Operator(layout, CMatrix::Identity(d, d), {true, true, true});
  }

  const RegisterLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return layout_.total_dim(); }
  const OperatorTags& tags() const { return tags_; }

  bool is_unitary(double tol = kDefaultTolerances.structural) const {
    if (tags_.unitary) return *tags_.unitary;
    const auto d = m_.rows();
    return ((m_.adjoint() * m_) - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < tol;
  }

  bool is_hermitian(double tol = kDefaultTolerances.structural) const {
    if (tags_.hermitian) return *tags_.hermitian;
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() < tol;
  }

  bool is_projector(double tol = kDefaultTolerances.structural) const {
    if (tags_.projector) return *tags_.projector;
    return is_hermitian(tol) && (m_ * m_ - m_).cwiseAbs().maxCoeff() < tol;
  }

  Operator adjoint() const {
    OperatorTags t;
    t.unitary = tags_.unitary;
    t.hermitian = tags_.hermitian;
    t.projector = tags_.projector;
    return Operator(layout_, m_.adjoint(), t);
  }

  friend Operator operator*(const Operator& a, const Operator& b) {
    require_same_layout(a.layout_, b.layout_, "operator product");
    OperatorTags t;
    if (a.tags_.unitary.value_or(false) && b.tags_.unitary.value_or(false)) t.unitary = true;
    return Operator(a.layout_, a.m_ * b.m_, t);
  }

  friend Operator operator+(const Operator& a, const Operator& b) {
    require_same_layout(a.layout_, b.layout_, "operator sum");
    return Operator(a.layout_, a.m_ + b.m_);
  }

  friend Operator operator-(const Operator& a, const Operator& b) {
    require_same_layout(a.layout_, b.layout_, "operator difference");
    return Operator(a.layout_, a.m_ - b.m_);
  }

  friend Operator operator*(cplx s, const Operator& a) { return Operator(a.layout_, s * a.m_); }

 private:
  RegisterLayout layout_;
  CMatrix m_;
  OperatorTags tags_;
};

class Ket {
 public:
  Ket() = default;
  Ket(RegisterLayout layout, CVector amps) : layout_(std::move(layout)), v_(std::move(amps)) {
    require(v_.size() == static_cast<Eigen::Index>(layout_.total_dim()),
            "ket length does not match layout " + describe(layout_));
  }

  static Ket basis(const RegisterLayout& layout, std::size_t index) {
    require(index < layout.total_dim(), "basis index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return Ket(layout, std::move(v));
  }

  static Ket basis(const RegisterLayout& layout, const std::vector<std::size_t>& digits) {
    return basis(layout, layout.flat_index(digits));
  }

  const RegisterLayout& layout() const { return layout_; }
  const CVector& amplitudes() const { return v_; }
  std::size_t dim() const { return layout_.total_dim(); }
  double norm() const { return v_.norm(); }

  Ket normalized() const {
    const double n = v_.norm();
    guard(n > 0.0, "cannot normalize the zero vector");
    return Ket(layout_, v_ / n);
  }

 private:
  RegisterLayout layout_;
  CVector v_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(RegisterLayout layout, CMatrix m) : layout_(std::move(layout)), m_(std::move(m)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    require(m_.rows() == d && m_.cols() == d,
            "density matrix shape does not match layout " + describe(layout_));
  }

  static DensityMatrix pure(const Ket& k) {
    return DensityMatrix(k.layout(), k.amplitudes() * k.amplitudes().adjoint());
  }

  const RegisterLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return layout_.total_dim(); }
  double trace() const { return m_.trace().real(); }

  bool is_hermitian(double tol = kDefaultTolerances.structural) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() < tol;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  // Hermitian, PSD within tol, unit trace within tol.
  bool is_valid(double tol = kDefaultTolerances.structural) const {
    return is_hermitian(tol) && min_eigenvalue() >= -tol && std::abs(trace() - 1.0) < tol;
  }

  DensityMatrix normalized() const {
    const double t = trace();
    guard(t > 0.0, "cannot normalize a density matrix with zero trace");
    return DensityMatrix(layout_, m_ / t);
  }

 private:
  RegisterLayout layout_;
  CMatrix m_;
};

inline Operator tensor(const Operator& a, const Operator& b) {
  RegisterLayout l = a.layout().concat(b.layout());
  const CMatrix& A = a.matrix();
  const CMatrix& B = b.matrix();
  CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  OperatorTags t;
  if (a.tags().unitary.value_or(false) && b.tags().unitary.value_or(false)) t.unitary = true;
  if (a.tags().hermitian.value_or(false) && b.tags().hermitian.value_or(false)) t.hermitian = true;
  if (a.tags().projector.value_or(false) && b.tags().projector.value_or(false)) t.projector = true;
  return Operator(std::move(l), std::move(out), t);
}

inline Ket tensor(const Ket& a, const Ket& b) {
  RegisterLayout l = a.layout().concat(b.layout());
  const CVector& A = a.amplitudes();
  const CVector& B = b.amplitudes();
  CVector out(A.size() * B.size());
  for (Eigen::Index i = 0; i < A.size(); ++i) out.segment(i * B.size(), B.size()) = A(i) * B;
  return Ket(std::move(l), std::move(out));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Operator t = tensor(Operator(a.layout(), a.matrix()), Operator(b.layout(), b.matrix()));
  return DensityMatrix(t.layout(), t.matrix());
}

// Reduced state on `keep`; the result lists the kept registers in layout order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  const RegisterLayout& l = rho.layout();
  RegisterLayout kept = l.subset(keep);
  const auto keep_off = l.offsets(kept.labels());
  const auto trace_off = l.offsets(l.complement(kept.labels()));
  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  const CMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::size_t t : trace_off)
        acc += m(static_cast<Eigen::Index>(keep_off[i] + t), static_cast<Eigen::Index>(keep_off[j] + t));
      out(i, j) = acc;
    }
  return DensityMatrix(std::move(kept), std::move(out));
}

inline DensityMatrix trace_out_stinespring(const DensityMatrix& rho) {
  return partial_trace(rho, rho.layout().labels_of_kind(RegisterKind::physical));
}

// Places `op` on the registers `targets` of `layout`, identity elsewhere.
inline Operator embed(const Operator& op, const std::vector<std::string>& targets,
                      const RegisterLayout& layout) {
  require(op.layout().size() == targets.size(), "embed: target count does not match operator");
  for (std::size_t i = 0; i < targets.size(); ++i)
    require(op.layout()[i].dim == layout.at(targets[i]).dim,
            "embed: dimension mismatch on register '" + targets[i] + "'");
  const auto t_off = layout.offsets(targets);
  const auto r_off = layout.offsets(layout.complement(targets));
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  CMatrix out = CMatrix::Zero(d, d);
  const CMatrix& m = op.matrix();
  for (std::size_t r : r_off)
    for (std::size_t a = 0; a < t_off.size(); ++a)
      for (std::size_t b = 0; b < t_off.size(); ++b) {
        const cplx v = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (v != cplx(0.0)) out(static_cast<Eigen::Index>(t_off[a] + r), static_cast<Eigen::Index>(t_off[b] + r)) = v;
      }
  return Operator(layout, std::move(out), op.tags());
}

inline Ket apply(const Operator& op, const Ket& k) {
  require_same_layout(op.layout(), k.layout(), "apply");
  return Ket(k.layout(), op.matrix() * k.amplitudes());
}

inline DensityMatrix conjugate(const Operator& op, const DensityMatrix& rho) {
  require_same_layout(op.layout(), rho.layout(), "conjugate");
  return DensityMatrix(rho.layout(), op.matrix() * rho.matrix() * op.matrix().adjoint());
}

inline double expectation(const Operator& obs, const DensityMatrix& rho,
                          const Tolerances& tol = kDefaultTolerances) {
  require_same_layout(obs.layout(), rho.layout(), "expectation");
  require(obs.is_hermitian(tol.structural), "expectation: observable is not Hermitian");
  const cplx v = (obs.matrix() * rho.matrix()).trace();
  guard(std::abs(v.imag()) < tol.structural * std::max(1.0, std::abs(v.real())),
        "expectation: imaginary residue exceeds tolerance");
  return v.real();
}

inline double expectation(const Operator& obs, const Ket& k,
                          const Tolerances& tol = kDefaultTolerances) {
  require_same_layout(obs.layout(), k.layout(), "expectation");
  require(obs.is_hermitian(tol.structural), "expectation: observable is not Hermitian");
  const cplx v = k.amplitudes().dot(obs.matrix() * k.amplitudes());
  guard(std::abs(v.imag()) < tol.structural * std::max(1.0, std::abs(v.real())),
        "expectation: imaginary residue exceeds tolerance");
  return v.real();
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// Half the trace norm of a - b, for Hermitian a, b.
inline double trace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix d = a - b;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace pauli {
inline CMatrix I() { return CMatrix::Identity(2, 2); }
inline CMatrix X() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix Y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline CMatrix Z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

inline Operator qubit_op(const CMatrix& m, std::string label = "q") {
  return Operator(RegisterLayout::single(std::move(label), 2), m);
}

inline Ket qubit_ket(cplx a0, cplx a1, std::string label = "q") {
  CVector v(2);
  v << a0, a1;
  return Ket(RegisterLayout::single(std::move(label), 2), std::move(v));
}

}  // namespace stinemeas
