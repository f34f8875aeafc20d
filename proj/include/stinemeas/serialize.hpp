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

#include <json.hpp>
#include <string>
#include <vector>

#include "stinemeas/hilbert.hpp"

// JSON form: {"layout": [{"label","dim","kind"}...], "re": [...], "im": [...]}
// with matrices flattened row-major.
namespace stinemeas {

using json = nlohmann::json;

inline void to_json(json& j, const RegisterLayout& l) {
  j = json::array();
  for (const auto& r : l.registers())
    j.push_back({{"label", r.label}, {"dim", r.dim}, {"kind", to_string(r.kind)}});
}

inline void from_json(const json& j, RegisterLayout& l) {
  require(j.is_array(), "layout must be an array");
  std::vector<Register> regs;
  for (const auto& e : j) {
    require(e.is_object(), "layout entry must be an object");
    for (const auto& [k, v] : e.items())
      require(k == "label" || k == "dim" || k == "kind", "unknown layout key '" + k + "'");
    require(e.contains("label") && e.contains("dim"), "layout entry needs label and dim");
    require(e["dim"].is_number_unsigned() && e["dim"].get<std::size_t>() >= 1,
            "register dim must be a positive integer");
    Register r;
    r.label = e["label"].get<std::string>();
    r.dim = e["dim"].get<std::size_t>();
    r.kind = e.contains("kind") ? register_kind_from_string(e["kind"].get<std::string>())
                                : RegisterKind::physical;
    regs.push_back(std::move(r));
  }
  l = RegisterLayout(std::move(regs));
}

namespace detail {

inline json flatten(const CMatrix& m, bool imag) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) a.push_back(imag ? m(i, k).imag() : m(i, k).real());
  return a;
}

inline CMatrix unflatten(const json& j, Eigen::Index rows, Eigen::Index cols) {
  for (const char* key : {"re", "im"})
    require(j.contains(key) && j[key].is_array() &&
                j[key].size() == static_cast<std::size_t>(rows * cols),
            std::string("'") + key + "' must be an array of length " + std::to_string(rows * cols));
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto f = static_cast<std::size_t>(i * cols + k);
      m(i, k) = cplx(j["re"][f].get<double>(), j["im"][f].get<double>());
    }
  return m;
}

inline RegisterLayout layout_of(const json& j) {
  require(j.is_object() && j.contains("layout"), "serialized value needs a 'layout'");
  return j["layout"].get<RegisterLayout>();
}

}  // namespace detail

inline void to_json(json& j, const Operator& op) {
  j = {{"layout", op.layout()},
       {"re", detail::flatten(op.matrix(), false)},
       {"im", detail::flatten(op.matrix(), true)}};
}

inline void from_json(const json& j, Operator& op) {
  RegisterLayout l = detail::layout_of(j);
  const auto d = static_cast<Eigen::Index>(l.total_dim());
  op = Operator(l, detail::unflatten(j, d, d));
}

inline void to_json(json& j, const DensityMatrix& rho) {
  j = {{"layout", rho.layout()},
       {"re", detail::flatten(rho.matrix(), false)},
       {"im", detail::flatten(rho.matrix(), true)}};
}

inline void from_json(const json& j, DensityMatrix& rho) {
  RegisterLayout l = detail::layout_of(j);
  const auto d = static_cast<Eigen::Index>(l.total_dim());
  rho = DensityMatrix(l, detail::unflatten(j, d, d));
}

inline void to_json(json& j, const Ket& k) {
  j = {{"layout", k.layout()},
       {"re", detail::flatten(k.amplitudes(), false)},
       {"im", detail::flatten(k.amplitudes(), true)}};
}

inline void from_json(const json& j, Ket& k) {
  RegisterLayout l = detail::layout_of(j);
  const auto d = static_cast<Eigen::Index>(l.total_dim());
  k = Ket(l, detail::unflatten(j, d, 1).col(0));
}

}  // namespace stinemeas
