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

#include <stdexcept>
#include <string>

namespace stinemeas {

// Tolerances used across the library. Every check that takes a Tolerances
// argument defaults to this record.
struct Tolerances {
  double structural = 1e-10;   // hermiticity, unitarity, projector checks
  double trace = 1e-12;        // trace identities
  double completeness = 1e-9;  // projector / Kraus completeness
  double zero_probability = 1e-12;
  double relative_degeneracy = 1e-8;  // times spectral range
};

inline constexpr Tolerances kDefaultTolerances{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad layout, unknown label, bad parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical limits hit: grid escape, cutoff overflow, dimension guard.
class NumericalGuard : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

inline void guard(bool cond, const std::string& msg) {
  if (!cond) throw NumericalGuard(msg);
}

}  // namespace stinemeas
