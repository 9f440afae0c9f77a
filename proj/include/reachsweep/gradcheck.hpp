// Copyright 2026 The reachsweep Authors
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
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "reachsweep/dynamics.hpp"

namespace reachsweep {

struct GradcheckSpec {
  std::string corrupt;  // benchmark whose Jacobian is deliberately perturbed
  int samples = 100;
  std::uint64_t rng_seed = 7;
};

inline constexpr double kJacobianTol = 1e-5;
inline constexpr double kHamiltonianTol = 1e-4;
inline constexpr double kQuadTol = 1e-10;
inline constexpr double kCostateTol = 1e-3;

struct BlockError {
  std::string suite;  // "jacobian", "hamiltonian", "quad_model" or "costate"
  std::string model;
  std::string block;
  double error = 0.0;  // max over samples
  double tol = 0.0;
  bool pass() const { return error <= tol; }
};

struct GradcheckReport {
  std::vector<BlockError> blocks;

  bool pass() const;
  // First failing block as "suite/model/block", or "" when all pass.
  std::string first_failure() const;
  nlohmann::json ToJson() const;
};

// Wraps `inner` and adds `delta` to f_x(0, 0). Test hook for the harness.
std::shared_ptr<const Dynamics> corrupt_jacobian(std::shared_ptr<const Dynamics> inner,
                                                 double delta = 1e-2);

// The benchmark instances the harness checks, with default parameters
// (linear_generic gets a fixed 3-state instance).
std::vector<SystemModel> gradcheck_models();

// Errors are measured as max |a - b| / max(1, max |b|) against central
// differences, except the quad_model suite, which is absolute.
GradcheckReport run_gradcheck(const GradcheckSpec& spec);

}  // namespace reachsweep
