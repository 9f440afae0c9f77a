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

#include <vector>

#include "json.hpp"
#include "reachsweep/dynamics.hpp"

namespace reachsweep {

struct ScalingPoint {
  int n = 0;
  double seconds = 0.0;  // fastest observed backward + forward pass
  int repeats = 0;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;  // least-squares slope of log(seconds) vs log(n)

  nlohmann::json ToJson() const;
};

// The n-state chain used for timing: x_i' = -0.5 x_i + x_{i+1}, with the
// control on the last state and the disturbance on the first.
SystemModel scaling_model(int n);

// Times one backward pass plus one full-step forward pass per dimension
// (K = 101, ball target). Each timing repeats until `min_seconds` of work
// has been observed and keeps the minimum. Throws ConfigError with fewer
// than three distinct dimensions.
ScalingResult measure_scaling(const std::vector<int>& dims, double min_seconds = 0.2);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace reachsweep
