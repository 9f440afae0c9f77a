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

#include "reachsweep/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "reachsweep/ddp_solver.hpp"
#include "reachsweep/errors.hpp"
#include "reachsweep/value_model.hpp"

namespace reachsweep {

nlohmann::json ScalingResult::ToJson() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) {
    pts.push_back({{"n", p.n}, {"seconds", p.seconds}, {"repeats", p.repeats}});
  }
  return {{"points", pts}, {"exponent", exponent}};
}

SystemModel scaling_model(int n) {
  if (n < 1) throw ConfigError("scaling: dimensions must be >= 1");
  nlohmann::json A = nlohmann::json::array();
  nlohmann::json Bu = nlohmann::json::array();
  nlohmann::json Bv = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n; ++j) row.push_back(i == j ? -0.5 : (j == i + 1 ? 1.0 : 0.0));
    A.push_back(row);
    Bu.push_back({i == n - 1 ? 1.0 : 0.0});
    Bv.push_back({i == 0 ? 1.0 : 0.0});
  }
  return make_benchmark("linear_generic",
                        {{"A", A}, {"B_u", Bu}, {"B_v", Bv}, {"v_lo", -0.5}, {"v_hi", 0.5}});
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw ConfigError("slope fit needs at least two points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / m, my = sy / m;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    num += dx * (std::log(y[i]) - my);
    den += dx * dx;
  }
  if (den == 0.0) throw ConfigError("slope fit needs distinct abscissae");
  return num / den;
}

ScalingResult measure_scaling(const std::vector<int>& dims, double min_seconds) {
  const std::set<int> distinct(dims.begin(), dims.end());
  if (distinct.size() < 3) {
    throw ConfigError("scaling: need at least 3 distinct dimensions to fit an exponent");
  }
  using clock = std::chrono::steady_clock;
  ScalingResult out;
  const SolverConfig cfg;
  const Horizon horizon(1.0, 101);
  for (int n : dims) {
    const SystemModel model = scaling_model(n);
    const TerminalCost target = TerminalCost::Ball(Vec::Zero(n), 0.5);
    const TrajectoryIterate start =
        initial_trajectory(model, Vec::Constant(n, 1.0), horizon, cfg);
    ScalingPoint p;
    p.n = n;
    p.seconds = std::numeric_limits<double>::infinity();
    double total = 0.0;
    while (p.repeats < 3 || total < min_seconds) {
      TrajectoryIterate traj = start;
      const auto t0 = clock::now();
      backward_pass(model, target, traj, cfg);
      const ForwardResult fwd = forward_pass(model, target, traj, 1.0, cfg);
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      if (!std::isfinite(fwd.triple.v_actual)) {
        throw NumericalError("scaling: non-finite forward pass at n = " + std::to_string(n),
                             0.0);
      }
      p.seconds = std::min(p.seconds, dt);
      total += dt;
      ++p.repeats;
    }
    out.points.push_back(p);
  }
  std::vector<double> x, y;
  for (const auto& p : out.points) {
    x.push_back(p.n);
    y.push_back(p.seconds);
  }
  out.exponent = loglog_slope(x, y);
  return out;
}

}  // namespace reachsweep
