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

///////////////////////////////////////////////////////////////////////////////
//
// Successive second-order approximation of the HJI value along one seeded
// trajectory. Time runs over the uniform schedule t_k = -T + k dt; step k
// covers [t_k, t_{k+1}] with zero-order-hold controls.
//
// The value tracked along the nominal is the tube cost min_k g(x_r[k]). The
// backward pass carries (v, V_x, V_xx) from t = 0 toward t = -T and re-anchors
// the model on the target cost wherever the nominal attains a new minimum of g.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include <string>
#include <vector>

#include "reachsweep/dynamics.hpp"
#include "reachsweep/value_model.hpp"

namespace reachsweep {

enum class Integrator { kEuler, kRk4 };

struct LineSearchConfig {
  double alpha0 = 1.0;
  double shrink = 0.5;
  double c_armijo = 1e-4;
  int max_backtracks = 16;
};

struct SolverConfig {
  double eta = 1e-3;
  double rho = 0.5;
  double mu = 1e-6;
  double epsilon = 0.1;
  int max_iters = 100;
  Integrator integrator = Integrator::kRk4;
  LineSearchConfig line_search;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
};

struct GainPair {
  Mat k_u;  // n_u x n
  Mat k_v;  // n_v x n
  Vec du_ff;
  Vec dv_ff;
};

// Components pinned at a box bound; empty vectors mean "none".
struct ClampMask {
  std::vector<bool> u;
  std::vector<bool> v;
};

struct IterationRecord {
  int iteration = 0;
  double alpha = 0.0;
  ValueTriple triple;
  double ratio = 0.0;
  bool accepted = false;
};

struct TrajectoryIterate {
  Horizon horizon;
  std::vector<Vec> x_r;     // K
  std::vector<Vec> u_r;     // K-1
  std::vector<Vec> v_r;     // K-1
  std::vector<Vec> u_star;  // K-1
  std::vector<Vec> v_star;  // K-1
  std::vector<GainPair> gains;     // K-1
  std::vector<QuadValue> values;   // K
  std::vector<bool> frozen;        // K; frozen[k] refers to step k
  double t_eff = 0.0;
  std::vector<IterationRecord> stats;

  // Tube cost of the nominal, min_k g(x_r[k]).
  double nominal_cost = 0.0;
  // Predicted change of the tube cost for a full step, split by player.
  double predicted = 0.0;
  double predicted_u = 0.0;
  double predicted_v = 0.0;
  // Steps where the stored value increased going backward (expected zero).
  int monotone_violations = 0;
  // Feedforward scale, halved after a failed line search.
  double trust = 1.0;
};

// Solves the coupled system for (k_u, k_v) and the feedforward pair as one
// block-linear problem. Clamped components get zero rows. Throws
// NumericalError when the reduced block matrix is singular.
GainPair solve_gains(const HamiltonianExpansion& exp, const Mat& vxx,
                     const ClampMask& clamped = {});

// Smallest eigenvalue shift making -H_uu >= mu I and H_vv >= mu I.
HamiltonianExpansion regularize(const HamiltonianExpansion& exp, double mu);

// One step of x' = f(t, x, u, v) with held controls.
Vec integrate_step(const SystemModel& model, double t, const Vec& x, const Vec& u,
                   const Vec& v, double dt, Integrator integrator);

// Rolls out box-center controls from `seed`. Throws RolloutError when the
// state leaves the model's domain.
TrajectoryIterate initial_trajectory(const SystemModel& model, const Vec& seed,
                                     const Horizon& horizon, const SolverConfig& cfg);

void backward_pass(const SystemModel& model, const TerminalCost& target,
                   TrajectoryIterate& traj, const SolverConfig& cfg);

struct ForwardResult {
  TrajectoryIterate candidate;
  ValueTriple triple;
};

ForwardResult forward_pass(const SystemModel& model, const TerminalCost& target,
                           const TrajectoryIterate& traj, double alpha,
                           const SolverConfig& cfg);

bool accept_step(const ValueTriple& stats, double rho);

enum class LineSearchStatus { kAccepted, kConverged, kNoProgress };

struct LineSearchResult {
  LineSearchStatus status = LineSearchStatus::kNoProgress;
  double alpha = 0.0;
  ValueTriple triple;
};

// Replaces `traj` with the first accepted candidate. On kNoProgress `traj` is
// left unchanged apart from its trust scale.
LineSearchResult line_search(const SystemModel& model, const TerminalCost& target,
                             TrajectoryIterate& traj, const SolverConfig& cfg);

struct SolveResult {
  TrajectoryIterate traj;
  int iterations = 0;
  int accepted_steps = 0;
  bool converged = false;
  std::string status;  // "converged", "stalled" or "max_iters"
  int monotone_violations = 0;  // summed over all backward passes
  int ratio_violations = 0;     // accepted iterations with ratio <= rho
};

SolveResult solve_trajectory(const SystemModel& model, const TerminalCost& target,
                             const Vec& seed, const Horizon& horizon,
                             const SolverConfig& cfg);

}  // namespace reachsweep
