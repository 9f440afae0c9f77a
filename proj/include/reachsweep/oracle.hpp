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
// Reference solutions used to validate the trajectory-based sweep: a dense
// Lax-Friedrichs solver for V_t + min{0, H(x, grad V)} = 0 (n <= 3), a matrix
// exponential for linear transport, and level-set distance metrics.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include <vector>

#include "reachsweep/dynamics.hpp"
#include "reachsweep/grid.hpp"
#include "reachsweep/levelset.hpp"
#include "reachsweep/value_model.hpp"

namespace reachsweep {

// max over u-box vertices of min over v-box vertices of <p, f(t, x, u, v)>.
// Exact for control-affine models; deliberately shares no code with
// hamiltonian().
double vertex_hamiltonian(const SystemModel& model, double t, const Vec& x,
                          const Vec& p);

// Per-axis bound alpha_i = max over nodes and control vertices of |f_i|.
std::vector<double> dissipation_bounds(const SystemModel& model, const DenseGrid& grid,
                                       double t = 0.0);

// Largest step with dt * sum_i alpha_i / h_i <= 0.5.
double cfl_limit(const std::vector<double>& alpha, const DenseGrid& grid);

// One explicit backward-time Lax-Friedrichs step from time t to t - dt, with
// the tube update V <- min(V_candidate, V). Throws ConfigError naming the
// admissible step when dt violates the CFL bound.
DenseGrid lf_step(const DenseGrid& grid, const SystemModel& model, double dt,
                  double t = 0.0, int threads = 1);

struct PdeSpec {
  Vec lo;
  Vec hi;
  std::vector<int> nodes;
  double dt = 0.0;  // 0 selects the CFL limit
};

// Initializes V = g on the nodes and steps back to t = -T.
struct PdeSchedule {
  double dt = 0.0;   // step actually taken, T / steps
  int steps = 0;
  double cfl = 0.0;  // admissible step bound
};

// Validates the grid and time step; throws ConfigError naming the admissible
// step when an explicit dt violates the CFL bound.
PdeSchedule pde_schedule(const SystemModel& model, const PdeSpec& spec, double T);

DenseGrid solve_pde(const SystemModel& model, const TerminalCost& target,
                    const PdeSpec& spec, double T, int threads = 1);

// exp(A) by scaling and squaring of a truncated Taylor series.
Mat matrix_exponential(const Mat& A);

// Phi^T G Phi with Phi = exp(-A t): the Hessian at time t <= 0 of the value
// 0.5 x(0)^T G x(0) under x' = A x.
Mat analytic_transport_vxx(const Mat& A, const Mat& G, double t);

struct SetDistance {
  double hausdorff = 0.0;
  double mean = 0.0;
};

// Symmetric Hausdorff and mean nearest distances between points sampled on
// both sets. Throws ComparisonError naming the empty side.
SetDistance compare_sets(const LevelSet& a, const LevelSet& b);

}  // namespace reachsweep
