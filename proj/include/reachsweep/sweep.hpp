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
#include <optional>
#include <string>
#include <vector>

#include "reachsweep/ddp_solver.hpp"
#include "reachsweep/grid.hpp"

namespace reachsweep {

struct SeedSet {
  Box domain;
  std::vector<int> counts;
  std::vector<Vec> seeds;
};

// Lattice of prod(counts) seeds over `domain`, first axis slowest. With a
// jitter seed every point moves by up to a quarter spacing per axis (clamped
// to the domain) using a fixed-seed Mersenne Twister.
SeedSet seed_grid(const Box& domain, const std::vector<int>& counts,
                  std::optional<std::uint64_t> jitter = std::nullopt);

// Pointwise-min union of trajectory value models on the seed lattice.
struct ValueBuffer {
  DenseGrid grid;
  std::vector<int> contributors;

  ValueBuffer() = default;
  ValueBuffer(const Box& domain, const std::vector<int>& counts);
};

// Spacing-based default trust radius: twice the smallest lattice spacing.
double default_trust_radius(const ValueBuffer& buffer);

// Min-merges eval_quad(model, x - anchor) into every node within Euclidean
// distance r of the model's anchor state.
void deposit(ValueBuffer& buffer, const QuadValue& model, double r);
void deposit(ValueBuffer& buffer, const TrajectoryIterate& traj, double r);

struct SeedReport {
  std::size_t index = 0;
  Vec seed;
  std::string status;  // "converged", "stalled", "max_iters" or "failed"
  std::string error;
  int iterations = 0;
  int accepted_steps = 0;
  double final_ratio = 0.0;
  double value = 0.0;  // stored value at t = -T
  int monotone_violations = 0;
  int ratio_violations = 0;
  double seconds = 0.0;
};

struct SweepOptions {
  double trust_radius = 0.0;  // 0 selects default_trust_radius
  int threads = 1;
};

struct SweepResult {
  ValueBuffer buffer;
  std::vector<SeedReport> reports;
  double trust_radius = 0.0;
};

// Solves every seed independently (in parallel when threads > 1) and merges
// the t = -T value models in seed order, so the buffer does not depend on
// scheduling. Failures are recorded per seed.
SweepResult run_sweep(const SystemModel& model, const TerminalCost& target,
                      const SeedSet& seeds, const Horizon& horizon,
                      const SolverConfig& cfg, const SweepOptions& options = {});

}  // namespace reachsweep
