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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "reachsweep/errors.hpp"
#include "reachsweep/sweep.hpp"

namespace reachsweep {
namespace {

Vec V(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

QuadValue flat_model(const Vec& anchor, double v) {
  QuadValue q;
  q.v = v;
  q.vx = Vec::Zero(anchor.size());
  q.vxx = Mat::Zero(anchor.size(), anchor.size());
  q.anchor = Phase{anchor, -1.0};
  return q;
}

TEST(SeedGrid, LatticeIncludesCornersAndCenter) {
  const SeedSet s = seed_grid(Box(V({-1, -1}), V({1, 1})), {3, 3});
  ASSERT_EQ(s.seeds.size(), 9u);
  EXPECT_EQ(s.seeds.front(), V({-1, -1}));
  EXPECT_EQ(s.seeds[4], V({0, 0}));
  EXPECT_EQ(s.seeds.back(), V({1, 1}));
}

TEST(SeedGrid, TwoPointsPerAxis) {
  const SeedSet s = seed_grid(Box(V({0}), V({1})), {2});
  ASSERT_EQ(s.seeds.size(), 2u);
  EXPECT_EQ(s.seeds[0], V({0}));
  EXPECT_EQ(s.seeds[1], V({1}));
}

TEST(SeedGrid, JitterIsDeterministicAndInside) {
  const Box box(V({-1, -2}), V({1, 2}));
  const SeedSet a = seed_grid(box, {5, 7}, 11);
  const SeedSet b = seed_grid(box, {5, 7}, 11);
  const SeedSet c = seed_grid(box, {5, 7}, 12);
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_NE(a.seeds, c.seeds);
  for (const Vec& x : a.seeds) EXPECT_TRUE(box.contains(x));
}

TEST(SeedGrid, MismatchedCountsRejected) {
  EXPECT_THROW(seed_grid(Box(V({0, 0}), V({1, 1})), {3}), ConfigError);
}

TEST(Deposit, MinimumOverContributors) {
  ValueBuffer buf(Box(V({0, 0}), V({1, 1})), {11, 11});
  EXPECT_DOUBLE_EQ(default_trust_radius(buf), 0.2);
  const std::size_t node = buf.grid.flat({5, 5});
  deposit(buf, flat_model(V({0.5, 0.5}), 3.0), 0.15);
  EXPECT_EQ(buf.grid[node], 3.0);
  deposit(buf, flat_model(V({0.5, 0.5}), -1.0), 0.15);
  EXPECT_EQ(buf.grid[node], -1.0);
  deposit(buf, flat_model(V({0.5, 0.5}), 7.0), 0.15);
  EXPECT_EQ(buf.grid[node], -1.0);
  EXPECT_EQ(buf.contributors[node], 3);
  // Neighbors at distance 0.1 are inside the ball; diagonal ones at 0.1414 too;
  // nodes two steps away are not.
  EXPECT_EQ(buf.contributors[buf.grid.flat({6, 6})], 3);
  EXPECT_EQ(buf.contributors[buf.grid.flat({7, 5})], 0);
  EXPECT_TRUE(std::isinf(buf.grid[buf.grid.flat({7, 5})]));
}

TEST(Deposit, EvaluatesQuadraticModel) {
  ValueBuffer buf(Box(V({0}), V({1})), {11});
  QuadValue q = flat_model(V({0.5}), 1.0);
  q.vx = V({2.0});
  q.vxx = Mat{{4.0}};
  deposit(buf, q, 0.25);
  EXPECT_NEAR(buf.grid[7], 1.0 + 2.0 * 0.2 + 0.5 * 4.0 * 0.04, 1e-12);
  EXPECT_NEAR(buf.grid[3], 1.0 - 2.0 * 0.2 + 0.5 * 4.0 * 0.04, 1e-12);
  EXPECT_EQ(buf.contributors[8], 0);
}

TEST(Deposit, AnchorOutsideDomainTouchesNothing) {
  ValueBuffer buf(Box(V({0, 0}), V({1, 1})), {5, 5});
  deposit(buf, flat_model(V({3, 3}), -1.0), 0.5);
  for (int c : buf.contributors) EXPECT_EQ(c, 0);
}

struct ScalarDrift {
  SystemModel model = make_benchmark("scalar_drift");
  TerminalCost target = TerminalCost::Ball(V({0}), 1.0);
  Horizon horizon{1.0, 101};
  SolverConfig cfg;
};

TEST(RunSweep, ScalarDriftSignChangeNearTwo) {
  ScalarDrift p;
  const SeedSet seeds = seed_grid(Box(V({-4}), V({4})), {81});
  const SweepResult r = run_sweep(p.model, p.target, seeds, p.horizon, p.cfg);
  for (const SeedReport& s : r.reports) EXPECT_EQ(s.status, "converged") << s.seed[0];
  const DenseGrid& g = r.buffer.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i)[0];
    if (std::abs(x) < 1.9) {
      EXPECT_LT(g[i], 0.0) << x;
    }
    if (std::abs(x) > 2.1) {
      EXPECT_GT(g[i], 0.0) << x;
    }
  }
}

TEST(RunSweep, SeedInsideTargetGivesNegativeValues) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  SeedSet seeds = seed_grid(Box(V({-1, -1}), V({1, 1})), {21, 21});
  seeds.seeds = {V({0, 0})};
  const SweepResult r = run_sweep(m, target, seeds, Horizon(0.5, 51), SolverConfig{});
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_LE(r.reports[0].value, 0.0);
  EXPECT_LT(r.buffer.grid[r.buffer.grid.flat({10, 10})], 0.0);
}

TEST(RunSweep, EmptySeedSetLeavesBufferUnset) {
  ScalarDrift p;
  SeedSet seeds = seed_grid(Box(V({-4}), V({4})), {9});
  seeds.seeds.clear();
  const SweepResult r = run_sweep(p.model, p.target, seeds, p.horizon, p.cfg);
  EXPECT_TRUE(r.reports.empty());
  for (double v : r.buffer.grid.values()) EXPECT_TRUE(std::isinf(v) && v > 0);
}

// Property: the stored grid depends on neither seed order nor thread count.
TEST(RunSweep, PermutationAndThreadInvariance) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  const Horizon h(0.5, 51);
  const SeedSet seeds = seed_grid(Box(V({-1.5, -1.5}), V({1.5, 1.5})), {15, 15});
  const SweepResult base = run_sweep(m, target, seeds, h, SolverConfig{}, {0.0, 1});
  SeedSet shuffled = seeds;
  std::shuffle(shuffled.seeds.begin(), shuffled.seeds.end(), std::mt19937_64(4));
  const SweepResult perm = run_sweep(m, target, shuffled, h, SolverConfig{}, {0.0, 1});
  const SweepResult threaded = run_sweep(m, target, seeds, h, SolverConfig{}, {0.0, 4});
  EXPECT_EQ(base.buffer.grid.values(), perm.buffer.grid.values());
  EXPECT_EQ(base.buffer.contributors, perm.buffer.contributors);
  EXPECT_EQ(base.buffer.grid.values(), threaded.buffer.grid.values());
}

// Property: a longer horizon yields a larger tube.
TEST(RunSweep, TubesNest) {
  ScalarDrift p;
  const SeedSet seeds = seed_grid(Box(V({-4}), V({4})), {81});
  const SweepResult shorter = run_sweep(p.model, p.target, seeds, Horizon(0.5, 51), p.cfg);
  const SweepResult longer = run_sweep(p.model, p.target, seeds, Horizon(1.0, 101), p.cfg);
  for (std::size_t i = 0; i < shorter.buffer.grid.size(); ++i) {
    if (shorter.buffer.grid[i] <= 0.0) {
      EXPECT_LE(longer.buffer.grid[i], 0.0) << i;
    }
    EXPECT_LE(longer.buffer.grid[i], shorter.buffer.grid[i] + 1e-9) << i;
  }
}

TEST(RunSweep, FailedSeedIsReportedNotFatal) {
  const SystemModel m =
      make_benchmark("double_integrator", {{"domain_lo", {-1, -1}}, {"domain_hi", {1, 1}}});
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  SeedSet seeds = seed_grid(Box(V({-1, -1}), V({1, 1})), {5, 5});
  seeds.seeds = {V({0.9, 0.9}), V({0, 0})};
  const SweepResult r = run_sweep(m, target, seeds, Horizon(2.0, 41), SolverConfig{});
  EXPECT_EQ(r.reports[0].status, "failed");
  EXPECT_FALSE(r.reports[0].error.empty());
  EXPECT_NE(r.reports[1].status, "failed");
}

}  // namespace
}  // namespace reachsweep
