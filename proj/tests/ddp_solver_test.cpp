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

#include <cmath>
#include <random>

#include "reachsweep/ddp_solver.hpp"
#include "reachsweep/errors.hpp"
#include "reachsweep/oracle.hpp"

namespace reachsweep {
namespace {

Vec V(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

HamiltonianExpansion scalar_blocks(double uu, double vv, double uv, const Mat& ux,
                                   const Mat& vx) {
  const auto n = ux.cols();
  HamiltonianExpansion e;
  e.H_uu = Mat::Constant(1, 1, uu);
  e.H_vv = Mat::Constant(1, 1, vv);
  e.H_uv = Mat::Constant(1, 1, uv);
  e.H_ux = ux;
  e.H_vx = vx;
  e.H_u = Vec::Zero(1);
  e.H_v = Vec::Zero(1);
  e.f_u = Mat::Zero(n, 1);
  e.f_v = Mat::Zero(n, 1);
  return e;
}

SystemModel lq_model() {
  return make_benchmark("linear_generic",
                        {{"A", {{-1.0}}}, {"B_u", {{1.0}}}, {"B_v", 0}, {"u_lo", -0.1}, {"u_hi", 0.1}});
}

TEST(SolverConfig, RhoRangeMessage) {
  SolverConfig cfg;
  cfg.rho = 1.5;
  try {
    cfg.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("ρ ∈ (0, 1]"), std::string::npos) << e.what();
  }
  cfg.rho = 1.0;
  EXPECT_NO_THROW(cfg.validate());
  cfg.eta = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SolveGains, DecoupledClosedForm) {
  const GainPair g =
      solve_gains(scalar_blocks(-1, 2, 0, Mat{{2, 0}}, Mat{{0, 1}}), Mat::Zero(2, 2));
  EXPECT_TRUE(g.k_u.isApprox(Mat{{2, 0}}));
  EXPECT_NEAR(g.k_v(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(g.k_v(0, 1), -0.5, 1e-15);
}

TEST(SolveGains, HomogeneousSystem) {
  const GainPair g =
      solve_gains(scalar_blocks(-1, 2, 0.3, Mat::Zero(1, 2), Mat::Zero(1, 2)), Mat::Zero(2, 2));
  EXPECT_EQ(g.k_u, Mat::Zero(1, 2));
  EXPECT_EQ(g.k_v, Mat::Zero(1, 2));
}

TEST(SolveGains, ScalarCoupledFixedPoint) {
  const HamiltonianExpansion e = scalar_blocks(-2, 2, 1, Mat{{1}}, Mat{{1}});
  const GainPair g = solve_gains(e, Mat::Zero(1, 1));
  EXPECT_NEAR(g.k_u(0, 0), 0.2, 1e-12);
  EXPECT_NEAR(g.k_v(0, 0), -0.6, 1e-12);
  // H_uu k_u + H_uv k_v + Q_ux = 0 and H_vu k_u + H_vv k_v + Q_vx = 0.
  EXPECT_LT(std::abs(-2 * g.k_u(0, 0) + g.k_v(0, 0) + 1), 1e-12);
  EXPECT_LT(std::abs(g.k_u(0, 0) + 2 * g.k_v(0, 0) + 1), 1e-12);
}

TEST(SolveGains, ClampedRowsAreZero) {
  ClampMask mask{{true}, {false}};
  const GainPair g = solve_gains(scalar_blocks(-2, 2, 1, Mat{{1}}, Mat{{1}}), Mat::Zero(1, 1), mask);
  EXPECT_EQ(g.k_u(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(g.k_v(0, 0), -0.5);
}

TEST(SolveGains, SingularSystemReportsCondition) {
  try {
    solve_gains(scalar_blocks(0, 0, 0, Mat{{1}}, Mat{{1}}), Mat::Zero(1, 1));
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_TRUE(std::isinf(e.condition_estimate()) || e.condition_estimate() > 1e14);
  }
}

// Property: the block system is solved to residual <= 1e-8 on random data.
TEST(SolveGains, ResidualOnRandomSystems) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto rnd = [&](int r, int c) { return Mat(Mat::NullaryExpr(r, c, [&] { return U(rng); })); };
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5, nu = 1 + trial % 2, nv = 1 + (trial / 2) % 2;
    HamiltonianExpansion e;
    const Mat a = rnd(nu, nu), b = rnd(nv, nv);
    e.H_uu = -(a * a.transpose()) - 0.5 * Mat::Identity(nu, nu);
    e.H_vv = b * b.transpose() + 0.5 * Mat::Identity(nv, nv);
    e.H_uv = rnd(nu, nv);
    e.H_ux = rnd(nu, n);
    e.H_vx = rnd(nv, n);
    e.H_u = rnd(nu, 1);
    e.H_v = rnd(nv, 1);
    e.f_u = rnd(n, nu);
    e.f_v = rnd(n, nv);
    const Mat c = rnd(n, n);
    const Mat vxx = c + c.transpose();
    const GainPair g = solve_gains(e, vxx);
    const Mat ru = e.H_uu * g.k_u + e.H_uv * g.k_v + e.H_ux + e.f_u.transpose() * vxx;
    const Mat rv = e.H_uv.transpose() * g.k_u + e.H_vv * g.k_v + e.H_vx + e.f_v.transpose() * vxx;
    EXPECT_LE(ru.cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(rv.cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Regularize, ShiftsIndefiniteBlock) {
  HamiltonianExpansion e;
  e.H_uu = Mat::Constant(1, 1, -1.0);
  e.H_vv = Mat{{0.5, 0}, {0, -1}};
  const HamiltonianExpansion r = regularize(e, 0.1);
  EXPECT_NEAR(r.H_vv(0, 0), 1.6, 1e-12);
  EXPECT_NEAR(r.H_vv(1, 1), 0.1, 1e-12);
  EXPECT_EQ(r.H_uu, e.H_uu);
}

TEST(Regularize, DefiniteBlocksUnchanged) {
  HamiltonianExpansion e;
  e.H_uu = Mat{{-2, 0.1}, {0.1, -3}};
  e.H_vv = Mat{{4}};
  const HamiltonianExpansion r = regularize(e, 0.01);
  EXPECT_EQ(r.H_uu, e.H_uu);
  EXPECT_EQ(r.H_vv, e.H_vv);
}

TEST(Regularize, ForcedShiftOnZeroBlock) {
  HamiltonianExpansion e;
  e.H_uu = Mat::Zero(1, 1);
  e.H_vv = Mat::Zero(0, 0);
  EXPECT_DOUBLE_EQ(regularize(e, 0.1).H_uu(0, 0), -0.1);
}

TEST(AcceptStep, Examples) {
  EXPECT_TRUE(accept_step(ValueTriple{0.8, 1.0, 0.0}, 0.5));
  EXPECT_FALSE(accept_step(ValueTriple{0.3, 1.0, 0.0}, 0.5));
  EXPECT_FALSE(accept_step(ValueTriple{0.0, 0.0, 0.0}, 0.5));
}

TEST(InitialTrajectory, BoxCenterControlsAndRecordConsistency) {
  const SystemModel m = make_benchmark("double_integrator", {{"u_lo", -1}, {"u_hi", 0.5}});
  SolverConfig cfg;
  const Horizon h(1.0, 21);
  const TrajectoryIterate t = initial_trajectory(m, V({0.5, -0.2}), h, cfg);
  ASSERT_EQ(t.x_r.size(), 21u);
  EXPECT_EQ(t.u_r.front(), V({-0.25}));
  EXPECT_EQ(t.v_r.front(), V({0}));
  for (int k = 0; k + 1 < h.K(); ++k) {
    const Vec next = integrate_step(m, h.time(k), t.x_r[k], t.u_r[k], t.v_r[k], h.dt(),
                                    Integrator::kRk4);
    EXPECT_LT((next - t.x_r[k + 1]).norm(), 1e-9);
  }
}

TEST(InitialTrajectory, LeavingDomainIsRolloutError) {
  const SystemModel m =
      make_benchmark("double_integrator", {{"domain_lo", {-1, -1}}, {"domain_hi", {1, 1}}});
  try {
    initial_trajectory(m, V({0.5, 0.9}), Horizon(2.0, 41), SolverConfig{});
    FAIL() << "expected RolloutError";
  } catch (const RolloutError& e) {
    EXPECT_GT(e.step(), 0);
    EXPECT_LE(e.time(), 0.0);
  }
}

TEST(BackwardPass, TerminalAnchoring) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({-1.2, 0.8}), Horizon(0.5, 51), cfg);
  backward_pass(m, target, t, cfg);
  const TerminalEval g = terminal_cost(target, t.x_r.back());
  EXPECT_EQ(t.values.back().v, g.g);
  EXPECT_EQ(t.values.back().vx, g.g_x);
  EXPECT_EQ(t.values.back().vxx, g.g_xx);
}

TEST(BackwardPass, AutonomousLqHessianMatchesTransport) {
  const SystemModel m = make_benchmark("linear_generic", {{"A", {{0, 1}, {0, 0}}}});
  const TerminalCost target = TerminalCost::Quadratic(V({0, 0}), Mat::Identity(2, 2));
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({1.0, -0.4}), Horizon(1.0, 501), cfg);
  backward_pass(m, target, t, cfg);
  const Mat expected = analytic_transport_vxx(Mat{{0, 1}, {0, 0}}, Mat::Identity(2, 2), -1.0);
  EXPECT_LT((t.values.front().vxx - expected).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LT((t.values.front().vxx - Mat{{1, 1}, {1, 2}}).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(BackwardPass, ScalarDriftNeverFrozenOutsideTarget) {
  const SystemModel m = make_benchmark("scalar_drift");
  const TerminalCost target = TerminalCost::Ball(V({0}), 1.0);
  SolverConfig cfg;
  const Horizon h(1.0, 101);
  TrajectoryIterate t = initial_trajectory(m, V({3}), h, cfg);
  for (const Vec& x : t.x_r) ASSERT_EQ(x[0], 3.0);
  backward_pass(m, target, t, cfg);
  for (int k = 0; k < h.K(); ++k) {
    const double s = -h.time(k);
    EXPECT_NEAR(t.values[k].v, 2.0 - s, 1e-9) << "k=" << k;
    if (k + 1 < h.K()) {
      EXPECT_FALSE(t.frozen[k]);
    }
  }
  EXPECT_EQ(t.monotone_violations, 0);
}

TEST(BackwardPass, FrozenInsideTarget) {
  // Inside the target with the evader unable to push out: H* >= 0 is never
  // reached here, but a zero costate from the ball center freezes every step.
  const SystemModel m = make_benchmark("scalar_drift");
  const TerminalCost target = TerminalCost::Ball(V({0}), 1.0);
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({0}), Horizon(1.0, 11), cfg);
  backward_pass(m, target, t, cfg);
  for (int k = 0; k < 11; ++k) EXPECT_EQ(t.values[k].v, -1.0);
}

TEST(ForwardPass, ZeroStepReproducesNominal) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  SolverConfig cfg;
  SolveResult res = solve_trajectory(m, target, V({-1.0, 0.6}), Horizon(0.5, 51), cfg);
  ASSERT_TRUE(res.converged);
  const TrajectoryIterate& t = res.traj;
  const ForwardResult f = forward_pass(m, target, t, 0.0, cfg);
  for (std::size_t k = 0; k < t.x_r.size(); ++k) EXPECT_EQ(f.candidate.x_r[k], t.x_r[k]);
  for (std::size_t k = 0; k < t.u_r.size(); ++k) {
    EXPECT_EQ(f.candidate.u_r[k], t.u_r[k]);
    EXPECT_EQ(f.candidate.v_r[k], t.v_r[k]);
  }
}

TEST(ForwardPass, QuadraticProblemHasUnitRatio) {
  const SystemModel m = lq_model();
  const TerminalCost target = TerminalCost::Quadratic(V({0}), Mat::Identity(1, 1));
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({2}), Horizon(1.0, 101), cfg);
  backward_pass(m, target, t, cfg);
  const ForwardResult f = forward_pass(m, target, t, 1.0, cfg);
  ASSERT_GT(f.triple.v_pred, 0.0);
  EXPECT_NEAR(f.triple.v_actual / f.triple.v_pred, 1.0, 1e-6);
}

TEST(ForwardPass, ControlsStayInBoxes) {
  const SystemModel m = make_benchmark("dubins_rel", {{"u_max", 0.7}, {"v_max", 0.4}});
  const TerminalCost target = TerminalCost::Cylinder({0, 1}, V({0, 0}), 0.5, 3);
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({1.5, -0.5, 0.3}), Horizon(1.0, 51), cfg);
  backward_pass(m, target, t, cfg);
  for (double alpha : {1.0, 0.5, 0.1}) {
    const ForwardResult f = forward_pass(m, target, t, alpha, cfg);
    for (std::size_t k = 0; k < f.candidate.u_r.size(); ++k) {
      EXPECT_LE(std::abs(f.candidate.u_r[k][0]), 0.7);
      EXPECT_LE(std::abs(f.candidate.v_r[k][0]), 0.4);
    }
  }
}

TEST(LineSearch, QuadraticAcceptsFullStep) {
  const SystemModel m = lq_model();
  const TerminalCost target = TerminalCost::Quadratic(V({0}), Mat::Identity(1, 1));
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({2}), Horizon(1.0, 101), cfg);
  backward_pass(m, target, t, cfg);
  const LineSearchResult r = line_search(m, target, t, cfg);
  EXPECT_EQ(r.status, LineSearchStatus::kAccepted);
  EXPECT_EQ(r.alpha, 1.0);
}

TEST(LineSearch, NoPredictedImprovementConverges) {
  const SystemModel m = make_benchmark("linear_generic", {{"A", {{0, 1}, {0, 0}}}});
  const TerminalCost target = TerminalCost::Quadratic(V({0, 0}), Mat::Identity(2, 2));
  SolverConfig cfg;
  TrajectoryIterate t = initial_trajectory(m, V({1, 1}), Horizon(1.0, 11), cfg);
  backward_pass(m, target, t, cfg);
  EXPECT_EQ(line_search(m, target, t, cfg).status, LineSearchStatus::kConverged);
}

TEST(LineSearch, AllBacktracksFailLeavesNominal) {
  // The pursuer's linear prediction overshoots the ball center, so short
  // searches with a strict ratio find nothing acceptable.
  const SystemModel m = make_benchmark("scalar_drift");
  const TerminalCost target = TerminalCost::Ball(V({0}), 1.0);
  SolverConfig cfg;
  cfg.rho = 0.99;
  cfg.line_search.max_backtracks = 2;
  TrajectoryIterate t = initial_trajectory(m, V({0.05}), Horizon(1.0, 101), cfg);
  backward_pass(m, target, t, cfg);
  const TrajectoryIterate before = t;
  const LineSearchResult r = line_search(m, target, t, cfg);
  EXPECT_EQ(r.status, LineSearchStatus::kNoProgress);
  EXPECT_EQ(t.x_r, before.x_r);
  EXPECT_EQ(t.v_r, before.v_r);
  EXPECT_EQ(t.trust, 0.5 * before.trust);
}

TEST(SolveTrajectory, LqConvergesAfterOneAcceptedStep) {
  const SystemModel m = lq_model();
  const TerminalCost target = TerminalCost::Quadratic(V({0}), Mat::Identity(1, 1));
  const SolveResult r = solve_trajectory(m, target, V({2}), Horizon(1.0, 101), SolverConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.accepted_steps, 1);
  EXPECT_EQ(r.status, "converged");
}

TEST(SolveTrajectory, SeedInsideTargetStaysInside) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  const SolveResult r = solve_trajectory(m, target, V({0.1, 0.2}), Horizon(0.5, 51), SolverConfig{});
  EXPECT_LE(r.traj.values.front().v, 0.0);
}

TEST(SolveTrajectory, ScalarDriftInsideAndOutsideTube) {
  const SystemModel m = make_benchmark("scalar_drift");
  const TerminalCost target = TerminalCost::Ball(V({0}), 1.0);
  const Horizon h(1.0, 101);
  const SolveResult in = solve_trajectory(m, target, V({1.5}), h, SolverConfig{});
  EXPECT_TRUE(in.converged);
  EXPECT_LE(in.traj.values.front().v, 0.0);
  EXPECT_NEAR(in.traj.values.front().v, -0.5, 1e-9);
  const SolveResult out = solve_trajectory(m, target, V({2.5}), h, SolverConfig{});
  EXPECT_TRUE(out.converged);
  EXPECT_GT(out.traj.values.front().v, 0.0);
  EXPECT_NEAR(out.traj.values.front().v, 0.5, 1e-9);
}

TEST(SolveTrajectory, InvariantsOnDoubleIntegrator) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  const Horizon h(0.5, 101);
  SolverConfig cfg;
  for (const Vec& seed : {V({-1.2, 0.8}), V({1.0, 0.3}), V({0.6, -0.9}), V({-0.2, 1.1})}) {
    const SolveResult r = solve_trajectory(m, target, seed, h, cfg);
    const TrajectoryIterate& t = r.traj;
    EXPECT_EQ(r.monotone_violations, 0);
    EXPECT_EQ(r.ratio_violations, 0);
    for (const IterationRecord& s : t.stats) {
      if (s.accepted) {
        EXPECT_GT(s.ratio, cfg.rho);
      }
    }
    for (int k = 0; k + 1 < h.K(); ++k) {
      EXPECT_LE(t.values[k].v, t.values[k + 1].v);
      const Vec next = integrate_step(m, h.time(k), t.x_r[k], t.u_r[k], t.v_r[k], h.dt(),
                                      cfg.integrator);
      EXPECT_LT((next - t.x_r[k + 1]).norm(), 1e-9);
    }
    EXPECT_GE(t.t_eff, -h.T());
    EXPECT_LE(t.t_eff, 0.0);
  }
}

TEST(SolveTrajectory, CostateMatchesPerturbedSolves) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(V({0, 0}), 0.5);
  const Horizon h(0.5, 101);
  SolverConfig cfg;
  cfg.eta = 1e-9;
  const Vec seed = V({-1.2, 0.8});
  const Vec vx = solve_trajectory(m, target, seed, h, cfg).traj.values.front().vx;
  const double step = 1e-5;
  for (int i = 0; i < 2; ++i) {
    Vec p = seed, q = seed;
    p[i] += step;
    q[i] -= step;
    const double fd = (solve_trajectory(m, target, p, h, cfg).traj.values.front().v -
                       solve_trajectory(m, target, q, h, cfg).traj.values.front().v) /
                      (2 * step);
    EXPECT_LE(std::abs(vx[i] - fd), 1e-3 * std::max(1.0, std::abs(fd))) << "axis " << i;
  }
}

}  // namespace
}  // namespace reachsweep
