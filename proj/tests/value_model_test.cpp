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
#include <limits>
#include <random>

#include "reachsweep/errors.hpp"
#include "reachsweep/gradcheck.hpp"
#include "reachsweep/value_model.hpp"

namespace reachsweep {
namespace {

Vec V(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<TerminalCost> signed_distance_targets() {
  return {TerminalCost::Ball(V({0.2, -0.1}), 0.8), TerminalCost::BoxSet(V({-1, -0.5}), V({0.5, 1})),
          TerminalCost::Cylinder({1}, V({0.3}), 0.4, 2)};
}

TEST(TerminalCost, UnitBallExamples) {
  const TerminalCost ball = TerminalCost::Ball(V({0, 0}), 1.0);
  EXPECT_EQ(terminal_cost(ball, V({0, 0})).g, -1.0);
  const TerminalEval far = terminal_cost(ball, V({3, 4}));
  EXPECT_DOUBLE_EQ(far.g, 4.0);
  EXPECT_DOUBLE_EQ(far.g_x[0], 0.6);
  EXPECT_DOUBLE_EQ(far.g_x[1], 0.8);
  EXPECT_EQ(terminal_cost(ball, V({1, 0})).g, 0.0);
}

TEST(TerminalCost, BallCenterHasZeroDerivatives) {
  const TerminalEval c = terminal_cost(TerminalCost::Ball(V({1, 2}), 0.5), V({1, 2}));
  EXPECT_EQ(c.g_x, Vec::Zero(2));
  EXPECT_EQ(c.g_xx, Mat::Zero(2, 2));
  // A few ulps away the direction is meaningless and is treated the same way.
  const TerminalEval near = terminal_cost(TerminalCost::Ball(V({0}), 1.0), V({1e-16}));
  EXPECT_EQ(near.g_x, Vec::Zero(1));
}

TEST(TerminalCost, BoxInsideAndOutside) {
  const TerminalCost box = TerminalCost::BoxSet(V({-1, -1}), V({1, 3}));
  // Inside: the largest excess, here along axis 0.
  const TerminalEval in = terminal_cost(box, V({0.5, 1}));
  EXPECT_DOUBLE_EQ(in.g, -0.5);
  EXPECT_EQ(in.g_x, V({1, 0}));
  // Outside past a corner: Euclidean distance to the corner.
  const TerminalEval out = terminal_cost(box, V({4, 7}));
  EXPECT_DOUBLE_EQ(out.g, 5.0);
  EXPECT_DOUBLE_EQ(out.g_x[0], 0.6);
  EXPECT_DOUBLE_EQ(out.g_x[1], 0.8);
}

TEST(TerminalCost, CylinderIgnoresFreeAxes) {
  const TerminalCost cyl = TerminalCost::Cylinder({0, 1}, V({0, 0}), 1.0, 3);
  EXPECT_DOUBLE_EQ(terminal_cost(cyl, V({3, 4, -100})).g, 4.0);
  EXPECT_EQ(terminal_cost(cyl, V({3, 4, 7})).g_x[2], 0.0);
}

TEST(TerminalCost, QuadraticValueAndDerivatives) {
  const TerminalCost q = TerminalCost::Quadratic(V({1, 0}), Mat{{2, 0}, {0, 4}});
  const TerminalEval e = terminal_cost(q, V({2, 1}));
  EXPECT_DOUBLE_EQ(e.g, 3.0);
  EXPECT_EQ(e.g_x, V({2, 4}));
  EXPECT_EQ(e.g_xx, (Mat{{2, 0}, {0, 4}}));
}

TEST(TerminalCost, SignMatchesMembership) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (const TerminalCost& t : signed_distance_targets()) {
    for (int k = 0; k < 1000; ++k) {
      const Vec x = V({U(rng), U(rng)});
      EXPECT_EQ(terminal_cost(t, x).g <= 0.0, t.contains(x)) << x.transpose();
    }
  }
}

TEST(TerminalCost, OneLipschitz) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (const TerminalCost& t : signed_distance_targets()) {
    for (int k = 0; k < 1000; ++k) {
      const Vec x = V({U(rng), U(rng)}), y = V({U(rng), U(rng)});
      EXPECT_LE(std::abs(terminal_cost(t, x).g - terminal_cost(t, y).g),
                (x - y).norm() + 1e-12);
    }
  }
}

TEST(TerminalCost, DerivativesMatchDifferencesAwayFromKinks) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const double h = 1e-6;
  for (const TerminalCost& t : signed_distance_targets()) {
    for (int k = 0; k < 200; ++k) {
      const Vec x = V({U(rng), U(rng)});
      const TerminalEval e = terminal_cost(t, x);
      Vec fd(2);
      bool smooth = true;
      for (int i = 0; i < 2; ++i) {
        Vec p = x, m = x;
        p[i] += h;
        m[i] -= h;
        const TerminalEval ep = terminal_cost(t, p), em = terminal_cost(t, m);
        // Skip samples whose stencil crosses a switching surface.
        smooth = smooth && (ep.g_x - em.g_x).norm() < 1e-3;
        fd[i] = (ep.g - em.g) / (2 * h);
      }
      if (!smooth) continue;
      EXPECT_LT((e.g_x - fd).cwiseAbs().maxCoeff(), 1e-6) << x.transpose();
    }
  }
}

TEST(TerminalCost, JsonRoundTrip) {
  const std::vector<TerminalCost> all = {
      TerminalCost::Ball(V({0.25, 1}), 0.5), TerminalCost::BoxSet(V({-1, 0}), V({1, 2})),
      TerminalCost::Cylinder({1}, V({0.5}), 0.3, 2),
      TerminalCost::Quadratic(V({0, 1}), Mat{{1, 0}, {0, 3}})};
  for (const TerminalCost& t : all) {
    const TerminalCost back = TerminalCost::FromJson(t.ToJson(), 2);
    EXPECT_EQ(back.ToJson(), t.ToJson());
  }
}

TEST(TerminalCost, JsonErrors) {
  EXPECT_THROW(TerminalCost::FromJson({{"shape", "torus"}}, 2), ConfigError);
  EXPECT_THROW(TerminalCost::FromJson({{"shape", "ball"}, {"center", {0, 0, 0}}, {"radius", 1}}, 2),
               ConfigError);
  EXPECT_THROW(
      TerminalCost::FromJson({{"shape", "ball"}, {"center", {0, 0}}, {"radius", 1}, {"r", 2}}, 2),
      ConfigError);
}

TEST(Hamiltonian, DoubleIntegratorExample) {
  const SystemModel m = make_benchmark("double_integrator");
  const HamiltonianResult r = hamiltonian(m, Phase{V({0, 2}), 0.0}, V({1, -2}));
  EXPECT_DOUBLE_EQ(r.H, 3.0);
  EXPECT_EQ(r.u, V({-1}));
  EXPECT_EQ(r.v, V({0.5}));
}

TEST(Hamiltonian, ZeroCostateGivesZero) {
  for (const SystemModel& m : gradcheck_models()) {
    EXPECT_EQ(hamiltonian(m, Phase{Vec::Constant(m.n(), 0.7), -0.3}, Vec::Zero(m.n())).H, 0.0)
        << m.name();
  }
}

TEST(Hamiltonian, ScalarDriftScan) {
  const SystemModel m = make_benchmark("scalar_drift");
  for (double p : {-2.0, -0.3, 0.4, 1.7}) {
    const HamiltonianResult r = hamiltonian(m, Phase{V({0.1}), 0.0}, V({p}));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) best = std::min(best, p * (-1.0 + i * 0.01));
    EXPECT_NEAR(r.H, best, 1e-12);
    EXPECT_DOUBLE_EQ(r.H, -std::abs(p));
    EXPECT_EQ(r.v[0], -std::copysign(1.0, p));
    EXPECT_EQ(r.u.size(), 0);
  }
}

// Max over u of min over v of vx . f on a 101-per-axis control grid.
double brute_max_min(const SystemModel& m, const Phase& ph, const Vec& vx) {
  auto axis = [](const Box& b, int i, int j) {
    return b.lo()[i] + (b.hi()[i] - b.lo()[i]) * j / 100.0;
  };
  double best_u = -std::numeric_limits<double>::infinity();
  const int nu = m.n_u();
  const int count_u = nu == 0 ? 1 : 101;
  for (int iu = 0; iu < count_u; ++iu) {
    Vec u(nu);
    if (nu == 1) u[0] = axis(m.u_box(), 0, iu);
    double worst_v = std::numeric_limits<double>::infinity();
    for (int iv = 0; iv <= 100; ++iv) {
      for (int jv = 0; jv <= (m.n_v() == 2 ? 100 : 0); ++jv) {
        Vec v(m.n_v());
        v[0] = axis(m.v_box(), 0, iv);
        if (m.n_v() == 2) v[1] = axis(m.v_box(), 1, jv);
        worst_v = std::min(worst_v, vx.dot(m.dynamics().f(ph.t, ph.x, u, v)));
      }
    }
    best_u = std::max(best_u, worst_v);
  }
  return best_u;
}

TEST(Hamiltonian, MatchesBruteForceMaxMin) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (const SystemModel& m : gradcheck_models()) {
    ASSERT_LE(m.n_u(), 1);
    ASSERT_LE(m.n_v(), 2);
    for (int k = 0; k < 10; ++k) {
      Vec x(m.n()), p(m.n());
      for (int i = 0; i < m.n(); ++i) {
        x[i] = U(rng);
        p[i] = U(rng);
      }
      const Phase ph{x, -0.2};
      const HamiltonianResult r = hamiltonian(m, ph, p);
      EXPECT_NEAR(r.H, brute_max_min(m, ph, p), 1e-6) << m.name();
      EXPECT_NEAR(p.dot(m.dynamics().f(ph.t, x, r.u, r.v)), r.H, 1e-12) << m.name();
    }
  }
}

TEST(Hamiltonian, TiesGoToUpperBound) {
  const SystemModel m = make_benchmark("double_integrator");
  const HamiltonianResult r = hamiltonian(m, Phase{V({0, 0}), 0.0}, V({1, 0}));
  EXPECT_EQ(r.u, V({1}));
  EXPECT_EQ(r.v, V({0.5}));
}

class NonAffine final : public Dynamics {
 public:
  int state_dim() const override { return 1; }
  int control_dim() const override { return 1; }
  int disturbance_dim() const override { return 0; }
  Vec f(double, const Vec&, const Vec& u, const Vec&) const override {
    return V({u[0] * u[0]});
  }
  Jacobians jacobians(double, const Vec&, const Vec& u, const Vec&) const override {
    return {Mat::Zero(1, 1), Mat::Constant(1, 1, 2 * u[0]), Mat::Zero(1, 0)};
  }
};

TEST(Hamiltonian, NonAffineIsUnsupported) {
  const SystemModel m("quad", std::make_shared<NonAffine>(), Box(V({-1}), V({1})),
                      Box(Vec(0), Vec(0)));
  EXPECT_THROW(hamiltonian(m, Phase{V({0}), 0.0}, V({1})), UnsupportedModelError);
}

TEST(ExpandHamiltonian, DoubleIntegratorBlocks) {
  const SystemModel m = make_benchmark("double_integrator");
  QuadValue q{0.0, V({1, -2}), Mat::Zero(2, 2), Phase{V({0, 2}), 0.0}};
  const HamiltonianExpansion e = expand_hamiltonian(m, q.anchor, V({0.2}), V({-0.1}), q, 0.1);
  EXPECT_EQ(e.H_u, V({-2}));
  EXPECT_EQ(e.H_v, V({-2}));
  EXPECT_DOUBLE_EQ(e.H_uu(0, 0), -0.1);
  EXPECT_DOUBLE_EQ(e.H_vv(0, 0), 0.1);
  EXPECT_EQ(e.H_uv(0, 0), 0.0);
  // Cross-check H_u against differences of H in u.
  const double h = 1e-6;
  const double fd = (q.vx.dot(flow(m, q.anchor, V({0.2 + h}), V({-0.1}))) -
                     q.vx.dot(flow(m, q.anchor, V({0.2 - h}), V({-0.1})))) /
                    (2 * h);
  EXPECT_NEAR(e.H_u[0], fd, 1e-8);
}

TEST(ExpandHamiltonian, ZeroCostateLinearModel) {
  for (const SystemModel& m : gradcheck_models()) {
    if (m.name() != "double_integrator" && m.name() != "linear_generic") continue;
    QuadValue q{0.0, Vec::Zero(m.n()), Mat::Identity(m.n(), m.n()),
                Phase{Vec::Constant(m.n(), 0.5), 0.0}};
    const HamiltonianExpansion e =
        expand_hamiltonian(m, q.anchor, m.u_box().center(), m.v_box().center(), q, 0.1);
    EXPECT_EQ(e.H_x, Vec::Zero(m.n())) << m.name();
    EXPECT_EQ(e.H_u, Vec::Zero(m.n_u())) << m.name();
    EXPECT_EQ(e.H_v, Vec::Zero(m.n_v())) << m.name();
  }
}

TEST(ExpandHamiltonian, ScalarDrift) {
  const SystemModel m = make_benchmark("scalar_drift");
  QuadValue q{0.0, V({0.7}), Mat::Zero(1, 1), Phase{V({2}), 0.0}};
  const HamiltonianExpansion e = expand_hamiltonian(m, q.anchor, Vec(0), V({0.3}), q, 0.1);
  EXPECT_EQ(e.H_v, V({0.7}));
  EXPECT_EQ(e.H_x, V({0}));
}

TEST(ExpandHamiltonian, ZeroSmoothingOnAffineModelThrows) {
  const SystemModel m = make_benchmark("double_integrator");
  QuadValue q{0.0, V({1, 1}), Mat::Zero(2, 2), Phase{V({0, 0}), 0.0}};
  EXPECT_THROW(expand_hamiltonian(m, q.anchor, V({0}), V({0}), q, 0.0), NumericalError);
}

TEST(EvalQuad, Examples) {
  const Phase a{V({0, 0}), 0.0};
  EXPECT_EQ(eval_quad(QuadValue{2, V({1, 0}), Mat::Identity(2, 2), a}, V({0, 0})), 2.0);
  EXPECT_EQ(eval_quad(QuadValue{0, V({1, 1}), Mat::Zero(2, 2), a}, V({1, 2})), 3.0);
  EXPECT_EQ(eval_quad(QuadValue{1, V({0, 0}), Mat{{2, 0}, {0, 4}}, a}, V({1, 1})), 4.0);
}

TEST(CostateAt, Examples) {
  const Phase a{V({0, 0}), 0.0};
  const QuadValue q{0.5, V({0.3, -0.2}), Mat{{1, 2}, {2, 1}}, a};
  EXPECT_EQ(costate_at(q, V({0, 0})), q.vx);
  EXPECT_EQ(costate_at(QuadValue{0, V({0, 0}), Mat::Identity(2, 2), a}, V({1, 2})), V({1, 2}));
}

TEST(CostateAt, GradientOfEvalQuad) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 4;
    Mat A(n, n);
    for (int i = 0; i < n * n; ++i) A(i) = U(rng);
    QuadValue q{U(rng), Vec::NullaryExpr(n, [&] { return U(rng); }), 0.5 * (A + A.transpose()),
                Phase{Vec::Zero(n), 0.0}};
    const Vec dx = Vec::NullaryExpr(n, [&] { return U(rng); });
    Vec fd(n);
    const double h = 0.25;  // central differences are exact on quadratics
    for (int i = 0; i < n; ++i) {
      Vec p = dx, m = dx;
      p[i] += h;
      m[i] -= h;
      fd[i] = (eval_quad(q, p) - eval_quad(q, m)) / (2 * h);
    }
    EXPECT_LE((costate_at(q, dx) - fd).cwiseAbs().maxCoeff(), 1e-10);
  }
}

}  // namespace
}  // namespace reachsweep
