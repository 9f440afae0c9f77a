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

#include "reachsweep/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "reachsweep/ddp_solver.hpp"
#include "reachsweep/errors.hpp"
#include "reachsweep/value_model.hpp"

namespace reachsweep {

namespace {

class CorruptedJacobian final : public Dynamics {
 public:
  CorruptedJacobian(std::shared_ptr<const Dynamics> inner, double delta)
      : inner_(std::move(inner)), delta_(delta) {}

  int state_dim() const override { return inner_->state_dim(); }
  int control_dim() const override { return inner_->control_dim(); }
  int disturbance_dim() const override { return inner_->disturbance_dim(); }
  Vec f(double t, const Vec& x, const Vec& u, const Vec& v) const override {
    return inner_->f(t, x, u, v);
  }
  Jacobians jacobians(double t, const Vec& x, const Vec& u, const Vec& v) const override {
    Jacobians J = inner_->jacobians(t, x, u, v);
    J.fx(0, 0) += delta_;
    return J;
  }
  bool control_affine() const override { return inner_->control_affine(); }
  ProjectedCurvature curvature(double t, const Vec& x, const Vec& u, const Vec& v,
                               const Vec& p) const override {
    return inner_->curvature(t, x, u, v, p);
  }

 private:
  std::shared_ptr<const Dynamics> inner_;
  double delta_;
};

double rel_error(const Mat& a, const Mat& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Accumulates the max error per (suite, model, block) in insertion order.
class Table {
 public:
  void record(const std::string& suite, const std::string& model, const std::string& block,
              double err, double tol) {
    const std::string key = suite + "/" + model + "/" + block;
    auto it = index_.find(key);
    if (it == index_.end()) {
      index_[key] = rows_.size();
      rows_.push_back({suite, model, block, err, tol});
    } else {
      double& e = rows_[it->second].error;
      // NaN must stick so that a broken block cannot pass.
      if (std::isnan(err) || err > e) e = err;
    }
  }
  std::vector<BlockError> rows() const { return rows_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<BlockError> rows_;
};

struct Sampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  Vec in_box(const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (int i = 0; i < lo.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    return x;
  }
  Vec state(const SystemModel& m) {
    const Box& d = m.state_domain();
    Vec lo = d.lo().cwiseMax(Vec::Constant(m.n(), -2.0));
    Vec hi = d.hi().cwiseMin(Vec::Constant(m.n(), 2.0));
    return in_box(lo, hi);
  }
  Vec symmetric(int n) { return in_box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)); }
};

void check_jacobians(const SystemModel& m, Sampler& s, int samples, Table& table) {
  const Dynamics& dyn = m.dynamics();
  const double h = 1e-6;
  for (int k = 0; k < samples; ++k) {
    const double t = -s.unit(s.rng);
    const Vec x = s.state(m);
    const Vec u = s.in_box(m.u_box().lo(), m.u_box().hi());
    const Vec v = s.in_box(m.v_box().lo(), m.v_box().hi());
    const Jacobians J = dyn.jacobians(t, x, u, v);
    auto fd = [&](int which, int dim) {
      Mat out(m.n(), dim);
      for (int j = 0; j < dim; ++j) {
        Vec xp = x, xm = x, up = u, um = u, vp = v, vm = v;
        Vec& zp = which == 0 ? xp : which == 1 ? up : vp;
        Vec& zm = which == 0 ? xm : which == 1 ? um : vm;
        zp[j] += h;
        zm[j] -= h;
        out.col(j) = (dyn.f(t, xp, up, vp) - dyn.f(t, xm, um, vm)) / (2.0 * h);
      }
      return out;
    };
    table.record("jacobian", m.name(), "f_x", rel_error(J.fx, fd(0, m.n())), kJacobianTol);
    table.record("jacobian", m.name(), "f_u", rel_error(J.fu, fd(1, m.n_u())), kJacobianTol);
    table.record("jacobian", m.name(), "f_v", rel_error(J.fv, fd(2, m.n_v())), kJacobianTol);
  }
}

void check_hamiltonian(const SystemModel& m, Sampler& s, int samples, double eps,
                       Table& table) {
  const Dynamics& dyn = m.dynamics();
  const int n = m.n(), nu = m.n_u(), nv = m.n_v(), N = n + nu + nv;
  const double h1 = 1e-5, h2 = 1e-3;
  for (int k = 0; k < samples; ++k) {
    const double t = -s.unit(s.rng);
    const Vec x = s.state(m);
    const Vec u = s.in_box(m.u_box().lo(), m.u_box().hi());
    const Vec v = s.in_box(m.v_box().lo(), m.v_box().hi());
    QuadValue vq;
    vq.vx = s.symmetric(n);
    vq.vxx = Mat::Zero(n, n);
    vq.anchor = Phase{x, t};
    const HamiltonianExpansion e = expand_hamiltonian(m, Phase{x, t}, u, v, vq, eps);

    Vec z(N);
    z << x, u, v;
    auto H = [&](const Vec& zz) {
      return vq.vx.dot(dyn.f(t, zz.head(n), zz.segment(n, nu), zz.tail(nv)));
    };
    Vec grad(N);
    for (int i = 0; i < N; ++i) {
      Vec zp = z, zm = z;
      zp[i] += h1;
      zm[i] -= h1;
      grad[i] = (H(zp) - H(zm)) / (2.0 * h1);
    }
    Mat hess(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        auto at = [&](double si, double sj) {
          Vec zz = z;
          zz[i] += si * h2;
          zz[j] += sj * h2;
          return H(zz);
        };
        hess(i, j) = hess(j, i) =
            (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h2 * h2);
      }
    }
    Mat uu = e.H_uu, vv = e.H_vv;
    if (dyn.control_affine()) {
      uu += eps * Mat::Identity(nu, nu);
      vv -= eps * Mat::Identity(nv, nv);
    }
    auto rec = [&](const char* block, const Mat& a, const Mat& b) {
      table.record("hamiltonian", m.name(), block, rel_error(a, b), kHamiltonianTol);
    };
    rec("H", Mat::Constant(1, 1, e.H), Mat::Constant(1, 1, H(z)));
    rec("H_x", e.H_x, grad.head(n));
    rec("H_u", e.H_u, grad.segment(n, nu));
    rec("H_v", e.H_v, grad.tail(nv));
    rec("H_xx", e.H_xx, hess.block(0, 0, n, n));
    rec("H_ux", e.H_ux, hess.block(n, 0, nu, n));
    rec("H_vx", e.H_vx, hess.block(n + nu, 0, nv, n));
    rec("H_uv", e.H_uv, hess.block(n, n + nu, nu, nv));
    rec("H_uu", uu, hess.block(n, n, nu, nu));
    rec("H_vv", vv, hess.block(n + nu, n + nu, nv, nv));
  }
}

// Central differences are exact on quadratics, so the only error left is
// rounding and the bound can be absolute.
void check_quad_model(const SystemModel& m, Sampler& s, int samples, Table& table) {
  const int n = m.n();
  const double h = 0.25;
  for (int k = 0; k < samples; ++k) {
    QuadValue q;
    q.v = s.symmetric(1)[0];
    q.vx = s.symmetric(n);
    Mat a(n, n);
    for (int c = 0; c < n; ++c) a.col(c) = s.symmetric(n);
    q.vxx = 0.5 * (a + a.transpose());
    q.anchor = Phase{s.state(m), 0.0};
    const Vec dx = s.symmetric(n);
    Vec fd(n);
    for (int i = 0; i < n; ++i) {
      Vec p = dx, mi = dx;
      p[i] += h;
      mi[i] -= h;
      fd[i] = (eval_quad(q, p) - eval_quad(q, mi)) / (2.0 * h);
    }
    table.record("quad_model", m.name(), "costate_at",
                 (costate_at(q, dx) - fd).cwiseAbs().maxCoeff(), kQuadTol);
    const double at_anchor = std::max(std::abs(eval_quad(q, Vec::Zero(n)) - q.v),
                                      (costate_at(q, Vec::Zero(n)) - q.vx).cwiseAbs().maxCoeff());
    table.record("quad_model", m.name(), "anchor", at_anchor, kQuadTol);
  }
}

// Compares the stored V_x at the initial phase of a converged solve against
// differences of re-solved values from perturbed seeds.
void check_costate(Table& table) {
  const SystemModel m = make_benchmark("double_integrator");
  const TerminalCost target = TerminalCost::Ball(Vec::Zero(2), 0.5);
  const Horizon horizon(0.5, 101);
  SolverConfig cfg;
  cfg.eta = 1e-9;
  Vec seed(2);
  seed << -1.2, 0.8;
  const SolveResult base = solve_trajectory(m, target, seed, horizon, cfg);
  const Vec vx = base.traj.values.front().vx;
  const double h = 1e-5;
  Vec fd(2);
  for (int i = 0; i < 2; ++i) {
    Vec p = seed, q = seed;
    p[i] += h;
    q[i] -= h;
    fd[i] = (solve_trajectory(m, target, p, horizon, cfg).traj.values.front().v -
             solve_trajectory(m, target, q, horizon, cfg).traj.values.front().v) /
            (2.0 * h);
  }
  table.record("costate", m.name(), "V_x", rel_error(vx, fd), kCostateTol);
}

}  // namespace

std::shared_ptr<const Dynamics> corrupt_jacobian(std::shared_ptr<const Dynamics> inner,
                                                 double delta) {
  return std::make_shared<CorruptedJacobian>(std::move(inner), delta);
}

std::vector<SystemModel> gradcheck_models() {
  std::vector<SystemModel> out;
  for (const auto& name : benchmark_names()) {
    nlohmann::json params = nlohmann::json::object();
    if (name == "linear_generic") {
      params = {{"A", {{0.0, 1.0, 0.0}, {-1.0, -0.2, 0.5}, {0.3, 0.0, -0.7}}},
                {"B_u", {{0.0}, {1.0}, {0.0}}},
                {"B_v", {{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}}}};
    }
    out.push_back(make_benchmark(name, params));
  }
  return out;
}

bool GradcheckReport::pass() const { return first_failure().empty(); }

std::string GradcheckReport::first_failure() const {
  for (const auto& b : blocks) {
    if (!b.pass()) return b.suite + "/" + b.model + "/" + b.block;
  }
  return "";
}

nlohmann::json GradcheckReport::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& b : blocks) {
    rows.push_back({{"suite", b.suite},
                    {"model", b.model},
                    {"block", b.block},
                    {"max_error", std::isfinite(b.error) ? nlohmann::json(b.error)
                                                         : nlohmann::json(nullptr)},
                    {"tolerance", b.tol},
                    {"pass", b.pass()}});
  }
  const std::string failure = first_failure();
  return {{"pass", failure.empty()},
          {"first_failure", failure.empty() ? nlohmann::json(nullptr) : nlohmann::json(failure)},
          {"blocks", rows}};
}

GradcheckReport run_gradcheck(const GradcheckSpec& spec) {
  if (spec.samples < 1) throw ConfigError("gradcheck.samples: must be >= 1");
  Sampler s{std::mt19937_64(spec.rng_seed)};
  const double eps = SolverConfig{}.epsilon;
  Table table;
  for (SystemModel m : gradcheck_models()) {
    if (m.name() == spec.corrupt) {
      m = SystemModel(m.name(), corrupt_jacobian(m.dynamics_ptr()), m.u_box(), m.v_box(),
                      m.state_domain());
    }
    check_jacobians(m, s, spec.samples, table);
    check_hamiltonian(m, s, spec.samples, eps, table);
    check_quad_model(m, s, spec.samples, table);
  }
  check_costate(table);
  return GradcheckReport{table.rows()};
}

}  // namespace reachsweep
