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

#include "reachsweep/ddp_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "reachsweep/errors.hpp"

namespace reachsweep {

void SolverConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError("solver.eta must be finite and > 0");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    std::ostringstream os;
    os << "solver.rho = " << rho << " is out of range; require ρ ∈ (0, 1]";
    throw ConfigError(os.str());
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("solver.mu must be >= 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("solver.epsilon must be >= 0");
  }
  if (max_iters < 1) throw ConfigError("solver.max_iters must be >= 1");
  if (!(line_search.alpha0 > 0.0 && line_search.alpha0 <= 1.0)) {
    throw ConfigError("solver.line_search.alpha0 must lie in (0, 1]");
  }
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0)) {
    throw ConfigError("solver.line_search.shrink must lie in (0, 1)");
  }
  if (!(line_search.c_armijo >= 0.0 && line_search.c_armijo < 1.0)) {
    throw ConfigError("solver.line_search.c_armijo must lie in [0, 1)");
  }
  if (line_search.max_backtracks < 0) {
    throw ConfigError("solver.line_search.max_backtracks must be >= 0");
  }
}

GainPair solve_gains(const HamiltonianExpansion& exp, const Mat& vxx,
                     const ClampMask& clamped) {
  const auto nu = exp.H_uu.rows();
  const auto nv = exp.H_vv.rows();
  const auto n = vxx.rows();
  const auto m = nu + nv;

  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < nu; ++i) {
    if (clamped.u.empty() || !clamped.u[static_cast<std::size_t>(i)]) free.push_back(i);
  }
  for (Eigen::Index i = 0; i < nv; ++i) {
    if (clamped.v.empty() || !clamped.v[static_cast<std::size_t>(i)]) {
      free.push_back(nu + i);
    }
  }

  GainPair out{Mat::Zero(nu, n), Mat::Zero(nv, n), Vec::Zero(nu), Vec::Zero(nv)};
  if (free.empty()) return out;

  Mat M(m, m);
  M.topLeftCorner(nu, nu) = exp.H_uu;
  M.topRightCorner(nu, nv) = exp.H_uv;
  M.bottomLeftCorner(nv, nu) = exp.H_uv.transpose();
  M.bottomRightCorner(nv, nv) = exp.H_vv;

  Mat rhs(m, n + 1);
  rhs.topLeftCorner(nu, n) = -(exp.H_ux + exp.f_u.transpose() * vxx);
  rhs.bottomLeftCorner(nv, n) = -(exp.H_vx + exp.f_v.transpose() * vxx);
  rhs.topRightCorner(nu, 1) = -exp.H_u;
  rhs.bottomRightCorner(nv, 1) = -exp.H_v;

  const auto r = static_cast<Eigen::Index>(free.size());
  Mat Mr(r, r);
  Mat br(r, n + 1);
  for (Eigen::Index i = 0; i < r; ++i) {
    br.row(i) = rhs.row(free[i]);
    for (Eigen::Index j = 0; j < r; ++j) Mr(i, j) = M(free[i], free[j]);
  }

  Eigen::JacobiSVD<Mat> svd(Mr);
  const auto& s = svd.singularValues();
  const double rcond = s(0) > 0.0 ? s(r - 1) / s(0) : 0.0;
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "gain block system is singular (reciprocal condition " << rcond << ")";
    throw NumericalError(os.str(), rcond > 0.0 ? 1.0 / rcond
                                               : std::numeric_limits<double>::infinity());
  }
  const Mat sol = Mr.partialPivLu().solve(br);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Eigen::Index idx = free[i];
    if (idx < nu) {
      out.k_u.row(idx) = sol.row(i).head(n);
      out.du_ff[idx] = sol(i, n);
    } else {
      out.k_v.row(idx - nu) = sol.row(i).head(n);
      out.dv_ff[idx - nu] = sol(i, n);
    }
  }
  return out;
}

HamiltonianExpansion regularize(const HamiltonianExpansion& exp, double mu) {
  HamiltonianExpansion out = exp;
  if (out.H_uu.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(out.H_uu, Eigen::EigenvaluesOnly);
    const double shift = std::max(0.0, mu + es.eigenvalues().maxCoeff());
    out.H_uu.diagonal().array() -= shift;
  }
  if (out.H_vv.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(out.H_vv, Eigen::EigenvaluesOnly);
    const double shift = std::max(0.0, mu - es.eigenvalues().minCoeff());
    out.H_vv.diagonal().array() += shift;
  }
  return out;
}

Vec integrate_step(const SystemModel& model, double t, const Vec& x, const Vec& u,
                   const Vec& v, double dt, Integrator integrator) {
  const Dynamics& dyn = model.dynamics();
  if (integrator == Integrator::kEuler) return x + dt * dyn.f(t, x, u, v);
  const Vec k1 = dyn.f(t, x, u, v);
  const Vec k2 = dyn.f(t + 0.5 * dt, x + 0.5 * dt * k1, u, v);
  const Vec k3 = dyn.f(t + 0.5 * dt, x + 0.5 * dt * k2, u, v);
  const Vec k4 = dyn.f(t + dt, x + dt * k3, u, v);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

void check_state(const SystemModel& model, const Vec& x, int step, double t) {
  if (!x.allFinite()) {
    std::ostringstream os;
    os << "rollout became non-finite at step " << step << " (t = " << t << ")";
    throw RolloutError(os.str(), step, t);
  }
  const Box& dom = model.state_domain();
  if (!dom.contains(x)) {
    std::ostringstream os;
    os << "rollout left the state domain at step " << step << " (t = " << t
       << ", x = [" << x.transpose() << "])";
    throw RolloutError(os.str(), step, t);
  }
}

double tube_cost(const TerminalCost& target, const std::vector<Vec>& xs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : xs) best = std::min(best, terminal_cost(target, x).g);
  return best;
}

// Value-model state carried by the backward pass.
struct BackState {
  double v = 0.0;
  double pu = 0.0;
  double pv = 0.0;
  Vec vx;
  Mat vxx;

  void axpy(double a, const BackState& d) {
    v += a * d.v;
    pu += a * d.pu;
    pv += a * d.pv;
    vx.noalias() += a * d.vx;
    vxx.noalias() += a * d.vxx;
  }
};

ClampMask clamp_mask(const SystemModel& model, const Vec& u, const Vec& v,
                     const HamiltonianExpansion& exp) {
  ClampMask mask;
  const Box& ub = model.u_box();
  const Box& vb = model.v_box();
  mask.u.assign(static_cast<std::size_t>(u.size()), false);
  mask.v.assign(static_cast<std::size_t>(v.size()), false);
  // The maximizer pushes up when H_u > 0; the minimizer pushes up when H_v < 0.
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    mask.u[static_cast<std::size_t>(i)] = (u[i] >= ub.hi()[i] && exp.H_u[i] > 0.0) ||
                                          (u[i] <= ub.lo()[i] && exp.H_u[i] < 0.0);
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    mask.v[static_cast<std::size_t>(i)] = (v[i] >= vb.hi()[i] && exp.H_v[i] < 0.0) ||
                                          (v[i] <= vb.lo()[i] && exp.H_v[i] > 0.0);
  }
  return mask;
}

}  // namespace

TrajectoryIterate initial_trajectory(const SystemModel& model, const Vec& seed,
                                     const Horizon& horizon, const SolverConfig& cfg) {
  if (seed.size() != model.n()) {
    throw DomainError("seed dimension does not match the model state dimension");
  }
  if (!model.state_domain().contains(seed)) {
    throw DomainError("seed lies outside the declared state domain");
  }
  const int K = horizon.K();
  TrajectoryIterate traj;
  traj.horizon = horizon;
  traj.x_r.resize(K);
  traj.u_r.assign(K - 1, model.u_box().center());
  traj.v_r.assign(K - 1, model.v_box().center());
  traj.x_r[0] = seed;
  for (int k = 0; k + 1 < K; ++k) {
    traj.x_r[k + 1] = integrate_step(model, horizon.time(k), traj.x_r[k], traj.u_r[k],
                                     traj.v_r[k], horizon.dt(), cfg.integrator);
    check_state(model, traj.x_r[k + 1], k + 1, horizon.time(k + 1));
  }
  traj.nominal_cost = std::numeric_limits<double>::infinity();
  return traj;
}

void backward_pass(const SystemModel& model, const TerminalCost& target,
                   TrajectoryIterate& traj, const SolverConfig& cfg) {
  const Horizon& hz = traj.horizon;
  const int K = hz.K();
  const int n = model.n();
  const double dt = hz.dt();
  const Dynamics& dyn = model.dynamics();

  std::vector<double> g(K);
  for (int k = 0; k < K; ++k) g[k] = terminal_cost(target, traj.x_r[k]).g;

  traj.u_star.resize(K - 1);
  traj.v_star.resize(K - 1);
  traj.gains.resize(K - 1);
  traj.values.resize(K);
  traj.frozen.assign(K, false);
  traj.monotone_violations = 0;

  const TerminalEval end = terminal_cost(target, traj.x_r[K - 1]);
  BackState s{end.g, 0.0, 0.0, end.g_x, end.g_xx};
  traj.values[K - 1] = {end.g, end.g_x, end.g_xx, {traj.x_r[K - 1], hz.time(K - 1)}};
  double nominal_min = g[K - 1];
  traj.t_eff = hz.time(K - 1);
  bool settled = true;

  for (int k = K - 2; k >= 0; --k) {
    const double t0 = hz.time(k);
    const double t1 = hz.time(k + 1);
    const Vec& x0 = traj.x_r[k];
    const Vec& x1 = traj.x_r[k + 1];
    const Vec& ur = traj.u_r[k];
    const Vec& vr = traj.v_r[k];

    const HamiltonianResult ext = hamiltonian(model, {x1, t1}, s.vx);
    const Vec& us = ext.u;
    const Vec& vs = ext.v;
    const bool frozen = ext.H >= 0.0;

    const QuadValue vq{s.v, s.vx, s.vxx, {x1, t1}};
    const HamiltonianExpansion exp =
        regularize(expand_hamiltonian(model, {x1, t1}, us, vs, vq, cfg.epsilon), cfg.mu);
    GainPair gp = solve_gains(exp, s.vxx, clamp_mask(model, us, vs, exp));
    gp.du_ff = us - ur;
    gp.dv_ff = vs - vr;

    // Rates with respect to the normalized backward coordinate s in [0, 1],
    // where s = 0 is t_{k+1} and s = 1 is t_k.
    auto rhs = [&](double sigma, const BackState& st) {
      const double t = t1 - sigma * dt;
      const Vec x = (1.0 - sigma) * x1 + sigma * x0;
      const Vec f_star = dyn.f(t, x, us, vs);
      const Vec f_ref = dyn.f(t, x, ur, vr);
      const Vec f_mid = dyn.f(t, x, us, vr);
      BackState d;
      d.pu = dt * st.vx.dot(f_mid - f_ref);
      d.pv = dt * st.vx.dot(f_star - f_mid);
      if (frozen) {
        d.v = 0.0;
        d.vx = Vec::Zero(n);
        d.vxx = Mat::Zero(n, n);
        return d;
      }
      d.v = std::min(0.0, d.pu + d.pv);
      const Jacobians J = dyn.jacobians(t, x, us, vs);
      const ProjectedCurvature c = dyn.curvature(t, x, us, vs, st.vx);
      d.vx = J.fx.transpose() * st.vx + st.vxx * (f_star - f_ref);
      const Mat q_ux = c.ux + J.fu.transpose() * st.vxx;
      const Mat q_vx = c.vx + J.fv.transpose() * st.vxx;
      Mat fx_vxx = J.fx.transpose() * st.vxx;
      Mat rate = c.xx + fx_vxx + fx_vxx.transpose();
      if (gp.k_u.size() > 0 && !gp.k_u.isZero(0.0)) {
        const Mat a = gp.k_u.transpose() * q_ux;
        rate += a + a.transpose() + gp.k_u.transpose() * exp.H_uu * gp.k_u;
      }
      if (gp.k_v.size() > 0 && !gp.k_v.isZero(0.0)) {
        const Mat a = gp.k_v.transpose() * q_vx;
        rate += a + a.transpose() + gp.k_v.transpose() * exp.H_vv * gp.k_v;
      }
      if (gp.k_u.size() > 0 && gp.k_v.size() > 0) {
        const Mat a = gp.k_u.transpose() * exp.H_uv * gp.k_v;
        rate += a + a.transpose();
      }
      d.vx *= dt;
      d.vxx = dt * rate;
      return d;
    };

    const BackState start = s;
    if (cfg.integrator == Integrator::kEuler) {
      s.axpy(1.0, rhs(0.0, start));
    } else {
      const BackState d1 = rhs(0.0, start);
      BackState tmp = start;
      tmp.axpy(0.5, d1);
      const BackState d2 = rhs(0.5, tmp);
      tmp = start;
      tmp.axpy(0.5, d2);
      const BackState d3 = rhs(0.5, tmp);
      tmp = start;
      tmp.axpy(1.0, d3);
      const BackState d4 = rhs(1.0, tmp);
      // Each stage's value rate is <= 0, so every increment below is too.
      s.axpy(1.0 / 6.0, d1);
      s.axpy(1.0 / 3.0, d2);
      s.axpy(1.0 / 3.0, d3);
      s.axpy(1.0 / 6.0, d4);
    }
    if (frozen) {
      s.v = start.v;
      s.vx = start.vx;
      s.vxx = start.vxx;
    }
    s.vxx = 0.5 * (s.vxx + s.vxx.transpose()).eval();

    if (!std::isfinite(s.v) || !std::isfinite(s.pu) || !std::isfinite(s.pv) ||
        !s.vx.allFinite() || !s.vxx.allFinite()) {
      std::ostringstream os;
      os << "value model became non-finite at step " << k << " (t = " << t0 << ")";
      throw DivergenceError(os.str(), k);
    }

    // A new minimum of g along the nominal moves the anchor of the tube cost.
    if (g[k] < nominal_min) {
      const TerminalEval here = terminal_cost(target, x0);
      s.vx = here.g_x;
      s.vxx = here.g_xx;
      s.pu = 0.0;
      s.pv = 0.0;
      s.v = std::min(s.v, here.g);
      nominal_min = g[k];
    }

    if (s.v > start.v) ++traj.monotone_violations;
    traj.u_star[k] = us;
    traj.v_star[k] = vs;
    traj.gains[k] = std::move(gp);
    traj.frozen[k] = frozen;
    traj.values[k] = {s.v, s.vx, s.vxx, {x0, t0}};
    if (settled && std::abs(s.pu + s.pv) < cfg.eta) {
      traj.t_eff = t0;
    } else {
      settled = false;
    }
  }

  traj.nominal_cost = nominal_min;
  traj.predicted_u = s.pu;
  traj.predicted_v = s.pv;
  traj.predicted = s.pu + s.pv;
}

ForwardResult forward_pass(const SystemModel& model, const TerminalCost& target,
                           const TrajectoryIterate& traj, double alpha,
                           const SolverConfig& cfg) {
  const Horizon& hz = traj.horizon;
  const int K = hz.K();
  if (static_cast<int>(traj.gains.size()) != K - 1) {
    throw std::logic_error("forward_pass requires a completed backward pass");
  }
  ForwardResult out;
  TrajectoryIterate& c = out.candidate;
  c = traj;
  c.x_r[0] = traj.x_r[0];
  for (int k = 0; k + 1 < K; ++k) {
    const GainPair& gp = traj.gains[k];
    const Vec dx = c.x_r[k] - traj.x_r[k];
    Vec u = traj.u_r[k] + alpha * gp.du_ff;
    Vec v = traj.v_r[k] + alpha * gp.dv_ff;
    if (u.size() > 0) u.noalias() += gp.k_u * dx;
    if (v.size() > 0) v.noalias() += gp.k_v * dx;
    c.u_r[k] = model.u_box().clamp(u);
    c.v_r[k] = model.v_box().clamp(v);
    c.x_r[k + 1] = integrate_step(model, hz.time(k), c.x_r[k], c.u_r[k], c.v_r[k],
                                  hz.dt(), cfg.integrator);
    check_state(model, c.x_r[k + 1], k + 1, hz.time(k + 1));
  }
  const double old_cost = traj.nominal_cost;
  const double new_cost = tube_cost(target, c.x_r);
  const double pred = alpha * traj.predicted;
  c.nominal_cost = new_cost;
  out.triple.v_pred = std::abs(pred);
  out.triple.v_actual = (pred >= 0.0 ? 1.0 : -1.0) * (new_cost - old_cost);
  out.triple.v_nominal = old_cost;
  return out;
}

bool accept_step(const ValueTriple& stats, double rho) {
  return stats.v_pred > 0.0 && stats.v_actual / stats.v_pred > rho;
}

LineSearchResult line_search(const SystemModel& model, const TerminalCost& target,
                             TrajectoryIterate& traj, const SolverConfig& cfg) {
  LineSearchResult res;
  const int iteration = static_cast<int>(traj.stats.size()) + 1;
  if (std::abs(traj.predicted_u) + std::abs(traj.predicted_v) < cfg.eta) {
    res.status = LineSearchStatus::kConverged;
    res.triple = {0.0, std::abs(traj.predicted), traj.nominal_cost};
    traj.stats.push_back({iteration, 0.0, res.triple, 0.0, false});
    return res;
  }
  double alpha = cfg.line_search.alpha0 * traj.trust;
  IterationRecord last{iteration, alpha, {}, 0.0, false};
  for (int attempt = 0; attempt <= cfg.line_search.max_backtracks; ++attempt) {
    try {
      ForwardResult fr = forward_pass(model, target, traj, alpha, cfg);
      const double ratio =
          fr.triple.v_pred > 0.0 ? fr.triple.v_actual / fr.triple.v_pred : 0.0;
      last = {iteration, alpha, fr.triple, ratio, false};
      if (accept_step(fr.triple, cfg.rho) &&
          fr.triple.v_actual >= cfg.line_search.c_armijo * fr.triple.v_pred) {
        last.accepted = true;
        std::vector<IterationRecord> stats = std::move(traj.stats);
        stats.push_back(last);
        traj = std::move(fr.candidate);
        traj.stats = std::move(stats);
        res.status = LineSearchStatus::kAccepted;
        res.alpha = alpha;
        res.triple = last.triple;
        return res;
      }
    } catch (const RolloutError&) {
      last = {iteration, alpha, {}, 0.0, false};
    }
    alpha *= cfg.line_search.shrink;
  }
  traj.trust *= 0.5;
  traj.stats.push_back(last);
  res.status = LineSearchStatus::kNoProgress;
  res.alpha = 0.0;
  res.triple = last.triple;
  return res;
}

SolveResult solve_trajectory(const SystemModel& model, const TerminalCost& target,
                             const Vec& seed, const Horizon& horizon,
                             const SolverConfig& cfg) {
  cfg.validate();
  SolveResult out;
  out.traj = initial_trajectory(model, seed, horizon, cfg);
  out.status = "max_iters";
  bool stale = false;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    out.iterations = iter;
    try {
      backward_pass(model, target, out.traj, cfg);
    } catch (const DivergenceError& e) {
      std::ostringstream os;
      os << "iteration " << iter << ": " << e.what();
      throw DivergenceError(os.str(), e.step());
    }
    stale = false;
    out.monotone_violations += out.traj.monotone_violations;
    const LineSearchResult ls = line_search(model, target, out.traj, cfg);
    if (ls.status == LineSearchStatus::kConverged) {
      out.converged = true;
      out.status = "converged";
      break;
    }
    if (ls.status == LineSearchStatus::kNoProgress) {
      out.status = "stalled";
      break;
    }
    ++out.accepted_steps;
    if (out.traj.stats.back().ratio <= cfg.rho) ++out.ratio_violations;
    stale = true;
  }
  if (stale) {
    // The last accepted step replaced the nominal; refresh its value models.
    backward_pass(model, target, out.traj, cfg);
    out.monotone_violations += out.traj.monotone_violations;
  }
  if (!out.converged) {
    // The predicted improvement was never realized, so report what the
    // nominal actually achieves: its tube cost-to-go.
    double best = std::numeric_limits<double>::infinity();
    for (int k = horizon.K() - 1; k >= 0; --k) {
      best = std::min(best, terminal_cost(target, out.traj.x_r[static_cast<std::size_t>(k)]).g);
      out.traj.values[static_cast<std::size_t>(k)].v = best;
    }
  }
  return out;
}

}  // namespace reachsweep
