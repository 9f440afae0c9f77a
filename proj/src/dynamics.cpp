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

#include "reachsweep/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "reachsweep/errors.hpp"

namespace reachsweep {

Box::Box(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) {
    throw ConfigError("box bounds have mismatched dimensions");
  }
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (std::isnan(lo_[i]) || std::isnan(hi_[i]) || lo_[i] > hi_[i]) {
      std::ostringstream os;
      os << "box is empty along axis " << i << ": [" << lo_[i] << ", " << hi_[i]
         << "]";
      throw ConfigError(os.str());
    }
  }
}

Box Box::Unbounded(int dim) {
  const double inf = std::numeric_limits<double>::infinity();
  return Box(Vec::Constant(dim, -inf), Vec::Constant(dim, inf));
}

Vec Box::center() const { return 0.5 * (lo_ + hi_); }

bool Box::bounded() const {
  return lo_.allFinite() && hi_.allFinite();
}

bool Box::contains(const Vec& x, double tol) const {
  if (x.size() != lo_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo_[i] - tol && x[i] <= hi_[i] + tol)) return false;
  }
  return true;
}

Vec Box::clamp(const Vec& x) const { return x.cwiseMax(lo_).cwiseMin(hi_); }

std::vector<Vec> Box::vertices() const {
  const int d = dim();
  std::vector<Vec> out;
  out.reserve(std::size_t{1} << d);
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = (mask >> i) & 1u ? hi_[i] : lo_[i];
    out.push_back(std::move(p));
  }
  return out;
}

Horizon::Horizon(double T, int K) : T_(T), K_(K) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ConfigError("horizon T must be finite and > 0");
  }
  if (K < 2) throw ConfigError("horizon K must be >= 2");
}

double Horizon::time(int k) const {
  if (k == 0) return -T_;
  return -T_ * static_cast<double>(K_ - 1 - k) / static_cast<double>(K_ - 1);
}

ProjectedCurvature Dynamics::curvature(double t, const Vec& x, const Vec& u,
                                       const Vec& v, const Vec& p) const {
  const int n = state_dim();
  const int nu = control_dim();
  const int nv = disturbance_dim();
  constexpr double kStep = 1e-6;

  ProjectedCurvature c;
  c.xx = Mat::Zero(n, n);
  c.ux = Mat::Zero(nu, n);
  c.vx = Mat::Zero(nv, n);
  c.uv = Mat::Zero(nu, nv);
  c.uu = Mat::Zero(nu, nu);
  c.vv = Mat::Zero(nv, nv);

  // Differentiate the gradient blocks f_x^T p, f_u^T p, f_v^T p.
  auto grads = [&](const Vec& xx, const Vec& uu, const Vec& vv) {
    Jacobians J = jacobians(t, xx, uu, vv);
    return std::tuple<Vec, Vec, Vec>(J.fx.transpose() * p, J.fu.transpose() * p,
                                     J.fv.transpose() * p);
  };
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += kStep;
    xm[j] -= kStep;
    auto [gxp, gup, gvp] = grads(xp, u, v);
    auto [gxm, gum, gvm] = grads(xm, u, v);
    c.xx.col(j) = (gxp - gxm) / (2 * kStep);
    c.ux.col(j) = (gup - gum) / (2 * kStep);
    c.vx.col(j) = (gvp - gvm) / (2 * kStep);
  }
  for (int j = 0; j < nv; ++j) {
    Vec vp = v, vm = v;
    vp[j] += kStep;
    vm[j] -= kStep;
    auto [gxp, gup, gvp] = grads(x, u, vp);
    auto [gxm, gum, gvm] = grads(x, u, vm);
    c.uv.col(j) = (gup - gum) / (2 * kStep);
    c.vv.col(j) = (gvp - gvm) / (2 * kStep);
  }
  for (int j = 0; j < nu; ++j) {
    Vec up = u, um = u;
    up[j] += kStep;
    um[j] -= kStep;
    auto [gxp, gup, gvp] = grads(x, up, v);
    auto [gxm, gum, gvm] = grads(x, um, v);
    c.uu.col(j) = (gup - gum) / (2 * kStep);
  }
  c.xx = 0.5 * (c.xx + c.xx.transpose()).eval();
  c.uu = 0.5 * (c.uu + c.uu.transpose()).eval();
  c.vv = 0.5 * (c.vv + c.vv.transpose()).eval();
  return c;
}

SystemModel::SystemModel(std::string name, std::shared_ptr<const Dynamics> dynamics,
                         Box u_box, Box v_box)
    : SystemModel(std::move(name), dynamics, std::move(u_box), std::move(v_box),
                  Box::Unbounded(dynamics->state_dim())) {}

SystemModel::SystemModel(std::string name, std::shared_ptr<const Dynamics> dynamics,
                         Box u_box, Box v_box, Box state_domain)
    : name_(std::move(name)),
      dynamics_(std::move(dynamics)),
      u_box_(std::move(u_box)),
      v_box_(std::move(v_box)),
      state_domain_(std::move(state_domain)) {
  if (!dynamics_) throw ConfigError("system model requires dynamics");
  if (u_box_.dim() != dynamics_->control_dim() ||
      v_box_.dim() != dynamics_->disturbance_dim() ||
      state_domain_.dim() != dynamics_->state_dim()) {
    throw ConfigError("model '" + name_ + "': box dimensions do not match dynamics");
  }
  if (!u_box_.bounded() || !v_box_.bounded()) {
    throw ConfigError("model '" + name_ + "': control boxes must have finite bounds");
  }
}

namespace {

void check_in_box(const Box& box, const Vec& w, const char* label) {
  if (w.size() != box.dim()) {
    std::ostringstream os;
    os << label << " has dimension " << w.size() << ", expected " << box.dim();
    throw DomainError(os.str());
  }
  constexpr double kTol = 1e-12;
  for (int i = 0; i < box.dim(); ++i) {
    const double scale = 1.0 + std::abs(box.lo()[i]) + std::abs(box.hi()[i]);
    if (!(w[i] >= box.lo()[i] - kTol * scale)) {
      std::ostringstream os;
      os << label << "[" << i << "] = " << w[i] << " is below its lower bound "
         << box.lo()[i];
      throw DomainError(os.str());
    }
    if (!(w[i] <= box.hi()[i] + kTol * scale)) {
      std::ostringstream os;
      os << label << "[" << i << "] = " << w[i] << " is above its upper bound "
         << box.hi()[i];
      throw DomainError(os.str());
    }
  }
}

}  // namespace

Vec flow(const SystemModel& model, const Phase& phase, const Vec& u, const Vec& v) {
  check_in_box(model.u_box(), u, "u");
  check_in_box(model.v_box(), v, "v");
  return model.dynamics().f(phase.t, phase.x, u, v);
}

Jacobians linearize(const SystemModel& model, const Phase& phase, const Vec& u,
                    const Vec& v) {
  check_in_box(model.u_box(), u, "u");
  check_in_box(model.v_box(), v, "v");
  return model.dynamics().jacobians(phase.t, phase.x, u, v);
}

}  // namespace reachsweep
