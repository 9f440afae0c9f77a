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

#include "reachsweep/value_model.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "reachsweep/errors.hpp"

namespace reachsweep {

using nlohmann::json;

TerminalCost TerminalCost::Ball(Vec center, double radius) {
  if (!(radius >= 0.0)) throw ConfigError("ball radius must be >= 0");
  TerminalCost t;
  t.shape_ = Shape::kBall;
  t.dim_ = static_cast<int>(center.size());
  t.center_ = std::move(center);
  t.radius_ = radius;
  return t;
}

TerminalCost TerminalCost::BoxSet(Vec lo, Vec hi) {
  Box check(lo, hi);  // validates ordering
  TerminalCost t;
  t.shape_ = Shape::kBox;
  t.dim_ = check.dim();
  t.lo_ = std::move(lo);
  t.hi_ = std::move(hi);
  return t;
}

TerminalCost TerminalCost::Cylinder(std::vector<int> axes, Vec center, double radius,
                                    int dim) {
  if (!(radius >= 0.0)) throw ConfigError("cylinder radius must be >= 0");
  if (axes.empty() || axes.size() != static_cast<std::size_t>(center.size())) {
    throw ConfigError("cylinder needs one center entry per axis");
  }
  std::set<int> seen;
  for (int a : axes) {
    if (a < 0 || a >= dim || !seen.insert(a).second) {
      throw ConfigError("cylinder axes must be distinct indices below the state dimension");
    }
  }
  TerminalCost t;
  t.shape_ = Shape::kCylinder;
  t.dim_ = dim;
  t.axes_ = std::move(axes);
  t.center_ = std::move(center);
  t.radius_ = radius;
  return t;
}

TerminalCost TerminalCost::Quadratic(Vec center, Mat weight) {
  if (weight.rows() != center.size() || weight.cols() != center.size()) {
    throw ConfigError("quadratic weight must be n x n");
  }
  TerminalCost t;
  t.shape_ = Shape::kQuadratic;
  t.dim_ = static_cast<int>(center.size());
  t.center_ = std::move(center);
  t.weight_ = 0.5 * (weight + weight.transpose());
  return t;
}

namespace {

void check_target_keys(const json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("target: unknown key '" + key + "'");
    }
  }
}

Vec sized_vector(const json& j, const std::string& field, int dim) {
  Vec v = vector_from_json(j, field);
  if (v.size() != dim) {
    std::ostringstream os;
    os << "target." << field << " has " << v.size() << " entries, expected " << dim;
    throw ConfigError(os.str());
  }
  return v;
}

double radius_of(const json& j) {
  if (!j.contains("radius") || !j.at("radius").is_number()) {
    throw ConfigError("target.radius must be a number");
  }
  return j.at("radius").get<double>();
}

json to_list(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

TerminalCost TerminalCost::FromJson(const json& j, int dim) {
  if (!j.is_object() || !j.contains("shape") || !j.at("shape").is_string()) {
    throw ConfigError("target must be an object with a string 'shape'");
  }
  const std::string shape = j.at("shape").get<std::string>();
  if (shape == "ball") {
    check_target_keys(j, {"shape", "center", "radius"});
    Vec c = j.contains("center") ? sized_vector(j.at("center"), "center", dim)
                                 : Vec::Zero(dim);
    return Ball(c, radius_of(j));
  }
  if (shape == "box") {
    check_target_keys(j, {"shape", "lo", "hi"});
    if (!j.contains("lo") || !j.contains("hi")) {
      throw ConfigError("target box needs 'lo' and 'hi'");
    }
    return BoxSet(sized_vector(j.at("lo"), "lo", dim), sized_vector(j.at("hi"), "hi", dim));
  }
  if (shape == "cylinder") {
    check_target_keys(j, {"shape", "axes", "center", "radius"});
    if (!j.contains("axes") || !j.at("axes").is_array()) {
      throw ConfigError("target cylinder needs an 'axes' list");
    }
    std::vector<int> axes;
    for (const auto& a : j.at("axes")) {
      if (!a.is_number_integer()) throw ConfigError("target.axes must be integers");
      axes.push_back(a.get<int>());
    }
    const int k = static_cast<int>(axes.size());
    Vec c = j.contains("center") ? sized_vector(j.at("center"), "center", k)
                                 : Vec::Zero(k);
    return Cylinder(axes, c, radius_of(j), dim);
  }
  if (shape == "quadratic") {
    check_target_keys(j, {"shape", "center", "weight"});
    Vec c = j.contains("center") ? sized_vector(j.at("center"), "center", dim)
                                 : Vec::Zero(dim);
    Mat w = j.contains("weight") ? matrix_from_json(j.at("weight"), dim, "weight")
                                 : Mat::Identity(dim, dim);
    return Quadratic(c, w);
  }
  throw ConfigError("unknown target shape '" + shape +
                    "'; valid shapes: ball box cylinder quadratic");
}

json TerminalCost::ToJson() const {
  switch (shape_) {
    case Shape::kBall:
      return {{"shape", "ball"}, {"center", to_list(center_)}, {"radius", radius_}};
    case Shape::kBox:
      return {{"shape", "box"}, {"lo", to_list(lo_)}, {"hi", to_list(hi_)}};
    case Shape::kCylinder:
      return {{"shape", "cylinder"},
              {"axes", axes_},
              {"center", to_list(center_)},
              {"radius", radius_}};
    case Shape::kQuadratic: {
      json w = json::array();
      for (Eigen::Index r = 0; r < weight_.rows(); ++r) {
        w.push_back(to_list(weight_.row(r).transpose()));
      }
      return {{"shape", "quadratic"}, {"center", to_list(center_)}, {"weight", w}};
    }
  }
  return {};
}

bool TerminalCost::contains(const Vec& x) const {
  switch (shape_) {
    case Shape::kBall:
      return (x - center_).squaredNorm() <= radius_ * radius_;
    case Shape::kBox:
      return (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
    case Shape::kCylinder: {
      double s = 0.0;
      for (std::size_t i = 0; i < axes_.size(); ++i) {
        const double d = x[axes_[i]] - center_[static_cast<Eigen::Index>(i)];
        s += d * d;
      }
      return s <= radius_ * radius_;
    }
    case Shape::kQuadratic:
      return (x - center_).dot(weight_ * (x - center_)) <= 0.0;
  }
  return false;
}

namespace {

// ||d|| - r and derivatives with respect to d.
void radial(const Vec& d, double r, double* g, Vec* g_d, Mat* g_dd) {
  const auto k = d.size();
  const double norm = d.norm();
  *g = norm - r;
  // A trajectory that crosses the center lands a few ulps off it, where the
  // gradient direction is noise; treat that as the center itself.
  if (norm <= 1e-9 * std::max(1.0, r)) {
    *g_d = Vec::Zero(k);
    *g_dd = Mat::Zero(k, k);
    return;
  }
  const Vec n = d / norm;
  *g_d = n;
  *g_dd = (Mat::Identity(k, k) - n * n.transpose()) / norm;
}

}  // namespace

TerminalEval terminal_cost(const TerminalCost& t, const Vec& x) {
  const int n = t.dim_;
  if (x.size() != n) throw ConfigError("terminal_cost: state dimension mismatch");
  TerminalEval out;
  out.g_x = Vec::Zero(n);
  out.g_xx = Mat::Zero(n, n);
  switch (t.shape_) {
    case TerminalCost::Shape::kBall:
      radial(x - t.center_, t.radius_, &out.g, &out.g_x, &out.g_xx);
      break;
    case TerminalCost::Shape::kCylinder: {
      const auto k = static_cast<Eigen::Index>(t.axes_.size());
      Vec d(k);
      for (Eigen::Index i = 0; i < k; ++i) d[i] = x[t.axes_[i]] - t.center_[i];
      Vec gd;
      Mat gdd;
      radial(d, t.radius_, &out.g, &gd, &gdd);
      for (Eigen::Index i = 0; i < k; ++i) {
        out.g_x[t.axes_[i]] = gd[i];
        for (Eigen::Index j = 0; j < k; ++j) out.g_xx(t.axes_[i], t.axes_[j]) = gdd(i, j);
      }
      break;
    }
    case TerminalCost::Shape::kBox: {
      // Per-axis signed excess: positive outside the slab.
      Vec lo_gap = t.lo_ - x;
      Vec hi_gap = x - t.hi_;
      Vec excess = lo_gap.cwiseMax(hi_gap);
      if ((excess.array() <= 0.0).all()) {
        Eigen::Index i = 0;
        out.g = excess.maxCoeff(&i);
        out.g_x[i] = hi_gap[i] >= lo_gap[i] ? 1.0 : -1.0;
        break;
      }
      Vec e = Vec::Zero(n);
      for (int i = 0; i < n; ++i) {
        if (hi_gap[i] > 0.0) e[i] = hi_gap[i];
        if (lo_gap[i] > 0.0) e[i] = -lo_gap[i];
      }
      const double norm = e.norm();
      out.g = norm;
      out.g_x = e / norm;
      for (int i = 0; i < n; ++i) {
        if (e[i] != 0.0) out.g_xx(i, i) = 1.0 / norm;
      }
      out.g_xx -= out.g_x * out.g_x.transpose() / norm;
      break;
    }
    case TerminalCost::Shape::kQuadratic: {
      const Vec d = x - t.center_;
      out.g_x = t.weight_ * d;
      out.g = 0.5 * d.dot(out.g_x);
      out.g_xx = t.weight_;
      break;
    }
  }
  return out;
}

double eval_quad(const QuadValue& q, const Vec& dx) {
  return q.v + q.vx.dot(dx) + 0.5 * dx.dot(q.vxx * dx);
}

Vec costate_at(const QuadValue& q, const Vec& dx) { return q.vx + q.vxx * dx; }

HamiltonianResult hamiltonian(const SystemModel& model, const Phase& phase,
                              const Vec& vx) {
  const Dynamics& dyn = model.dynamics();
  if (!dyn.control_affine()) {
    throw UnsupportedModelError("model '" + model.name() +
                                "' is not control-affine; no closed-form extremizer");
  }
  const Box& ub = model.u_box();
  const Box& vb = model.v_box();
  const Jacobians J = dyn.jacobians(phase.t, phase.x, ub.center(), vb.center());
  const Vec cu = J.fu.transpose() * vx;
  const Vec cv = J.fv.transpose() * vx;

  HamiltonianResult r;
  r.u.resize(model.n_u());
  r.v.resize(model.n_v());
  for (int i = 0; i < model.n_u(); ++i) r.u[i] = cu[i] >= 0.0 ? ub.hi()[i] : ub.lo()[i];
  for (int i = 0; i < model.n_v(); ++i) r.v[i] = cv[i] > 0.0 ? vb.lo()[i] : vb.hi()[i];
  r.H = vx.dot(dyn.f(phase.t, phase.x, r.u, r.v));
  return r;
}

HamiltonianExpansion expand_hamiltonian(const SystemModel& model, const Phase& phase,
                                        const Vec& u, const Vec& v,
                                        const QuadValue& vq, double eps) {
  if (!(eps >= 0.0)) throw ConfigError("smoothing epsilon must be >= 0");
  const Dynamics& dyn = model.dynamics();
  const int nu = model.n_u(), nv = model.n_v();
  const bool affine = dyn.control_affine();
  if (affine && eps == 0.0 && nu + nv > 0) {
    throw NumericalError(
        "control-affine model with zero smoothing: H_uu and H_vv are singular",
        std::numeric_limits<double>::infinity());
  }

  const Jacobians J = linearize(model, phase, u, v);
  const ProjectedCurvature c = dyn.curvature(phase.t, phase.x, u, v, vq.vx);

  HamiltonianExpansion e;
  e.f = dyn.f(phase.t, phase.x, u, v);
  e.f_x = J.fx;
  e.f_u = J.fu;
  e.f_v = J.fv;
  e.H = vq.vx.dot(e.f);
  e.H_x = J.fx.transpose() * vq.vx;
  e.H_u = J.fu.transpose() * vq.vx;
  e.H_v = J.fv.transpose() * vq.vx;
  e.H_xx = c.xx;
  e.H_ux = c.ux;
  e.H_vx = c.vx;
  e.H_uv = c.uv;
  e.H_uu = c.uu;
  e.H_vv = c.vv;
  if (affine) {
    e.H_uu -= eps * Mat::Identity(nu, nu);
    e.H_vv += eps * Mat::Identity(nv, nv);
  }
  return e;
}

}  // namespace reachsweep
