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
// Controlled two-player systems  x' = f(t, x, u, v)  on t in [-T, 0].
//
// Player roles are fixed throughout the library: `u` is the maximizing player
// (evader) and `v` the minimizing player (pursuer). Both act through
// axis-aligned boxes. Either player may have zero dimensions.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace reachsweep {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Axis-aligned box [lo, hi]. A zero-dimensional box is valid and contains the
// empty vector.
class Box {
 public:
  Box() = default;
  Box(Vec lo, Vec hi);

  static Box Unbounded(int dim);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  Vec center() const;
  bool bounded() const;

  bool contains(const Vec& x, double tol = 0.0) const;
  Vec clamp(const Vec& x) const;

  // All 2^dim corner points, lowest index varying fastest.
  std::vector<Vec> vertices() const;

 private:
  Vec lo_;
  Vec hi_;
};

struct Phase {
  Vec x;
  double t = 0.0;
};

// Uniform schedule t_k = -T + k * dt, k = 0..K-1, with dt = T / (K - 1).
class Horizon {
 public:
  Horizon() = default;
  Horizon(double T, int K);

  double T() const { return T_; }
  int K() const { return K_; }
  double dt() const { return T_ / (K_ - 1); }
  // Exact at both ends: time(0) == -T and time(K-1) == 0.
  double time(int k) const;

 private:
  double T_ = 1.0;
  int K_ = 2;
};

struct Jacobians {
  Mat fx;  // n x n
  Mat fu;  // n x n_u
  Mat fv;  // n x n_v
};

// Second derivatives of the scalar <p, f(t, x, u, v)> for a fixed co-state p.
struct ProjectedCurvature {
  Mat xx;  // n x n
  Mat ux;  // n_u x n
  Mat vx;  // n_v x n
  Mat uv;  // n_u x n_v
  Mat uu;  // n_u x n_u
  Mat vv;  // n_v x n_v
};

class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual int disturbance_dim() const = 0;

  virtual Vec f(double t, const Vec& x, const Vec& u, const Vec& v) const = 0;
  virtual Jacobians jacobians(double t, const Vec& x, const Vec& u,
                              const Vec& v) const = 0;

  // True when f = f0(t, x) + G_u(t, x) u + G_v(t, x) v.
  virtual bool control_affine() const { return false; }

  // Default: central differences of jacobians().
  virtual ProjectedCurvature curvature(double t, const Vec& x, const Vec& u,
                                       const Vec& v, const Vec& p) const;
};

class SystemModel {
 public:
  SystemModel(std::string name, std::shared_ptr<const Dynamics> dynamics,
              Box u_box, Box v_box);
  SystemModel(std::string name, std::shared_ptr<const Dynamics> dynamics,
              Box u_box, Box v_box, Box state_domain);

  const std::string& name() const { return name_; }
  const Dynamics& dynamics() const { return *dynamics_; }
  std::shared_ptr<const Dynamics> dynamics_ptr() const { return dynamics_; }

  int n() const { return dynamics_->state_dim(); }
  int n_u() const { return dynamics_->control_dim(); }
  int n_v() const { return dynamics_->disturbance_dim(); }

  const Box& u_box() const { return u_box_; }
  const Box& v_box() const { return v_box_; }
  const Box& state_domain() const { return state_domain_; }

 private:
  std::string name_;
  std::shared_ptr<const Dynamics> dynamics_;
  Box u_box_;
  Box v_box_;
  Box state_domain_;
};

// f(t, x, u, v). Throws DomainError naming the offending bound when u or v
// lies outside its box.
Vec flow(const SystemModel& model, const Phase& phase, const Vec& u,
         const Vec& v);

Jacobians linearize(const SystemModel& model, const Phase& phase, const Vec& u,
                    const Vec& v);

// Names accepted by make_benchmark().
const std::vector<std::string>& benchmark_names();

// Builds one of: scalar_drift, double_integrator, dubins_rel, linear_generic.
// Unknown names or parameter keys throw ConfigError.
SystemModel make_benchmark(const std::string& name,
                           const nlohmann::json& params = nlohmann::json::object());

// Reads a matrix given as a list of rows; the number 0 denotes an n x 0 block.
Mat matrix_from_json(const nlohmann::json& j, int rows_hint, const std::string& field);
Vec vector_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace reachsweep
