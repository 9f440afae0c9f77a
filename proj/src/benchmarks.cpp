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

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "reachsweep/dynamics.hpp"
#include "reachsweep/errors.hpp"

namespace reachsweep {
namespace {

using nlohmann::json;

// x' = v. The only player is the minimizer.
class ScalarDrift final : public Dynamics {
 public:
  int state_dim() const override { return 1; }
  int control_dim() const override { return 0; }
  int disturbance_dim() const override { return 1; }
  bool control_affine() const override { return true; }

  Vec f(double, const Vec&, const Vec&, const Vec& v) const override {
    return Vec::Constant(1, v[0]);
  }
  Jacobians jacobians(double, const Vec&, const Vec&, const Vec&) const override {
    return {Mat::Zero(1, 1), Mat::Zero(1, 0), Mat::Ones(1, 1)};
  }
  ProjectedCurvature curvature(double, const Vec&, const Vec&, const Vec&,
                               const Vec&) const override {
    return {Mat::Zero(1, 1), Mat::Zero(0, 1), Mat::Zero(1, 1),
            Mat::Zero(0, 1), Mat::Zero(0, 0), Mat::Zero(1, 1)};
  }
};

// x1' = x2, x2' = u + v.
class DoubleIntegrator final : public Dynamics {
 public:
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }
  int disturbance_dim() const override { return 1; }
  bool control_affine() const override { return true; }

  Vec f(double, const Vec& x, const Vec& u, const Vec& v) const override {
    return Vec{{x[1], u[0] + v[0]}};
  }
  Jacobians jacobians(double, const Vec&, const Vec&, const Vec&) const override {
    Jacobians J;
    J.fx = Mat{{0.0, 1.0}, {0.0, 0.0}};
    J.fu = Mat{{0.0}, {1.0}};
    J.fv = Mat{{0.0}, {1.0}};
    return J;
  }
  ProjectedCurvature curvature(double, const Vec&, const Vec&, const Vec&,
                               const Vec&) const override {
    return {Mat::Zero(2, 2), Mat::Zero(1, 2), Mat::Zero(1, 2),
            Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1)};
  }
};

// Relative kinematics of two unicycles expressed in the evader's body frame.
// State (x, y, psi) is the pursuer's pose relative to the evader; u = a is the
// evader's turn rate, v = b the pursuer's.
class DubinsRelative final : public Dynamics {
 public:
  DubinsRelative(double va, double vb) : va_(va), vb_(vb) {}

  int state_dim() const override { return 3; }
  int control_dim() const override { return 1; }
  int disturbance_dim() const override { return 1; }
  bool control_affine() const override { return true; }

  Vec f(double, const Vec& x, const Vec& u, const Vec& v) const override {
    const double a = u[0], b = v[0];
    return Vec{{-va_ + vb_ * std::cos(x[2]) + a * x[1],
                vb_ * std::sin(x[2]) - a * x[0], b - a}};
  }
  Jacobians jacobians(double, const Vec& x, const Vec& u, const Vec&) const override {
    const double a = u[0];
    const double s = std::sin(x[2]), c = std::cos(x[2]);
    Jacobians J;
    J.fx = Mat{{0.0, a, -vb_ * s}, {-a, 0.0, vb_ * c}, {0.0, 0.0, 0.0}};
    J.fu = Mat{{x[1]}, {-x[0]}, {-1.0}};
    J.fv = Mat{{0.0}, {0.0}, {1.0}};
    return J;
  }
  ProjectedCurvature curvature(double, const Vec& x, const Vec&, const Vec&,
                               const Vec& p) const override {
    ProjectedCurvature c{Mat::Zero(3, 3), Mat::Zero(1, 3), Mat::Zero(1, 3),
                         Mat::Zero(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1)};
    c.xx(2, 2) = -vb_ * (p[0] * std::cos(x[2]) + p[1] * std::sin(x[2]));
    c.ux(0, 0) = -p[1];
    c.ux(0, 1) = p[0];
    return c;
  }

 private:
  double va_;
  double vb_;
};

// x' = A x + B_u u + B_v v.
class LinearGeneric final : public Dynamics {
 public:
  LinearGeneric(Mat A, Mat Bu, Mat Bv)
      : A_(std::move(A)), Bu_(std::move(Bu)), Bv_(std::move(Bv)) {}

  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int control_dim() const override { return static_cast<int>(Bu_.cols()); }
  int disturbance_dim() const override { return static_cast<int>(Bv_.cols()); }
  bool control_affine() const override { return true; }

  Vec f(double, const Vec& x, const Vec& u, const Vec& v) const override {
    Vec out = A_ * x;
    if (Bu_.cols() > 0) out.noalias() += Bu_ * u;
    if (Bv_.cols() > 0) out.noalias() += Bv_ * v;
    return out;
  }
  Jacobians jacobians(double, const Vec&, const Vec&, const Vec&) const override {
    return {A_, Bu_, Bv_};
  }
  ProjectedCurvature curvature(double, const Vec&, const Vec&, const Vec&,
                               const Vec&) const override {
    const auto n = A_.rows(), nu = Bu_.cols(), nv = Bv_.cols();
    return {Mat::Zero(n, n),  Mat::Zero(nu, n),  Mat::Zero(nv, n),
            Mat::Zero(nu, nv), Mat::Zero(nu, nu), Mat::Zero(nv, nv)};
  }

 private:
  Mat A_;
  Mat Bu_;
  Mat Bv_;
};

void check_keys(const json& params, const std::string& model,
                const std::set<std::string>& allowed) {
  if (!params.is_object()) {
    throw ConfigError("model '" + model + "': params must be an object");
  }
  for (const auto& [key, _] : params.items()) {
    if (!allowed.count(key)) {
      std::ostringstream os;
      os << "model '" << model << "': unknown parameter '" << key << "' (allowed:";
      for (const auto& a : allowed) os << " " << a;
      os << ")";
      throw ConfigError(os.str());
    }
  }
}

double number(const json& params, const std::string& key, double fallback) {
  if (!params.contains(key)) return fallback;
  const json& j = params.at(key);
  if (!j.is_number()) throw ConfigError("parameter '" + key + "' must be a number");
  return j.get<double>();
}

Vec vector_or(const json& params, const std::string& key, int dim, double fill) {
  if (!params.contains(key)) return Vec::Constant(dim, fill);
  const json& j = params.at(key);
  if (j.is_number()) return Vec::Constant(dim, j.get<double>());
  Vec out = vector_from_json(j, key);
  if (out.size() != dim) {
    std::ostringstream os;
    os << "parameter '" << key << "' has " << out.size() << " entries, expected "
       << dim;
    throw ConfigError(os.str());
  }
  return out;
}

Box state_domain(const json& params, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  return Box(vector_or(params, "domain_lo", n, -inf),
             vector_or(params, "domain_hi", n, inf));
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"scalar_drift", "double_integrator",
                                                 "dubins_rel", "linear_generic"};
  return names;
}

Mat matrix_from_json(const json& j, int rows_hint, const std::string& field) {
  if (j.is_number()) {
    if (j.get<double>() != 0.0) {
      throw ConfigError("field '" + field + "': a scalar matrix must be 0");
    }
    return Mat::Zero(rows_hint, 0);
  }
  if (!j.is_array() || j.empty()) {
    throw ConfigError("field '" + field + "' must be a non-empty list of rows or 0");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Mat out;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) {
      throw ConfigError("field '" + field + "': each row must be a list");
    }
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("field '" + field + "': rows have unequal lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_number()) {
        throw ConfigError("field '" + field + "': entries must be numbers");
      }
      out(r, c) = e.get<double>();
    }
  }
  return out;
}

Vec vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError("field '" + field + "' must be a list");
  Vec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError("field '" + field + "': entries must be numbers");
    }
    out[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return out;
}

SystemModel make_benchmark(const std::string& name, const json& params) {
  if (name == "scalar_drift") {
    check_keys(params, name, {"v_lo", "v_hi", "domain_lo", "domain_hi"});
    return SystemModel(name, std::make_shared<ScalarDrift>(), Box(Vec(0), Vec(0)),
                       Box(Vec::Constant(1, number(params, "v_lo", -1.0)),
                           Vec::Constant(1, number(params, "v_hi", 1.0))),
                       state_domain(params, 1));
  }
  if (name == "double_integrator") {
    check_keys(params, name,
               {"u_lo", "u_hi", "v_lo", "v_hi", "domain_lo", "domain_hi"});
    return SystemModel(name, std::make_shared<DoubleIntegrator>(),
                       Box(Vec::Constant(1, number(params, "u_lo", -1.0)),
                           Vec::Constant(1, number(params, "u_hi", 1.0))),
                       Box(Vec::Constant(1, number(params, "v_lo", -0.5)),
                           Vec::Constant(1, number(params, "v_hi", 0.5))),
                       state_domain(params, 2));
  }
  if (name == "dubins_rel") {
    check_keys(params, name,
               {"v_a", "v_b", "u_max", "v_max", "domain_lo", "domain_hi"});
    const double u_max = number(params, "u_max", 1.0);
    const double v_max = number(params, "v_max", 1.0);
    return SystemModel(
        name,
        std::make_shared<DubinsRelative>(number(params, "v_a", 1.0),
                                         number(params, "v_b", 1.0)),
        Box(Vec::Constant(1, -u_max), Vec::Constant(1, u_max)),
        Box(Vec::Constant(1, -v_max), Vec::Constant(1, v_max)), state_domain(params, 3));
  }
  if (name == "linear_generic") {
    check_keys(params, name,
               {"A", "B_u", "B_v", "u_lo", "u_hi", "v_lo", "v_hi", "domain_lo",
                "domain_hi"});
    if (!params.contains("A")) throw ConfigError("model 'linear_generic' requires A");
    Mat A = matrix_from_json(params.at("A"), 0, "A");
    if (A.rows() != A.cols()) throw ConfigError("field 'A' must be square");
    const int n = static_cast<int>(A.rows());
    Mat Bu = params.contains("B_u") ? matrix_from_json(params.at("B_u"), n, "B_u")
                                    : Mat::Zero(n, 0);
    Mat Bv = params.contains("B_v") ? matrix_from_json(params.at("B_v"), n, "B_v")
                                    : Mat::Zero(n, 0);
    if (Bu.rows() != n || Bv.rows() != n) {
      throw ConfigError("fields 'B_u' and 'B_v' must have as many rows as A");
    }
    const int nu = static_cast<int>(Bu.cols()), nv = static_cast<int>(Bv.cols());
    Box ub(vector_or(params, "u_lo", nu, -1.0), vector_or(params, "u_hi", nu, 1.0));
    Box vb(vector_or(params, "v_lo", nv, -1.0), vector_or(params, "v_hi", nv, 1.0));
    return SystemModel(name, std::make_shared<LinearGeneric>(A, Bu, Bv), ub, vb,
                       state_domain(params, n));
  }
  std::ostringstream os;
  os << "unknown model '" << name << "'; valid names:";
  for (const auto& n : benchmark_names()) os << " " << n;
  throw ConfigError(os.str());
}

}  // namespace reachsweep
