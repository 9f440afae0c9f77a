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

#include <vector>

#include "json.hpp"
#include "reachsweep/dynamics.hpp"

namespace reachsweep {

struct TerminalEval {
  double g = 0.0;
  Vec g_x;
  Mat g_xx;
};

// Target set L0 = {x : g(x) <= 0} given by a signed-distance-like cost.
class TerminalCost {
 public:
  enum class Shape { kBall, kBox, kCylinder, kQuadratic };

  static TerminalCost Ball(Vec center, double radius);
  static TerminalCost BoxSet(Vec lo, Vec hi);
  // Ball in the coordinate subspace spanned by `axes`; the remaining
  // coordinates are unconstrained. `center` has one entry per axis.
  static TerminalCost Cylinder(std::vector<int> axes, Vec center, double radius,
                               int dim);
  // g = 0.5 (x - c)^T W (x - c). Not a signed distance; used for LQ checks.
  static TerminalCost Quadratic(Vec center, Mat weight);

  // {"shape": "ball", "center": [...], "radius": r}, and similarly for
  // "box" (lo, hi), "cylinder" (axes, center, radius) and "quadratic"
  // (center, weight).
  static TerminalCost FromJson(const nlohmann::json& j, int dim);
  nlohmann::json ToJson() const;

  Shape shape() const { return shape_; }
  int dim() const { return dim_; }

  // Geometric membership test, independent of the distance evaluation.
  bool contains(const Vec& x) const;

 private:
  friend TerminalEval terminal_cost(const TerminalCost&, const Vec&);

  Shape shape_ = Shape::kBall;
  int dim_ = 0;
  Vec center_;
  double radius_ = 0.0;
  Vec lo_, hi_;
  std::vector<int> axes_;
  Mat weight_;
};

// Signed distance and derivatives. At distance singularities (ball center,
// box ridges) the gradient picks a deterministic one-sided value and the
// Hessian is zero.
TerminalEval terminal_cost(const TerminalCost& target, const Vec& x);

// Local model V(x_r + dx) ~ v + <vx, dx> + 0.5 <dx, vxx dx>.
struct QuadValue {
  double v = 0.0;
  Vec vx;
  Mat vxx;
  Phase anchor;
};

double eval_quad(const QuadValue& q, const Vec& dx);
Vec costate_at(const QuadValue& q, const Vec& dx);

struct HamiltonianExpansion {
  double H = 0.0;
  Vec H_x, H_u, H_v;
  Mat H_xx, H_ux, H_vx, H_uv, H_uu, H_vv;
  Vec f;
  Mat f_x, f_u, f_v;
};

struct HamiltonianResult {
  double H = 0.0;
  Vec u;  // maximizer
  Vec v;  // minimizer
};

// H = max_u min_v <vx, f>. Control-affine models only; per coordinate the
// extremizer sits on a box face, with ties going to the upper bound.
HamiltonianResult hamiltonian(const SystemModel& model, const Phase& phase,
                              const Vec& vx);

// Expansion of <vx, f> about (x, u, v). For control-affine models the exact
// H_uu and H_vv vanish and are replaced by -eps*I and +eps*I respectively;
// eps == 0 then throws NumericalError.
HamiltonianExpansion expand_hamiltonian(const SystemModel& model, const Phase& phase,
                                        const Vec& u, const Vec& v,
                                        const QuadValue& vq, double eps);

// Realized improvement bookkeeping for one iteration.
struct ValueTriple {
  double v_actual = 0.0;
  double v_pred = 0.0;  // magnitude, >= 0
  double v_nominal = 0.0;
};

}  // namespace reachsweep
