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

#include "reachsweep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "reachsweep/errors.hpp"

namespace reachsweep {

double vertex_hamiltonian(const SystemModel& model, double t, const Vec& x,
                          const Vec& p) {
  double best = -std::numeric_limits<double>::infinity();
  const auto vverts = model.v_box().vertices();
  for (const Vec& u : model.u_box().vertices()) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Vec& v : vverts) {
      worst = std::min(worst, p.dot(model.dynamics().f(t, x, u, v)));
    }
    best = std::max(best, worst);
  }
  return best;
}

std::vector<double> dissipation_bounds(const SystemModel& model, const DenseGrid& grid,
                                       double t) {
  std::vector<double> alpha(static_cast<std::size_t>(grid.dim()), 0.0);
  const auto uverts = model.u_box().vertices();
  const auto vverts = model.v_box().vertices();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec x = grid.point(i);
    for (const Vec& u : uverts) {
      for (const Vec& v : vverts) {
        const Vec f = model.dynamics().f(t, x, u, v);
        for (int a = 0; a < grid.dim(); ++a) {
          alpha[static_cast<std::size_t>(a)] =
              std::max(alpha[static_cast<std::size_t>(a)], std::abs(f[a]));
        }
      }
    }
  }
  return alpha;
}

double cfl_limit(const std::vector<double>& alpha, const DenseGrid& grid) {
  double rate = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    rate += alpha[static_cast<std::size_t>(a)] / grid.spacing(a);
  }
  return rate > 0.0 ? 0.5 / rate : std::numeric_limits<double>::infinity();
}

namespace {

void lf_range(const DenseGrid& in, DenseGrid& out, const SystemModel& model,
              const std::vector<double>& alpha, double dt, double t, std::size_t begin,
              std::size_t end) {
  const int d = in.dim();
  Vec p(d);
  for (std::size_t idx = begin; idx < end; ++idx) {
    const std::vector<int> mi = in.unflatten(idx);
    const double w = in[idx];
    double dissipation = 0.0;
    for (int a = 0; a < d; ++a) {
      const int i = mi[static_cast<std::size_t>(a)];
      const int last = in.nodes()[static_cast<std::size_t>(a)] - 1;
      const std::size_t s = in.stride(a);
      const double h = in.spacing(a);
      // Linear extrapolation supplies the ghost node at either boundary.
      const double wp = i < last ? in[idx + s] : 2.0 * w - in[idx - s];
      const double wm = i > 0 ? in[idx - s] : 2.0 * w - in[idx + s];
      p[a] = (wp - wm) / (2.0 * h);
      dissipation += alpha[static_cast<std::size_t>(a)] * (wp - 2.0 * w + wm) / (2.0 * h);
    }
    const double H = vertex_hamiltonian(model, t, in.point(idx), p);
    const double candidate = w + dt * (H + dissipation);
    out[idx] = std::min(candidate, w);
  }
}

}  // namespace

DenseGrid lf_step(const DenseGrid& grid, const SystemModel& model, double dt, double t,
                  int threads) {
  if (grid.dim() != model.n()) throw ConfigError("grid dimension does not match model");
  for (int a = 0; a < grid.dim(); ++a) {
    if (grid.nodes()[static_cast<std::size_t>(a)] < 3) {
      throw ConfigError("oracle grids need at least 3 nodes per axis");
    }
  }
  const std::vector<double> alpha = dissipation_bounds(model, grid, t);
  const double limit = cfl_limit(alpha, grid);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "oracle time step " << dt << " violates the CFL condition; admissible dt <= "
       << limit;
    throw ConfigError(os.str());
  }
  DenseGrid out = grid;
  const std::size_t total = grid.size();
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(total)));
  if (workers == 1) {
    lf_range(grid, out, model, alpha, dt, t, 0, total);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t b = std::min(total, chunk * static_cast<std::size_t>(w));
    const std::size_t e = std::min(total, b + chunk);
    pool.emplace_back(
        [&, b, e] { lf_range(grid, out, model, alpha, dt, t, b, e); });
  }
  for (auto& th : pool) th.join();
  return out;
}

PdeSchedule pde_schedule(const SystemModel& model, const PdeSpec& spec, double T) {
  if (model.n() > 3) {
    throw ConfigError("the grid oracle supports n <= 3; this model has n = " +
                      std::to_string(model.n()));
  }
  if (!(T >= 0.0)) throw ConfigError("oracle horizon must be >= 0");
  DenseGrid grid(spec.lo, spec.hi, spec.nodes, 3);
  if (grid.dim() != model.n()) throw ConfigError("oracle grid dimension must equal n");
  PdeSchedule s;
  if (T == 0.0) return s;
  s.cfl = cfl_limit(dissipation_bounds(model, grid), grid);
  double dt = spec.dt;
  if (dt > 0.0 && dt > s.cfl * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "oracle time step " << dt << " violates the CFL condition; admissible dt <= "
       << s.cfl;
    throw ConfigError(os.str());
  }
  if (dt <= 0.0) dt = s.cfl;
  s.steps = static_cast<int>(std::ceil(T / dt - 1e-12));
  s.dt = T / s.steps;
  return s;
}

DenseGrid solve_pde(const SystemModel& model, const TerminalCost& target,
                    const PdeSpec& spec, double T, int threads) {
  const PdeSchedule schedule = pde_schedule(model, spec, T);
  DenseGrid grid(spec.lo, spec.hi, spec.nodes, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = terminal_cost(target, grid.point(i)).g;
  }
  for (int s = 0; s < schedule.steps; ++s) {
    grid = lf_step(grid, model, schedule.dt, -schedule.dt * s, threads);
  }
  return grid;
}

Mat matrix_exponential(const Mat& A) {
  const auto n = A.rows();
  const double norm = A.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat B = A / std::ldexp(1.0, squarings);
  Mat result = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= 20; ++k) {
    term = (term * B) / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

Mat analytic_transport_vxx(const Mat& A, const Mat& G, double t) {
  const Mat phi = matrix_exponential(-A * t);
  return phi.transpose() * G * phi;
}

namespace {

double point_segment(const Vec& p, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

// Closest point on a triangle, by Voronoi region of the vertices and edges.
double point_triangle(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
  const Vec ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();
  const Vec bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return point_segment(p, a, b);
  const Vec cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return point_segment(p, a, c);
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return point_segment(p, b, c);
  const double denom = va + vb + vc;
  if (!(std::abs(denom) > 0.0)) {
    return std::min({point_segment(p, a, b), point_segment(p, a, c),
                     point_segment(p, b, c)});
  }
  const double v = vb / denom, w = vc / denom;
  return (p - (a + v * ab + w * ac)).norm();
}

constexpr int kSegmentSamples = 8;
constexpr int kTriangleSamples = 6;

std::vector<Vec> sample(const LevelSet& s) {
  std::vector<Vec> out;
  if (s.dim == 2) {
    for (const auto& seg : s.segments) {
      const Vec& a = s.vertices[static_cast<std::size_t>(seg[0])];
      const Vec& b = s.vertices[static_cast<std::size_t>(seg[1])];
      for (int i = 0; i <= kSegmentSamples; ++i) {
        out.push_back(a + (b - a) * (static_cast<double>(i) / kSegmentSamples));
      }
    }
  } else if (s.dim == 3) {
    for (const auto& tri : s.triangles) {
      const Vec& a = s.vertices[static_cast<std::size_t>(tri[0])];
      const Vec& b = s.vertices[static_cast<std::size_t>(tri[1])];
      const Vec& c = s.vertices[static_cast<std::size_t>(tri[2])];
      for (int i = 0; i <= kTriangleSamples; ++i) {
        for (int j = 0; i + j <= kTriangleSamples; ++j) {
          const double u = static_cast<double>(i) / kTriangleSamples;
          const double v = static_cast<double>(j) / kTriangleSamples;
          out.push_back(a + u * (b - a) + v * (c - a));
        }
      }
    }
  }
  if (out.empty()) out = s.vertices;
  return out;
}

double distance_to(const Vec& p, const LevelSet& s) {
  double best = std::numeric_limits<double>::infinity();
  if (s.dim == 2 && !s.segments.empty()) {
    for (const auto& seg : s.segments) {
      best = std::min(best, point_segment(p, s.vertices[static_cast<std::size_t>(seg[0])],
                                          s.vertices[static_cast<std::size_t>(seg[1])]));
    }
  } else if (s.dim == 3 && !s.triangles.empty()) {
    for (const auto& tri : s.triangles) {
      best = std::min(best,
                      point_triangle(p, s.vertices[static_cast<std::size_t>(tri[0])],
                                     s.vertices[static_cast<std::size_t>(tri[1])],
                                     s.vertices[static_cast<std::size_t>(tri[2])]));
    }
  } else {
    for (const Vec& v : s.vertices) best = std::min(best, (p - v).norm());
  }
  return best;
}

}  // namespace

SetDistance compare_sets(const LevelSet& a, const LevelSet& b) {
  if (a.empty() && b.empty()) throw ComparisonError("both level sets are empty");
  if (a.empty()) throw ComparisonError("first level set is empty");
  if (b.empty()) throw ComparisonError("second level set is empty");
  if (a.dim != b.dim) throw ComparisonError("level sets have different dimensions");
  SetDistance out;
  double sum = 0.0;
  std::size_t count = 0;
  for (const Vec& p : sample(a)) {
    const double d = distance_to(p, b);
    out.hausdorff = std::max(out.hausdorff, d);
    sum += d;
    ++count;
  }
  for (const Vec& p : sample(b)) {
    const double d = distance_to(p, a);
    out.hausdorff = std::max(out.hausdorff, d);
    sum += d;
    ++count;
  }
  out.mean = sum / static_cast<double>(count);
  return out;
}

}  // namespace reachsweep
