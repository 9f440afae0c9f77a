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

#include "reachsweep/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "reachsweep/errors.hpp"

namespace reachsweep {

SeedSet seed_grid(const Box& domain, const std::vector<int>& counts,
                  std::optional<std::uint64_t> jitter) {
  if (domain.dim() == 0 || static_cast<int>(counts.size()) != domain.dim()) {
    throw ConfigError("seed domain and counts must have the same nonzero dimension");
  }
  DenseGrid lattice(domain.lo(), domain.hi(), counts, 2);
  SeedSet out;
  out.domain = domain;
  out.counts = counts;
  out.seeds.reserve(lattice.size());
  std::mt19937_64 rng(jitter.value_or(0));
  std::uniform_real_distribution<double> unit(-0.25, 0.25);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    Vec p = lattice.point(i);
    if (jitter) {
      for (int a = 0; a < p.size(); ++a) p[a] += unit(rng) * lattice.spacing(a);
      p = domain.clamp(p);
    }
    out.seeds.push_back(std::move(p));
  }
  return out;
}

ValueBuffer::ValueBuffer(const Box& domain, const std::vector<int>& counts)
    : grid(domain.lo(), domain.hi(), counts, 2),
      contributors(grid.size(), 0) {
  std::fill(grid.values().begin(), grid.values().end(),
            std::numeric_limits<double>::infinity());
}

double default_trust_radius(const ValueBuffer& buffer) {
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < buffer.grid.dim(); ++a) h = std::min(h, buffer.grid.spacing(a));
  return 2.0 * h;
}

void deposit(ValueBuffer& buffer, const QuadValue& model, double r) {
  const DenseGrid& g = buffer.grid;
  const int d = g.dim();
  const Vec& anchor = model.anchor.x;
  std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const double h = g.spacing(a);
    const int last = g.nodes()[static_cast<std::size_t>(a)] - 1;
    lo[static_cast<std::size_t>(a)] =
        std::clamp(static_cast<int>(std::floor((anchor[a] - r - g.lo()[a]) / h)), 0, last);
    hi[static_cast<std::size_t>(a)] =
        std::clamp(static_cast<int>(std::ceil((anchor[a] + r - g.lo()[a]) / h)), 0, last);
    if (anchor[a] + r < g.lo()[a] || anchor[a] - r > g.hi()[a]) return;
  }
  std::vector<int> idx = lo;
  const double r2 = r * r;
  while (true) {
    Vec x(d);
    for (int a = 0; a < d; ++a) x[a] = g.coordinate(a, idx[static_cast<std::size_t>(a)]);
    const Vec dx = x - anchor;
    if (dx.squaredNorm() <= r2) {
      const std::size_t f = g.flat(idx);
      buffer.grid[f] = std::min(buffer.grid[f], eval_quad(model, dx));
      ++buffer.contributors[f];
    }
    int a = d - 1;
    while (a >= 0) {
      auto& i = idx[static_cast<std::size_t>(a)];
      if (i < hi[static_cast<std::size_t>(a)]) {
        ++i;
        break;
      }
      i = lo[static_cast<std::size_t>(a)];
      --a;
    }
    if (a < 0) break;
  }
}

void deposit(ValueBuffer& buffer, const TrajectoryIterate& traj, double r) {
  deposit(buffer, traj.values.front(), r);
}

SweepResult run_sweep(const SystemModel& model, const TerminalCost& target,
                      const SeedSet& seeds, const Horizon& horizon,
                      const SolverConfig& cfg, const SweepOptions& options) {
  cfg.validate();
  SweepResult out;
  out.buffer = ValueBuffer(seeds.domain, seeds.counts);
  out.trust_radius =
      options.trust_radius > 0.0 ? options.trust_radius : default_trust_radius(out.buffer);

  const std::size_t count = seeds.seeds.size();
  out.reports.resize(count);
  std::vector<std::optional<QuadValue>> models(count);

  auto solve_one = [&](std::size_t i) {
    SeedReport& rep = out.reports[i];
    rep.index = i;
    rep.seed = seeds.seeds[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      SolveResult res = solve_trajectory(model, target, seeds.seeds[i], horizon, cfg);
      rep.status = res.status;
      rep.iterations = res.iterations;
      rep.accepted_steps = res.accepted_steps;
      rep.monotone_violations = res.monotone_violations;
      rep.ratio_violations = res.ratio_violations;
      for (auto it = res.traj.stats.rbegin(); it != res.traj.stats.rend(); ++it) {
        if (it->accepted) {
          rep.final_ratio = it->ratio;
          break;
        }
      }
      rep.value = res.traj.values.front().v;
      if (std::isfinite(rep.value) && res.traj.values.front().vx.allFinite()) {
        models[i] = std::move(res.traj.values.front());
      }
    } catch (const std::exception& e) {
      rep.status = "failed";
      rep.error = e.what();
      rep.value = std::numeric_limits<double>::quiet_NaN();
    }
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const int workers =
      static_cast<int>(std::min<std::size_t>(std::max(1, options.threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) solve_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) solve_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (models[i]) deposit(out.buffer, *models[i], out.trust_radius);
  }
  return out;
}

}  // namespace reachsweep
