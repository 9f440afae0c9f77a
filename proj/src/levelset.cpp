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

#include "reachsweep/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>

#include "reachsweep/errors.hpp"

namespace reachsweep {
namespace {

// Edge of the unit cube joining two corners that differ in exactly one bit.
int cube_edge(int c1, int c2) {
  const int diff = c1 ^ c2;
  const int axis = diff == 1 ? 0 : (diff == 2 ? 1 : 2);
  int j = 0, bit = 0;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) continue;
    j |= ((c1 >> a) & 1) << bit;
    ++bit;
  }
  return 4 * axis + j;
}

std::pair<int, int> cube_edge_corners(int e) {
  const int axis = e / 4, j = e % 4;
  int base = 0, bit = 0;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) continue;
    base |= ((j >> bit) & 1) << a;
    ++bit;
  }
  return {base, base | (1 << axis)};
}

// Pairs the crossing edges of one face given its corners in cyclic order.
// Every maximal run of inside corners is cut off by one segment, so inside
// corners on an ambiguous face stay separated.
template <typename EdgeFn>
std::vector<std::pair<int, int>> face_segments(const std::array<int, 4>& corners,
                                               const std::array<bool, 4>& inside,
                                               EdgeFn edge) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 4; ++i) {
    const int prev = (i + 3) % 4;
    if (inside[i] && !inside[prev]) {
      int j = i;
      while (inside[(j + 1) % 4]) j = (j + 1) % 4;
      out.emplace_back(edge(corners[prev], corners[i]),
                       edge(corners[j], corners[(j + 1) % 4]));
    }
  }
  return out;
}

std::vector<std::vector<int>> cube_loops(int mask) {
  static const int kFaces[6][4] = {
      {0, 2, 6, 4}, {1, 3, 7, 5},  // axis 0 fixed
      {0, 1, 5, 4}, {2, 3, 7, 6},  // axis 1 fixed
      {0, 1, 3, 2}, {4, 5, 7, 6},  // axis 2 fixed
  };
  std::map<int, std::vector<int>> adj;
  for (const auto& face : kFaces) {
    std::array<int, 4> corners{face[0], face[1], face[2], face[3]};
    std::array<bool, 4> in{};
    for (int i = 0; i < 4; ++i) in[i] = (mask >> corners[i]) & 1;
    for (auto [a, b] : face_segments(corners, in, cube_edge)) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::vector<std::vector<int>> loops;
  std::map<int, bool> used;
  for (const auto& [start, _] : adj) {
    if (used[start]) continue;
    std::vector<int> loop{start};
    used[start] = true;
    int prev = -1, cur = start;
    while (true) {
      const auto& nb = adj[cur];
      int next = nb[0] != prev ? nb[0] : nb[1];
      if (nb.size() == 2 && nb[0] == nb[1]) next = nb[0];
      if (next == start) break;
      loop.push_back(next);
      used[next] = true;
      prev = cur;
      cur = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

double sanitize(double v, double big) { return std::isfinite(v) ? v : big; }

}  // namespace

const std::vector<std::vector<std::vector<int>>>& cube_case_table() {
  static const std::vector<std::vector<std::vector<int>>> table = [] {
    std::vector<std::vector<std::vector<int>>> t(256);
    for (int m = 0; m < 256; ++m) t[static_cast<std::size_t>(m)] = cube_loops(m);
    return t;
  }();
  return table;
}

LevelSet extract_levelset(const DenseGrid& grid, double iso) {
  const int d = grid.dim();
  if (d < 1 || d > 3) {
    throw ConfigError("level-set extraction supports 1 to 3 dimensions; export the raw "
                      "grid instead");
  }
  const auto& raw = grid.values();
  double big = 1.0;
  for (double v : raw) {
    if (std::isfinite(v)) big = std::max(big, 2.0 * std::abs(v));
  }
  big = std::max(big, 2.0 * std::abs(iso) + 1.0);
  auto value = [&](std::size_t i) { return sanitize(raw[i], big); };

  LevelSet ls;
  ls.dim = d;
  ls.iso = iso;
  std::unordered_map<std::size_t, std::unordered_map<std::size_t, int>> cache;

  auto vertex_on = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    auto& slot = cache[a];
    auto it = slot.find(b);
    if (it != slot.end()) return it->second;
    const double va = value(a), vb = value(b);
    const double t = (iso - va) / (vb - va);
    const Vec pa = grid.point(a), pb = grid.point(b);
    const int idx = static_cast<int>(ls.vertices.size());
    ls.vertices.push_back(pa + t * (pb - pa));
    ls.crossings.push_back({a, b, t});
    slot.emplace(b, idx);
    return idx;
  };

  const auto& nodes = grid.nodes();
  if (d == 1) {
    for (int i = 0; i + 1 < nodes[0]; ++i) {
      const auto a = static_cast<std::size_t>(i), b = a + 1;
      if ((value(a) < iso) != (value(b) < iso)) vertex_on(a, b);
    }
    return ls;
  }

  if (d == 2) {
    const std::size_t s0 = grid.stride(0), s1 = grid.stride(1);
    for (int i = 0; i + 1 < nodes[0]; ++i) {
      for (int j = 0; j + 1 < nodes[1]; ++j) {
        const std::size_t base = static_cast<std::size_t>(i) * s0 +
                                 static_cast<std::size_t>(j) * s1;
        // Cyclic order (0,0) (1,0) (1,1) (0,1) in (axis0, axis1) offsets.
        const std::array<std::size_t, 4> node{base, base + s0, base + s0 + s1, base + s1};
        std::array<bool, 4> in{};
        int count = 0;
        for (int c = 0; c < 4; ++c) count += (in[c] = value(node[c]) < iso);
        if (count == 0 || count == 4) continue;
        const std::array<int, 4> corners{0, 1, 2, 3};
        auto edge = [](int a, int b) { return a * 4 + b; };
        for (auto [ea, eb] : face_segments(corners, in, edge)) {
          const int va = vertex_on(node[ea / 4], node[ea % 4]);
          const int vb = vertex_on(node[eb / 4], node[eb % 4]);
          ls.segments.push_back({va, vb});
        }
      }
    }
    return ls;
  }

  const auto& table = cube_case_table();
  const std::size_t s[3] = {grid.stride(0), grid.stride(1), grid.stride(2)};
  for (int i = 0; i + 1 < nodes[0]; ++i) {
    for (int j = 0; j + 1 < nodes[1]; ++j) {
      for (int k = 0; k + 1 < nodes[2]; ++k) {
        const std::size_t base = static_cast<std::size_t>(i) * s[0] +
                                 static_cast<std::size_t>(j) * s[1] +
                                 static_cast<std::size_t>(k) * s[2];
        std::array<std::size_t, 8> node{};
        int mask = 0;
        for (int c = 0; c < 8; ++c) {
          node[c] = base + (c & 1) * s[0] + ((c >> 1) & 1) * s[1] + ((c >> 2) & 1) * s[2];
          if (value(node[c]) < iso) mask |= 1 << c;
        }
        if (mask == 0 || mask == 255) continue;
        for (const auto& loop : table[static_cast<std::size_t>(mask)]) {
          std::vector<int> ids;
          ids.reserve(loop.size());
          for (int e : loop) {
            const auto [ca, cb] = cube_edge_corners(e);
            ids.push_back(vertex_on(node[ca], node[cb]));
          }
          for (std::size_t q = 1; q + 1 < ids.size(); ++q) {
            ls.triangles.push_back({ids[0], ids[q], ids[q + 1]});
          }
        }
      }
    }
  }
  return ls;
}

}  // namespace reachsweep
