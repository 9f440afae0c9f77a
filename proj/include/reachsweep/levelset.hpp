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

#include <array>
#include <cstddef>
#include <vector>

#include "reachsweep/grid.hpp"

namespace reachsweep {

// Where an iso-vertex sits: node_a + t (node_b - node_a), flat grid indices.
struct EdgeCrossing {
  std::size_t node_a = 0;
  std::size_t node_b = 0;
  double t = 0.0;
};

struct LevelSet {
  int dim = 0;
  double iso = 0.0;
  std::vector<Vec> vertices;
  std::vector<EdgeCrossing> crossings;  // one per vertex
  std::vector<std::array<int, 2>> segments;   // dim == 2
  std::vector<std::array<int, 3>> triangles;  // dim == 3

  bool empty() const { return vertices.empty(); }
};

// Marching squares (2D) or marching cubes (3D) with linear interpolation
// along edges; in 1D the crossing points alone. A node is inside when its
// value is below `iso`. Ambiguous faces always separate inside corners.
// Infinite or NaN samples are treated as a large positive value.
// Dimension > 3 throws ConfigError.
LevelSet extract_levelset(const DenseGrid& grid, double iso = 0.0);

// Cube-corner bitmask -> closed loops of cube edge indices. Corner c has
// offsets (c & 1, (c >> 1) & 1, (c >> 2) & 1) along axes (0, 1, 2); edges are
// numbered 0..3 along axis 0, 4..7 along axis 1, 8..11 along axis 2.
const std::vector<std::vector<std::vector<int>>>& cube_case_table();

}  // namespace reachsweep
