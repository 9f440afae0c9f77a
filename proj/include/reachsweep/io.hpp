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

#include <string>
#include <vector>

#include "json.hpp"
#include "reachsweep/grid.hpp"
#include "reachsweep/levelset.hpp"

namespace reachsweep {

inline constexpr const char* kValuesHeader = "# reachsweep-values v1";

struct ValuesFile {
  DenseGrid grid;
  std::vector<int> contributors;
};

// Header line, column line "x0,...,x{n-1},value,contributors", then one row
// per node in grid order with 17 significant digits ("inf" for +infinity).
void write_values_csv(const std::string& path, const DenseGrid& grid,
                      const std::vector<int>& contributors);
// Throws ConfigError on malformed files or rows that do not form a grid.
ValuesFile read_values_csv(const std::string& path);

// 1D: one crossing per row; 2D: one segment per row (x0_a,x1_a,x0_b,x1_b).
void write_levelset_csv(const std::string& path, const LevelSet& ls);
// Wavefront OBJ with vertices and triangular faces.
void write_levelset_obj(const std::string& path, const LevelSet& ls);

// Writes `levelset.csv` or `levelset.obj` under `stem` according to the
// dimension and returns the path written, or "" when nothing applies.
std::string write_levelset(const std::string& stem, const LevelSet& ls);

void write_json(const std::string& path, const nlohmann::json& j);

// Decimal text that round-trips a double exactly.
std::string format_double(double v);

}  // namespace reachsweep
