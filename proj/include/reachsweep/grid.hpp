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

#include <cstddef>
#include <vector>

#include "reachsweep/dynamics.hpp"

namespace reachsweep {

// Cartesian grid of samples. Values are stored row-major: the first axis
// varies slowest.
class DenseGrid {
 public:
  DenseGrid() = default;
  // Throws ConfigError unless lo < hi and nodes >= min_nodes on every axis.
  DenseGrid(Vec lo, Vec hi, std::vector<int> nodes, int min_nodes = 2);

  int dim() const { return static_cast<int>(nodes_.size()); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  const std::vector<int>& nodes() const { return nodes_; }
  std::size_t size() const { return values_.size(); }
  double spacing(int axis) const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::size_t flat(const std::vector<int>& index) const;
  std::vector<int> unflatten(std::size_t flat) const;
  double coordinate(int axis, int i) const;
  Vec point(std::size_t flat) const;
  // Stride of `axis` in the flat array.
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  // True when both grids share dimension, bounds and node counts exactly.
  bool same_layout(const DenseGrid& other) const;

 private:
  Vec lo_, hi_;
  std::vector<int> nodes_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

}  // namespace reachsweep
