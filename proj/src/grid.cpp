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

#include "reachsweep/grid.hpp"

#include <cmath>
#include <sstream>

#include "reachsweep/errors.hpp"

namespace reachsweep {

DenseGrid::DenseGrid(Vec lo, Vec hi, std::vector<int> nodes, int min_nodes)
    : lo_(std::move(lo)), hi_(std::move(hi)), nodes_(std::move(nodes)) {
  const auto d = nodes_.size();
  if (d == 0 || lo_.size() != static_cast<Eigen::Index>(d) ||
      hi_.size() != static_cast<Eigen::Index>(d)) {
    throw ConfigError("grid bounds and node counts must have the same nonzero length");
  }
  strides_.assign(d, 1);
  std::size_t total = 1;
  for (std::size_t i = d; i-- > 0;) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (!(lo_[ii] < hi_[ii]) || !std::isfinite(lo_[ii]) || !std::isfinite(hi_[ii])) {
      std::ostringstream os;
      os << "grid axis " << i << " has an empty or unbounded range [" << lo_[ii] << ", "
         << hi_[ii] << "]";
      throw ConfigError(os.str());
    }
    if (nodes_[i] < min_nodes) {
      std::ostringstream os;
      os << "grid axis " << i << " needs at least " << min_nodes << " nodes, got "
         << nodes_[i];
      throw ConfigError(os.str());
    }
    strides_[i] = total;
    total *= static_cast<std::size_t>(nodes_[i]);
  }
  values_.assign(total, 0.0);
}

double DenseGrid::spacing(int axis) const {
  return (hi_[axis] - lo_[axis]) / (nodes_[static_cast<std::size_t>(axis)] - 1);
}

std::size_t DenseGrid::flat(const std::vector<int>& index) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out += static_cast<std::size_t>(index[i]) * strides_[i];
  }
  return out;
}

std::vector<int> DenseGrid::unflatten(std::size_t flat) const {
  std::vector<int> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return out;
}

double DenseGrid::coordinate(int axis, int i) const {
  const int last = nodes_[static_cast<std::size_t>(axis)] - 1;
  if (i == last) return hi_[axis];
  return lo_[axis] + (hi_[axis] - lo_[axis]) * static_cast<double>(i) / last;
}

Vec DenseGrid::point(std::size_t flat) const {
  const std::vector<int> idx = unflatten(flat);
  Vec p(dim());
  for (int a = 0; a < dim(); ++a) p[a] = coordinate(a, idx[static_cast<std::size_t>(a)]);
  return p;
}

bool DenseGrid::same_layout(const DenseGrid& other) const {
  return nodes_ == other.nodes_ && lo_ == other.lo_ && hi_ == other.hi_;
}

}  // namespace reachsweep
