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

#include "reachsweep/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "reachsweep/errors.hpp"

namespace reachsweep {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_values_csv(const std::string& path, const DenseGrid& grid,
                      const std::vector<int>& contributors) {
  if (contributors.size() != grid.size()) {
    throw std::invalid_argument("contributors must have one entry per node");
  }
  std::ofstream out = open_out(path);
  out << kValuesHeader << "\n";
  for (int a = 0; a < grid.dim(); ++a) out << "x" << a << ",";
  out << "value,contributors\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec p = grid.point(i);
    for (int a = 0; a < grid.dim(); ++a) out << format_double(p[a]) << ",";
    out << format_double(grid[i]) << "," << contributors[i] << "\n";
  }
}

ValuesFile read_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kValuesHeader) {
    throw ConfigError(path + ": missing '" + std::string(kValuesHeader) + "' header");
  }
  if (!std::getline(in, line)) throw ConfigError(path + ": missing column line");
  const auto columns = split(line);
  if (columns.size() < 3 || columns[columns.size() - 2] != "value" ||
      columns.back() != "contributors") {
    throw ConfigError(path + ": unexpected column line '" + line + "'");
  }
  const int d = static_cast<int>(columns.size()) - 2;
  std::vector<std::vector<double>> coords;
  std::vector<double> values;
  std::vector<int> contributors;
  std::vector<std::set<double>> axis(static_cast<std::size_t>(d));
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns.size()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(columns.size()) + " fields");
    }
    std::vector<double> c(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      c[static_cast<std::size_t>(a)] =
          parse_double(cells[static_cast<std::size_t>(a)], path, lineno);
      axis[static_cast<std::size_t>(a)].insert(c[static_cast<std::size_t>(a)]);
    }
    coords.push_back(std::move(c));
    values.push_back(parse_double(cells[static_cast<std::size_t>(d)], path, lineno));
    contributors.push_back(static_cast<int>(
        parse_double(cells[static_cast<std::size_t>(d) + 1], path, lineno)));
  }
  Vec lo(d), hi(d);
  std::vector<int> nodes(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const auto& s = axis[static_cast<std::size_t>(a)];
    if (s.size() < 2) throw ConfigError(path + ": axis " + std::to_string(a) + " has < 2 nodes");
    lo[a] = *s.begin();
    hi[a] = *s.rbegin();
    nodes[static_cast<std::size_t>(a)] = static_cast<int>(s.size());
  }
  ValuesFile vf{DenseGrid(lo, hi, nodes, 2), std::move(contributors)};
  if (values.size() != vf.grid.size()) {
    throw ConfigError(path + ": " + std::to_string(values.size()) +
                      " rows do not form a full grid");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Vec p = vf.grid.point(i);
    for (int a = 0; a < d; ++a) {
      if (std::abs(p[a] - coords[i][static_cast<std::size_t>(a)]) >
          1e-9 * (1.0 + std::abs(p[a]))) {
        throw ConfigError(path + ": row " + std::to_string(i + 1) +
                          " is not in row-major grid order");
      }
    }
    vf.grid[i] = values[i];
  }
  return vf;
}

void write_levelset_csv(const std::string& path, const LevelSet& ls) {
  std::ofstream out = open_out(path);
  if (ls.dim == 1) {
    out << "x0\n";
    for (const Vec& v : ls.vertices) out << format_double(v[0]) << "\n";
    return;
  }
  out << "x0_a,x1_a,x0_b,x1_b\n";
  for (const auto& s : ls.segments) {
    const Vec& a = ls.vertices[static_cast<std::size_t>(s[0])];
    const Vec& b = ls.vertices[static_cast<std::size_t>(s[1])];
    out << format_double(a[0]) << "," << format_double(a[1]) << "," << format_double(b[0])
        << "," << format_double(b[1]) << "\n";
  }
}

void write_levelset_obj(const std::string& path, const LevelSet& ls) {
  std::ofstream out = open_out(path);
  for (const Vec& v : ls.vertices) {
    out << "v " << format_double(v[0]) << " " << format_double(v[1]) << " "
        << format_double(v[2]) << "\n";
  }
  for (const auto& t : ls.triangles) {
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
}

std::string write_levelset(const std::string& stem, const LevelSet& ls) {
  if (ls.dim == 1 || ls.dim == 2) {
    write_levelset_csv(stem + ".csv", ls);
    return stem + ".csv";
  }
  if (ls.dim == 3) {
    write_levelset_obj(stem + ".obj", ls);
    return stem + ".obj";
  }
  return "";
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace reachsweep
