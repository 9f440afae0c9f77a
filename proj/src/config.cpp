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

#include "reachsweep/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "reachsweep/errors.hpp"

namespace reachsweep {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& path,
               const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      std::ostringstream os;
      os << (path.empty() ? "" : path + ".") << key << ": unknown key (allowed:";
      for (const auto& a : allowed) os << " " << a;
      os << ")";
      throw ConfigError(os.str());
    }
  }
}

const json& required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": required field missing");
  return j.at(key);
}

double real(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field + ": must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
  return j.get<int>();
}

Vec vec(const json& j, const std::string& field) {
  try {
    return vector_from_json(j, field);
  } catch (const ConfigError& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

std::vector<int> ints(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field + ": expected a list of integers");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(integer(e, field));
  return out;
}

// Line and column of a byte offset, both 1-based.
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void parse_solver(const json& j, SolverConfig& s) {
  only_keys(j, "solver",
            {"eta", "rho", "mu", "epsilon", "max_iters", "integrator", "line_search"});
  if (j.contains("eta")) s.eta = real(j.at("eta"), "solver.eta");
  if (j.contains("rho")) s.rho = real(j.at("rho"), "solver.rho");
  if (j.contains("mu")) s.mu = real(j.at("mu"), "solver.mu");
  if (j.contains("epsilon")) s.epsilon = real(j.at("epsilon"), "solver.epsilon");
  if (j.contains("max_iters")) s.max_iters = integer(j.at("max_iters"), "solver.max_iters");
  if (j.contains("integrator")) {
    const json& it = j.at("integrator");
    if (it == "rk4") {
      s.integrator = Integrator::kRk4;
    } else if (it == "euler") {
      s.integrator = Integrator::kEuler;
    } else {
      throw ConfigError("solver.integrator: expected \"rk4\" or \"euler\"");
    }
  }
  if (j.contains("line_search")) {
    const json& ls = j.at("line_search");
    only_keys(ls, "solver.line_search", {"alpha0", "shrink", "c_armijo", "max_backtracks"});
    auto& l = s.line_search;
    if (ls.contains("alpha0")) l.alpha0 = real(ls.at("alpha0"), "solver.line_search.alpha0");
    if (ls.contains("shrink")) l.shrink = real(ls.at("shrink"), "solver.line_search.shrink");
    if (ls.contains("c_armijo")) {
      l.c_armijo = real(ls.at("c_armijo"), "solver.line_search.c_armijo");
    }
    if (ls.contains("max_backtracks")) {
      l.max_backtracks = integer(ls.at("max_backtracks"), "solver.line_search.max_backtracks");
    }
  }
  s.validate();
}

SeedSpec parse_seeds(const json& j, int n) {
  only_keys(j, "seeds", {"lo", "hi", "counts", "jitter", "trust_radius"});
  SeedSpec s;
  s.lo = vec(required(j, "seeds", "lo"), "seeds.lo");
  s.hi = vec(required(j, "seeds", "hi"), "seeds.hi");
  s.counts = ints(required(j, "seeds", "counts"), "seeds.counts");
  if (s.lo.size() != n || s.hi.size() != n || static_cast<int>(s.counts.size()) != n) {
    throw ConfigError("seeds: lo, hi and counts need one entry per state dimension (" +
                      std::to_string(n) + ")");
  }
  for (int i = 0; i < n; ++i) {
    if (!(s.lo[i] < s.hi[i])) throw ConfigError("seeds: empty domain along axis " + std::to_string(i));
    if (s.counts[static_cast<std::size_t>(i)] < 2) {
      throw ConfigError("seeds.counts: need at least 2 per axis");
    }
  }
  if (j.contains("jitter") && !j.at("jitter").is_null()) {
    const json& jt = j.at("jitter");
    if (!jt.is_number_unsigned()) {
      throw ConfigError("seeds.jitter: expected a non-negative integer RNG seed or null");
    }
    s.jitter = jt.get<std::uint64_t>();
  }
  if (j.contains("trust_radius")) {
    s.trust_radius = real(j.at("trust_radius"), "seeds.trust_radius");
    if (!(s.trust_radius > 0.0)) throw ConfigError("seeds.trust_radius: must be > 0");
  }
  return s;
}

PdeSpec parse_oracle(const json& j, int n, const std::optional<SeedSpec>& seeds) {
  only_keys(j, "oracle", {"lo", "hi", "nodes", "dt"});
  PdeSpec p;
  if (j.contains("lo")) {
    p.lo = vec(j.at("lo"), "oracle.lo");
  } else if (seeds) {
    p.lo = seeds->lo;
  } else {
    throw ConfigError("oracle.lo: required field missing");
  }
  if (j.contains("hi")) {
    p.hi = vec(j.at("hi"), "oracle.hi");
  } else if (seeds) {
    p.hi = seeds->hi;
  } else {
    throw ConfigError("oracle.hi: required field missing");
  }
  if (j.contains("nodes")) {
    p.nodes = ints(j.at("nodes"), "oracle.nodes");
  } else if (seeds) {
    p.nodes = seeds->counts;
  } else {
    throw ConfigError("oracle.nodes: required field missing");
  }
  if (p.lo.size() != n || p.hi.size() != n || static_cast<int>(p.nodes.size()) != n) {
    throw ConfigError("oracle: lo, hi and nodes need one entry per state dimension");
  }
  for (int i = 0; i < n; ++i) {
    if (!(p.lo[i] < p.hi[i])) throw ConfigError("oracle: empty domain along axis " + std::to_string(i));
    if (p.nodes[static_cast<std::size_t>(i)] < 3) {
      throw ConfigError("oracle.nodes: need at least 3 per axis");
    }
  }
  if (j.contains("dt")) {
    p.dt = real(j.at("dt"), "oracle.dt");
    if (!(p.dt > 0.0)) throw ConfigError("oracle.dt: must be > 0");
  }
  return p;
}

}  // namespace

void RunConfig::require_problem() const {
  if (model_name.empty()) throw ConfigError("model: required section missing");
  if (target_json.is_null()) throw ConfigError("target: required section missing");
}

SystemModel RunConfig::model() const { return make_benchmark(model_name, model_params); }

TerminalCost RunConfig::target() const {
  return TerminalCost::FromJson(target_json, model().n());
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << "config syntax error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(os.str());
  }
  only_keys(doc, "", {"model", "target", "horizon", "solver", "seeds", "oracle", "output",
                      "gradcheck"});
  RunConfig cfg;
  cfg.source = doc;

  int n = 0;
  if (doc.contains("model")) {
    const json& m = doc.at("model");
    only_keys(m, "model", {"name", "params"});
    const json& name = required(m, "model", "name");
    if (!name.is_string()) throw ConfigError("model.name: expected a string");
    cfg.model_name = name.get<std::string>();
    if (m.contains("params")) cfg.model_params = m.at("params");
    try {
      n = cfg.model().n();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  }
  if (doc.contains("target")) {
    if (n == 0) throw ConfigError("target: requires a model section");
    cfg.target_json = doc.at("target");
    try {
      cfg.target();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("target: ") + e.what());
    }
  }

  if (doc.contains("horizon")) {
    const json& h = doc.at("horizon");
    only_keys(h, "horizon", {"T", "K"});
    if (h.contains("T")) cfg.T = real(h.at("T"), "horizon.T");
    if (h.contains("K")) cfg.K = integer(h.at("K"), "horizon.K");
    if (!(cfg.T >= 0.0)) throw ConfigError("horizon.T: must be >= 0");
    if (cfg.K < 2) throw ConfigError("horizon.K: must be >= 2");
  }

  if (doc.contains("solver")) {
    try {
      parse_solver(doc.at("solver"), cfg.solver);
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      throw ConfigError(what.rfind("solver", 0) == 0 ? what : "solver: " + what);
    }
  }
  if ((doc.contains("seeds") || doc.contains("oracle")) && n == 0) {
    throw ConfigError("seeds/oracle: require a model section");
  }
  if (doc.contains("seeds")) cfg.seeds = parse_seeds(doc.at("seeds"), n);
  if (doc.contains("oracle")) cfg.oracle = parse_oracle(doc.at("oracle"), n, cfg.seeds);
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ConfigError("output: expected a string");
    cfg.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("gradcheck")) {
    const json& g = doc.at("gradcheck");
    only_keys(g, "gradcheck", {"corrupt", "samples", "seed"});
    if (g.contains("corrupt")) {
      if (!g.at("corrupt").is_string()) throw ConfigError("gradcheck.corrupt: expected a string");
      cfg.gradcheck.corrupt = g.at("corrupt").get<std::string>();
      bool known = false;
      for (const auto& b : benchmark_names()) known = known || b == cfg.gradcheck.corrupt;
      if (!known) throw ConfigError("gradcheck.corrupt: unknown benchmark '" + cfg.gradcheck.corrupt + "'");
    }
    if (g.contains("samples")) {
      cfg.gradcheck.samples = integer(g.at("samples"), "gradcheck.samples");
      if (cfg.gradcheck.samples < 1) throw ConfigError("gradcheck.samples: must be >= 1");
    }
    if (g.contains("seed")) {
      if (!g.at("seed").is_number_unsigned()) {
        throw ConfigError("gradcheck.seed: expected a non-negative integer");
      }
      cfg.gradcheck.rng_seed = g.at("seed").get<std::uint64_t>();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace reachsweep
