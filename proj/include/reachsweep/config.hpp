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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reachsweep/ddp_solver.hpp"
#include "reachsweep/dynamics.hpp"
#include "reachsweep/gradcheck.hpp"
#include "reachsweep/oracle.hpp"
#include "reachsweep/value_model.hpp"

namespace reachsweep {

struct SeedSpec {
  Vec lo;
  Vec hi;
  std::vector<int> counts;
  std::optional<std::uint64_t> jitter;
  double trust_radius = 0.0;  // 0 selects the default
};

// A fully validated run description. Every field below has been checked by
// the time parse_config() returns.
struct RunConfig {
  std::string model_name;
  nlohmann::json model_params = nlohmann::json::object();
  nlohmann::json target_json;
  double T = 1.0;
  int K = 101;
  SolverConfig solver;
  std::optional<SeedSpec> seeds;
  std::optional<PdeSpec> oracle;
  std::string output;
  GradcheckSpec gradcheck;

  // Original document, echoed into reports.
  nlohmann::json source;

  bool has_problem() const { return !model_name.empty() && !target_json.is_null(); }
  // Throws ConfigError when the model or target section is missing.
  void require_problem() const;

  SystemModel model() const;
  TerminalCost target() const;
  Horizon horizon() const { return Horizon(T, K); }
};

// Throws ConfigError with line/column for syntax errors and a dotted field
// path for semantic ones. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace reachsweep
