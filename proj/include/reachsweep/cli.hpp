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

#include <iostream>
#include <string>
#include <vector>

#include "reachsweep/grid.hpp"

namespace reachsweep {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

struct CliOptions {
  std::string config;
  std::string out;   // overrides the config's "output"; "." when both are empty
  int threads = 0;   // 0: REACHSWEEP_THREADS, then hardware concurrency
  bool quiet = false;
  std::ostream* stdout_stream = &std::cout;
  std::ostream* stderr_stream = &std::cerr;
};

// Resolves the worker count from the flag, the environment and the machine.
// Throws ConfigError on a malformed REACHSWEEP_THREADS.
int resolve_threads(int flag);

int cmd_sweep(const CliOptions& opts);
int cmd_oracle(const CliOptions& opts);
int cmd_compare(const std::string& a, const std::string& b, const CliOptions& opts);
int cmd_gradcheck(const CliOptions& opts);
int cmd_scaling(const std::vector<int>& dims, const CliOptions& opts);

struct SignAgreement {
  std::size_t agree = 0;
  std::size_t considered = 0;
  double fraction() const {
    return considered == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(considered);
  }
};

// Fraction of nodes where {a <= 0} and {b <= 0} agree. Only nodes with
// contributors_a > 0 count, and nodes whose 3^n neighborhood in `b`
// straddles the zero level are skipped. `b` is the reference.
SignAgreement sign_agreement(const DenseGrid& a, const std::vector<int>& contributors_a,
                             const DenseGrid& b);

// Parses argv and dispatches; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace reachsweep
