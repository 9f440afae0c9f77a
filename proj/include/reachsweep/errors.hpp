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

#include <stdexcept>
#include <string>

namespace reachsweep {

// Bad user input: unknown names, out-of-range parameters, malformed files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A control or state outside the set it must belong to.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The model lacks what an operation needs (e.g. a closed-form extremizer).
class UnsupportedModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular or ill-conditioned linear algebra.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// Non-finite value model during the backward pass.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}

  int step() const { return step_; }

 private:
  int step_;
};

// Forward rollout left the declared state domain (or went non-finite).
class RolloutError : public std::runtime_error {
 public:
  RolloutError(const std::string& what, int step, double time)
      : std::runtime_error(what), step_(step), time_(time) {}

  int step() const { return step_; }
  double time() const { return time_; }

 private:
  int step_;
  double time_;
};

class ComparisonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reachsweep
