// Copyright 2026 The Cablelift Authors
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

#ifndef CABLELIFT_ERRORS_HPP_
#define CABLELIFT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cablelift {

// Scenario or parameter set violates a schema rule or a load-time invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite state, or a manifold state drifted beyond repair.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Input to a rotation-algebra primitive is not in its domain
// (e.g. vee of a non-skew matrix).
class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cablelift

#endif  // CABLELIFT_ERRORS_HPP_
