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

// Fixed-step Bogacki-Shampine third-order integration of the coupled plant
// with the controller sampled at step boundaries (zero-order hold).

#ifndef CABLELIFT_INTEGRATOR_HPP_
#define CABLELIFT_INTEGRATOR_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "cablelift/controller.hpp"
#include "cablelift/disturbances.hpp"
#include "cablelift/dynamics.hpp"

namespace cablelift {

struct IntegratorConfig {
  double dt = 1e-3;             // s
  double duration = 30.0;       // s
  double log_interval = 0.01;   // s, multiple of dt
  bool renormalize = true;
};

// Throws ConfigError. Requires 0 < dt <= 0.01, duration > 0 and log_interval
// an integer multiple of dt.
void validate(const IntegratorConfig& config);

using StateVector = Eigen::VectorXd;
using DerivativeFunction = std::function<StateVector(double, const StateVector&)>;

// k1 = f(t, y)
// k2 = f(t + dt/2, y + dt/2 k1)
// k3 = f(t + 3dt/4, y + 3dt/4 k2)
// y+ = y + dt (2 k1 + 3 k2 + 4 k3) / 9
// Throws DivergenceError (with the stage time) on a non-finite stage.
StateVector rk3_step(const DerivativeFunction& f, const StateVector& y, double t,
                     double dt);

struct SimulationInputs {
  SystemParams params;
  ControllerGains gains;
  NetworkLayout network;
  DisturbanceProfile disturbances;
  std::function<Setpoint(double)> setpoint;
  IntegratorConfig integrator;
  ControlMode mode = ControlMode::kAdaptive;
  SystemState initial;
};

// Everything known at the start of a step, before the plant advances.
// `controller` holds the estimates used to compute `control`.
struct StepRecord {
  double time;
  const SystemState& state;
  const ControllerState& controller;
  const ControlOutput& control;
  const ControlDiagnostics& diagnostics;
  const DisturbanceEvaluation& disturbance;
};

struct SimulationSummary {
  std::size_t steps = 0;
  bool diverged = false;
  double divergence_time = std::numeric_limits<double>::quiet_NaN();
  std::string divergence_reason;
  double max_rotation_residual = 0.0;    // |R^T R - I| after renormalization
  double max_direction_residual = 0.0;   // ||q| - 1| after renormalization
  double max_step_drift = 0.0;           // manifold residual before renormalization
  std::size_t compression_steps = 0;
  Vec3 mass_cap_slack = Vec3::Zero();    // largest single-step overshoot past max
  Vec3 inertia_cap_slack = Vec3::Zero();
};

using StepObserver = std::function<void(const StepRecord&)>;

// Runs the closed loop for round(duration / dt) steps and calls `on_log` at
// every log_interval (including t = 0). Deterministic. A divergence stops the
// loop and is reported in the summary rather than thrown.
SimulationSummary simulate(const SimulationInputs& inputs, const StepObserver& on_log);

}  // namespace cablelift

#endif  // CABLELIFT_INTEGRATOR_HPP_
