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

// Scenario description: plant, gains, networks, disturbances, setpoint,
// integrator settings and initial condition. Built-in groups A, B and C plus
// JSON scenario files (units are spelled out in field names).

#ifndef CABLELIFT_SCENARIO_HPP_
#define CABLELIFT_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cablelift/controller.hpp"
#include "cablelift/disturbances.hpp"
#include "cablelift/dynamics.hpp"
#include "cablelift/integrator.hpp"

namespace cablelift {

enum class SetpointKind { kHold, kFigureEight };

struct SetpointSpec {
  SetpointKind kind = SetpointKind::kHold;
  Vec3 position = Vec3::Zero();  // hold point, or figure-eight center (m)
  double amplitude = 1.0;        // m
  double period = 20.0;          // s

  // Payload attitude is held at identity in both modes.
  Setpoint at(double t) const;
};

enum class ComparisonMetric { kPosition, kAttitude };

struct InitialCondition {
  Vec3 position = Vec3::Zero();          // payload offset (m)
  Vec3 velocity = Vec3::Zero();          // m/s
  Vec3 rotation_vector = Vec3::Zero();   // payload attitude, axis * angle (rad)
  Vec3 angular_velocity = Vec3::Zero();  // rad/s
  // Seeded uniform perturbation: position in [-s, s] m, attitude in
  // [-0.1 s, 0.1 s] rad per axis.
  double perturbation_scale = 0.0;
};

struct Scenario {
  std::string label = "custom";
  SystemParams params;
  ControllerGains gains;
  NetworkLayout network;
  DisturbanceProfile disturbances;
  SetpointSpec setpoint;
  IntegratorConfig integrator;
  ControlMode mode = ControlMode::kAdaptive;
  InitialCondition initial;
  std::uint64_t seed = 0;
  double steady_state_start = 15.0;  // s; shorter runs use their second half
  ComparisonMetric comparison = ComparisonMetric::kPosition;
  std::vector<std::string> assumptions;
};

// Three quadrotors, 1 kg, diag(0.02, 0.02, 0.04) kg m^2, 1 m cables, attached
// at radius 0.5 m with 120 degree spacing in the payload plane.
std::vector<QuadrotorParams> default_quadrotors();

bool is_builtin_scenario(const std::string& name);
// "groupA", "groupB" or "groupC"; validated. Throws ConfigError otherwise.
Scenario builtin_scenario(const std::string& name);

// Built-in name, or path to a JSON scenario file. Throws ConfigError.
Scenario load_scenario(const std::string& name_or_path);

// JSON text. A document with "base" starts from that built-in and overrides
// fields; without it, "plant", "reference" and every gain are required.
Scenario parse_scenario(const std::string& text);

// Fully resolved scenario as JSON text; parse_scenario accepts it back.
std::string scenario_json(const Scenario& scenario);

// Checks all invariants and fills derived quantities (Lyapunov matrices).
void validate(Scenario& scenario);

// Initial plant state: hover geometry plus configured and seeded offsets.
SystemState initial_state(const Scenario& scenario);

SimulationInputs simulation_inputs(const Scenario& scenario);

std::string to_string(ComparisonMetric metric);

}  // namespace cablelift

#endif  // CABLELIFT_SCENARIO_HPP_
