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

// Experiment orchestration: closed-loop runs, Lyapunov bookkeeping with the
// true plant and disturbances, summary metrics, CSV / JSON emission and
// baseline-versus-adaptive comparisons.

#ifndef CABLELIFT_HARNESS_HPP_
#define CABLELIFT_HARNESS_HPP_

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "cablelift/controller.hpp"
#include "cablelift/dynamics.hpp"
#include "cablelift/integrator.hpp"
#include "cablelift/scenario.hpp"

namespace cablelift {

struct LyapunovTerms {
  double translational = 0.0;  // V_x
  double rotational = 0.0;     // V_R
  double cable = 0.0;          // V_q
  double disturbance = 0.0;    // V_Delta
  double total = 0.0;
};

// Uses the true payload mass, inertia and disturbances. The ideal network
// weights are taken as zero.
LyapunovTerms lyapunov_terms(const ControllerState& cs, const ControlDiagnostics& diag,
                             const DisturbanceSample& dist, const SystemParams& params,
                             const ControllerGains& gains);

struct TrajectoryRecord {
  double time = 0.0;
  SystemState state;
  ControllerState controller;
  ControlOutput control;
  ControlDiagnostics diagnostics;
  DisturbanceSample disturbance;
  LyapunovTerms lyapunov;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
};

struct ErrorStats {
  double rms = 0.0;
  double max = 0.0;
};

struct Metrics {
  ErrorStats position;          // |e_x0| (m), whole run
  ErrorStats attitude;          // |e_R0|
  ErrorStats angular_velocity;  // |e_Omega0| (rad/s)
  ErrorStats position_steady;   // same, over [window_start, window_end]
  ErrorStats attitude_steady;
  ErrorStats angular_velocity_steady;
  double window_start = 0.0;
  double window_end = 0.0;
  std::size_t window_samples = 0;
  Vec3 mass_min = Vec3::Zero();
  Vec3 mass_max = Vec3::Zero();
  Vec3 inertia_min = Vec3::Zero();
  Vec3 inertia_max = Vec3::Zero();
  std::size_t compression_steps = 0;
  bool diverged = false;
  double divergence_time = std::numeric_limits<double>::quiet_NaN();
  std::string divergence_reason;
  double max_rotation_residual = 0.0;
  double max_direction_residual = 0.0;
  double max_step_drift = 0.0;
  Vec3 mass_cap_slack = Vec3::Zero();
  Vec3 inertia_cap_slack = Vec3::Zero();
  // Largest rise of the logged total V between consecutive records with
  // t >= lyapunov_check_start.
  double lyapunov_check_start = 5.0;
  double lyapunov_max_increase = 0.0;
  std::size_t records = 0;
};

struct RunResult {
  Scenario scenario;
  Trajectory trajectory;
  Metrics metrics;
};

Metrics compute_metrics(const Trajectory& trajectory, const SimulationSummary& summary,
                        const Scenario& scenario);

// Never throws on divergence: the partial trajectory is kept and flagged.
RunResult run(const Scenario& scenario);

// Column names of the trajectory CSV for n quadrotors.
std::vector<std::string> trajectory_columns(std::size_t n);

// Writes trajectory.csv, schema.json, metrics.json, scenario.json and the
// plot-data CSVs into `dir` (created if missing). Throws OutputError.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

struct Comparison {
  std::string label;
  ComparisonMetric metric = ComparisonMetric::kPosition;
  RunResult baseline;
  RunResult adaptive;
  double baseline_value = 0.0;  // steady-state RMS of the compared error
  double adaptive_value = 0.0;
  double margin = 0.0;          // 1 - adaptive / baseline
  std::string verdict;          // "adaptive", "baseline", "tie" or "both-diverged"
};

// Runs both modes concurrently on otherwise identical copies of `scenario`.
Comparison compare(const Scenario& scenario);

// Writes baseline/ and adaptive/ run outputs plus comparison.json.
void write_comparison(const Comparison& comparison, const std::filesystem::path& dir);

}  // namespace cablelift

#endif  // CABLELIFT_HARNESS_HPP_
