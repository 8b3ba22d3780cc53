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

#include "cablelift/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cablelift/errors.hpp"
#include "cablelift/geometry.hpp"

namespace cablelift {
namespace {

// Positions or velocities beyond these are treated as a blown-up run.
constexpr double kPositionLimit = 1e4;   // m
constexpr double kRateLimit = 1e6;       // m/s, rad/s

long long step_count(double duration, double dt) {
  return std::llround(duration / dt);
}

long long log_stride(const IntegratorConfig& config) {
  return std::max(1LL, std::llround(config.log_interval / config.dt));
}

double manifold_drift(const SystemState& s) {
  double drift = orthogonality_residual(s.attitude);
  for (const auto& c : s.cables) {
    drift = std::max(drift, std::abs(c.direction.norm() - 1.0));
  }
  for (const auto& q : s.quadrotors) {
    drift = std::max(drift, orthogonality_residual(q.attitude));
  }
  return drift;
}

void renormalize(SystemState& s) {
  s.attitude = renormalize_rotation(s.attitude);
  for (auto& c : s.cables) {
    c.direction = renormalize_direction(c.direction);
    c.angular_velocity = project_perpendicular(c.direction, c.angular_velocity);
  }
  for (auto& q : s.quadrotors) q.attitude = renormalize_rotation(q.attitude);
}

void check_bounded(const SystemState& s, double t) {
  if (!s.position.allFinite() || s.position.norm() > kPositionLimit) {
    throw DivergenceError("payload position left the bounded region", t);
  }
  if (s.velocity.norm() > kRateLimit || s.angular_velocity.norm() > kRateLimit) {
    throw DivergenceError("payload rates left the bounded region", t);
  }
  for (const auto& c : s.cables) {
    if (!c.angular_velocity.allFinite() || c.angular_velocity.norm() > kRateLimit) {
      throw DivergenceError("cable angular velocity left the bounded region", t);
    }
  }
  for (const auto& q : s.quadrotors) {
    if (!q.angular_velocity.allFinite() || q.angular_velocity.norm() > kRateLimit) {
      throw DivergenceError("quadrotor angular velocity left the bounded region", t);
    }
  }
}

// Size of the step that carried an estimate from at or below `cap` to above it.
double cap_overshoot(double before, double after, double cap) {
  if (before <= cap && after > cap) return after - cap;
  return 0.0;
}

}  // namespace

void validate(const IntegratorConfig& config) {
  if (!(config.dt > 0.0) || !(config.dt <= 0.01)) {
    throw ConfigError("integrator.dt_s must lie in (0, 0.01]");
  }
  if (!(config.duration >= 0.0) || !std::isfinite(config.duration)) {
    throw ConfigError("integrator.duration_s must be non-negative and finite");
  }
  if (!(config.log_interval >= config.dt) || !std::isfinite(config.log_interval)) {
    throw ConfigError("integrator.log_interval_s must be at least dt_s");
  }
  const double ratio = config.log_interval / config.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio) {
    throw ConfigError("integrator.log_interval_s must be a multiple of dt_s");
  }
}

StateVector rk3_step(const DerivativeFunction& f, const StateVector& y, double t,
                     double dt) {
  const StateVector k1 = f(t, y);
  if (!k1.allFinite()) throw DivergenceError("non-finite RK stage 1", t);
  const StateVector k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  if (!k2.allFinite()) throw DivergenceError("non-finite RK stage 2", t + 0.5 * dt);
  const StateVector k3 = f(t + 0.75 * dt, y + 0.75 * dt * k2);
  if (!k3.allFinite()) throw DivergenceError("non-finite RK stage 3", t + 0.75 * dt);
  return y + dt * (2.0 * k1 + 3.0 * k2 + 4.0 * k3) / 9.0;
}

SimulationSummary simulate(const SimulationInputs& in, const StepObserver& on_log) {
  const IntegratorConfig& config = in.integrator;
  const std::size_t n = in.params.count();
  const CableAllocator allocator(in.params);
  const double dt = config.dt;
  const long long steps = step_count(config.duration, dt);
  const long long stride = log_stride(config);

  SimulationSummary summary;
  SystemState state = in.initial;
  ControllerState cs = ControllerState::initial(in.params, in.network);

  auto derivative = [&](const ControlOutput& ctrl) {
    return [&in, &ctrl, n](double ts, const StateVector& ys) {
      const SystemState s = unpack(ys, n);
      const DisturbanceEvaluation d = eval(in.disturbances, ts, s);
      return pack(system_derivative(s, ctrl, d.sample, d.phi_x, d.phi_R, in.params));
    };
  };

  long long k = 0;
  try {
    for (;; ++k) {
      const double t = static_cast<double>(k) * dt;
      const DisturbanceEvaluation dist = eval(in.disturbances, t, state);
      const Setpoint sp = in.setpoint(t);
      const ControllerUpdate upd =
          step_controller(state, sp, cs, in.gains, in.params, allocator, dt, in.mode);
      if (!upd.output.force.allFinite() || !upd.output.moment.allFinite()) {
        throw DivergenceError("non-finite control output", t);
      }
      if (k % stride == 0 && on_log) {
        on_log(StepRecord{t, state, cs, upd.output, upd.diagnostics, dist});
      }
      if (k >= steps) break;
      if (upd.diagnostics.compressed_cables > 0) ++summary.compression_steps;

      SystemState next = unpack(rk3_step(derivative(upd.output), pack(state), t, dt), n);
      summary.max_step_drift = std::max(summary.max_step_drift, manifold_drift(next));
      if (config.renormalize) {
        try {
          renormalize(next);
        } catch (const DivergenceError& e) {
          throw DivergenceError(e.what(), t + dt);
        }
      }
      check_bounded(next, t + dt);

      summary.max_rotation_residual =
          std::max(summary.max_rotation_residual, orthogonality_residual(next.attitude));
      for (const auto& q : next.quadrotors) {
        summary.max_rotation_residual =
            std::max(summary.max_rotation_residual, orthogonality_residual(q.attitude));
      }
      for (const auto& c : next.cables) {
        summary.max_direction_residual = std::max(
            summary.max_direction_residual, std::abs(c.direction.norm() - 1.0));
      }
      for (int j = 0; j < 3; ++j) {
        summary.mass_cap_slack[j] = std::max(
            summary.mass_cap_slack[j],
            cap_overshoot(cs.mass_estimate[j], upd.next.mass_estimate[j],
                          in.params.max_mass));
        summary.inertia_cap_slack[j] = std::max(
            summary.inertia_cap_slack[j],
            cap_overshoot(cs.inertia_estimate[j], upd.next.inertia_estimate[j],
                          in.params.max_inertia(j, j)));
      }

      state = std::move(next);
      cs = upd.next;
    }
  } catch (const DivergenceError& e) {
    summary.diverged = true;
    summary.divergence_time = e.time();
    summary.divergence_reason = e.what();
  } catch (const AlgebraError& e) {
    summary.diverged = true;
    summary.divergence_time = static_cast<double>(k) * dt;
    summary.divergence_reason = e.what();
  }
  summary.steps = static_cast<std::size_t>(std::min(k, steps));
  return summary;
}

}  // namespace cablelift
