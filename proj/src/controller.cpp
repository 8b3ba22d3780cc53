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

#include "cablelift/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "cablelift/errors.hpp"

namespace cablelift {
namespace {

void require_positive(double v, const std::string& field) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ConfigError(field + " must be a positive finite number");
  }
}

void require_positive(const Vec3& v, const std::string& field) {
  for (int j = 0; j < 3; ++j) {
    require_positive(v[j], field + "[" + std::to_string(j) + "]");
  }
}

bool positive_definite(const Mat2& m) {
  return std::abs(m(0, 1) - m(1, 0)) <= 1e-12 * (1.0 + m.norm()) &&
         m(0, 0) > 0.0 && m.determinant() > 0.0;
}

}  // namespace

std::string to_string(ControlMode mode) {
  return mode == ControlMode::kAdaptive ? "adaptive" : "baseline";
}

ControlMode control_mode_from_string(const std::string& name) {
  if (name == "adaptive") return ControlMode::kAdaptive;
  if (name == "baseline") return ControlMode::kBaseline;
  throw ConfigError("mode must be 'adaptive' or 'baseline', got '" + name + "'");
}

void validate(const NetworkLayout& layout) {
  if (layout.neurons < 1) throw ConfigError("network.neurons must be >= 1");
  if (!std::isfinite(layout.center_min) || !std::isfinite(layout.center_max)) {
    throw ConfigError("network.center_min/center_max must be finite");
  }
  require_positive(layout.width_min, "network.width_min");
  require_positive(layout.width_max, "network.width_max");
}

RbfNetwork make_network(const NetworkLayout& layout) {
  RbfNetwork net;
  const int l = layout.neurons;
  net.centers.reserve(static_cast<std::size_t>(l));
  net.widths.reserve(static_cast<std::size_t>(l));
  for (int k = 0; k < l; ++k) {
    const double f = l == 1 ? 0.5 : static_cast<double>(k) / (l - 1);
    const double c = layout.center_min + f * (layout.center_max - layout.center_min);
    net.centers.emplace_back(c, c);
    net.widths.push_back(layout.width_min + f * (layout.width_max - layout.width_min));
  }
  net.weights = Eigen::VectorXd::Zero(l);
  return net;
}

Eigen::VectorXd rbf_activation(const Vec2& x, const RbfNetwork& net) {
  Eigen::VectorXd h(static_cast<Eigen::Index>(net.size()));
  for (std::size_t k = 0; k < net.size(); ++k) {
    const double b = net.widths[k];
    h[static_cast<Eigen::Index>(k)] =
        std::exp(-(x - net.centers[k]).squaredNorm() / (2.0 * b * b));
  }
  return h;
}

double nn_estimate(const RbfNetwork& net, const Vec2& x) {
  return net.weights.dot(rbf_activation(x, net));
}

Mat2 error_dynamics_matrix(double kp, double kd) {
  Mat2 a;
  a << 0.0, 1.0, -kp, -kd;
  return a;
}

Mat2 solve_lyapunov(const Mat2& a, const Mat2& q) {
  // Companion form a = [[0, 1], [-kp, -kd]] gives a triangular system for
  // P = [[p11, p12], [p12, p22]].
  const double kp = -a(1, 0);
  const double kd = -a(1, 1);
  const double p12 = q(0, 0) / (2.0 * kp);
  const double p22 = (2.0 * p12 + q(1, 1)) / (2.0 * kd);
  const double p11 = kd * p12 + kp * p22 - q(0, 1);
  Mat2 p;
  p << p11, p12, p12, p22;
  return p;
}

Mat2 cable_coupling_matrix(const ControllerGains& g) {
  Mat2 z;
  z << g.c_q * g.k_q, 0.5 * g.c_q * g.k_omega,
       0.5 * g.c_q * g.k_omega, g.k_omega - g.c_q;
  return z;
}

void finalize(ControllerGains& g) {
  require_positive(g.kp, "gains.k_p");
  require_positive(g.kd, "gains.k_d");
  require_positive(g.k_R0, "gains.k_R0");
  require_positive(g.k_Omega0, "gains.k_Omega0");
  require_positive(g.k_q, "gains.k_q");
  require_positive(g.k_omega, "gains.k_omega");
  require_positive(g.k_R, "gains.k_R");
  require_positive(g.k_Omega, "gains.k_Omega");
  require_positive(g.c_q, "gains.c_q");
  require_positive(g.h_x0, "gains.h_x0");
  require_positive(g.h_R0, "gains.h_R0");
  require_positive(g.h_xi, "gains.h_xi");
  require_positive(g.eta_m, "gains.eta_m");
  require_positive(g.eta_J, "gains.eta_J");
  require_positive(g.s_m, "gains.s_m");
  require_positive(g.s_J, "gains.s_J");
  require_positive(g.gamma_x, "gains.gamma_x");
  require_positive(g.gamma_R, "gains.gamma_R");
  require_positive(g.mass_floor, "gains.mass_floor_kg");
  require_positive(g.inertia_floor, "gains.inertia_floor_kgm2");
  require_positive(g.tension_epsilon, "gains.tension_epsilon_N");
  require_positive(g.thrust_epsilon, "gains.thrust_epsilon_N");
  require_positive(g.derivative_time_constant, "gains.derivative_time_constant_s");
  for (int j = 0; j < 3; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (!positive_definite(g.Q[idx])) {
      throw ConfigError("gains.Q[" + std::to_string(j) +
                        "] must be symmetric positive-definite");
    }
    g.P[idx] = solve_lyapunov(error_dynamics_matrix(g.kp[j], g.kd[j]), g.Q[idx]);
    if (!positive_definite(g.P[idx])) {
      throw ConfigError("gains: Lyapunov matrix P[" + std::to_string(j) +
                        "] is not positive-definite");
    }
  }
  if (!positive_definite(cable_coupling_matrix(g))) {
    throw ConfigError(
        "gains.c_q too large: cable coupling matrix is not positive-definite");
  }
}

ControllerState ControllerState::initial(const SystemParams& params,
                                         const NetworkLayout& layout) {
  ControllerState cs;
  cs.mass_estimate = Vec3::Constant(params.reference_mass);
  cs.inertia_estimate = params.reference_inertia.diagonal();
  for (auto& net : cs.translational_nets) net = make_network(layout);
  for (auto& net : cs.rotational_nets) net = make_network(layout);
  cs.quad_force_estimates.assign(params.count(), Vec3::Zero());
  return cs;
}

double translational_drive(const PayloadErrors& e, int axis,
                           const ControllerGains& g) {
  const Mat2& p = g.P[static_cast<std::size_t>(axis)];
  return e.position[axis] * p(0, 1) + e.velocity[axis] * p(1, 1);
}

Vec3 translational_control(const PayloadErrors& e, const Setpoint& sp,
                           const Vec3& mass, const Vec3& phi,
                           const ControllerGains& g, double gravity) {
  Vec3 u;
  for (int j = 0; j < 3; ++j) {
    const double pd = -(g.kp[j] * e.position[j] + g.kd[j] * e.velocity[j]);
    const double lift = j == 2 ? gravity : 0.0;
    u[j] = mass[j] * (pd + sp.acceleration[j] + lift - phi[j]);
  }
  return u;
}

Vec3 rotational_control(const PayloadErrors& e, const SystemState& state,
                        const Setpoint& sp, const Vec3& inertia, const Vec3& phi,
                        const ControllerGains& g) {
  const Mat3 rel = state.attitude.transpose() * sp.attitude;
  const Vec3 gyro = state.angular_velocity.cross(rel * sp.angular_velocity);
  const Vec3 feed = rel * sp.angular_acceleration;
  Vec3 u;
  for (int j = 0; j < 3; ++j) {
    u[j] = inertia[j] * (-g.k_R0 * e.attitude[j] - g.k_Omega0 * e.angular_velocity[j] -
                         gyro[j] + feed[j] - phi[j]);
  }
  return u;
}

double bounded_estimate_rate(double estimate, double drive, double eta,
                             double scale, double max_value) {
  const double gain = estimate * estimate / eta;
  if (drive > 0.0 || estimate < max_value) return -gain * drive;
  return -scale * gain;
}

double update_mass_estimate(double estimate, double drive,
                            const ControllerGains& g, double max_mass, double dt) {
  const double next =
      estimate + dt * bounded_estimate_rate(estimate, drive, g.eta_m, g.s_m, max_mass);
  return std::max(next, g.mass_floor);
}

double update_inertia_estimate(double estimate, double drive,
                               const ControllerGains& g, double max_inertia,
                               double dt) {
  const double next = estimate + dt * bounded_estimate_rate(estimate, drive, g.eta_J,
                                                            g.s_J, max_inertia);
  return std::max(next, g.inertia_floor);
}

void update_weights(RbfNetwork& net, double drive, const Vec2& input,
                    double gamma, double dt) {
  if (drive == 0.0) return;
  net.weights += (gamma * drive * dt) * rbf_activation(input, net);
}

void update_disturbance_estimates(ControllerState& cs, const PayloadErrors& e,
                                  const std::vector<CableErrors>& cables,
                                  const SystemState& state,
                                  const ControllerGains& g,
                                  const SystemParams& params, double dt) {
  const Vec3 j_ref = params.reference_inertia.diagonal();
  Vec3 drive;
  for (int j = 0; j < 3; ++j) drive[j] = translational_drive(e, j, g);

  cs.payload_force_estimate += dt * (g.h_x0 / params.reference_mass) * drive;
  cs.payload_moment_estimate +=
      dt * g.h_R0 * e.angular_velocity.cwiseQuotient(j_ref);

  const Mat3 j_ref_inv = params.reference_inertia.inverse();
  for (std::size_t i = 0; i < params.count(); ++i) {
    const auto& quad = params.quadrotors[i];
    const UnitVector& q = state.cables[i].direction;
    const Vec3 bracket =
        drive / params.reference_mass -
        j_ref_inv * state.attitude * hat(quad.attachment) * e.angular_velocity +
        (g.h_xi / (quad.mass * quad.cable_length)) *
            q.cross(cables[i].angular_velocity + g.c_q * cables[i].direction);
    cs.quad_force_estimates[i] += dt * g.h_xi * project_parallel(q, bracket);
  }
}

std::pair<Vec3, Vec3> first_level_control(const Vec3& U_x, const Vec3& U_R,
                                          const ControllerState& cs,
                                          const SystemState& state,
                                          const SystemParams& params) {
  Vec3 force = U_x - cs.payload_force_estimate;
  Vec3 moment = U_R - cs.payload_moment_estimate;
  for (std::size_t i = 0; i < params.count(); ++i) {
    const Vec3 par =
        project_parallel(state.cables[i].direction, cs.quad_force_estimates[i]);
    force -= par;
    moment -= hat(params.quadrotors[i].attachment) * (state.attitude.transpose() * par);
  }
  return {force, moment};
}

FilteredRate filtered_rate(const Vec3& value, const Vec3& filter, double tau,
                           double dt) {
  FilteredRate f;
  f.rate = (value - filter) / tau;
  f.next_filter = filter + dt * f.rate;
  return f;
}

DesiredDirection desired_cable_direction(const Vec3& tension_desired,
                                         const UnitVector& filter, bool has_filter,
                                         double tau, double dt, double epsilon) {
  DesiredDirection d;
  const double n = tension_desired.norm();
  if (n < epsilon) {
    d.direction = has_filter ? filter : UnitVector(-Vec3::UnitZ());
    d.held = true;
  } else {
    d.direction = -tension_desired / n;
  }
  if (!has_filter) {
    d.next_filter = d.direction;
    return d;
  }
  const FilteredRate f = filtered_rate(d.direction, filter, tau, dt);
  d.rate = project_perpendicular(d.direction, f.rate);
  d.next_filter = renormalize_direction(f.next_filter);
  return d;
}

Vec3 cable_attitude_control(const CableErrors& e, const CableState& cable,
                            const Vec3& desired_rate_dot, const Vec3& accel,
                            std::size_t i, const ControllerGains& g,
                            const SystemParams& params) {
  const auto& quad = params.quadrotors[i];
  const UnitVector& q = cable.direction;
  const Mat3 qh = hat(q);
  const Vec3 q_dot = cable.angular_velocity.cross(q);
  const Vec3 shaped = -g.k_q * e.direction - g.k_omega * e.angular_velocity -
                      q.dot(e.desired_angular_velocity) * q_dot -
                      qh * (qh * desired_rate_dot);
  return quad.mass * quad.cable_length * (qh * shaped) +
         quad.mass * project_perpendicular(q, accel);
}

AttitudeCommand quadrotor_attitude_control(
    const Vec3& u, const QuadrotorState& quad, const RotationMatrix& attitude_filter,
    const Vec3& rate_filter, bool has_filter, const ControllerGains& g,
    const Mat3& inertia, double dt) {
  AttitudeCommand cmd;
  const double tau = g.derivative_time_constant;
  const double norm = u.norm();
  if (norm < g.thrust_epsilon) {
    cmd.desired = has_filter ? attitude_filter : quad.attitude;
    cmd.held = true;
  } else {
    const Vec3 b3 = u / norm;
    Vec3 b2 = b3.cross(Vec3::UnitX());
    if (b2.norm() < 1e-6) b2 = b3.cross(Vec3::UnitY());
    b2.normalize();
    const Vec3 b1 = b2.cross(b3);
    cmd.desired.col(0) = b1;
    cmd.desired.col(1) = b2;
    cmd.desired.col(2) = b3;
  }
  if (has_filter) {
    const Mat3 gap = attitude_filter.transpose() * cmd.desired;
    cmd.desired_rate = 0.5 * vee(gap - gap.transpose()) / tau;
    cmd.next_attitude_filter = attitude_filter * exp_so3(dt * cmd.desired_rate);
    const FilteredRate f = filtered_rate(cmd.desired_rate, rate_filter, tau, dt);
    cmd.desired_rate_dot = f.rate;
    cmd.next_rate_filter = f.next_filter;
  } else {
    cmd.next_attitude_filter = cmd.desired;
  }
  const Vec3& rate_dot = cmd.desired_rate_dot;

  const Mat3& R = quad.attitude;
  const Vec3& W = quad.angular_velocity;
  const Mat3 rel = R.transpose() * cmd.desired;
  const Mat3 err = cmd.desired.transpose() * R;
  const Vec3 e_R = 0.5 * vee(err - err.transpose());
  const Vec3 e_W = W - rel * cmd.desired_rate;
  cmd.moment = -g.k_R * e_R - g.k_Omega * e_W + W.cross(inertia * W) -
               inertia * (hat(W) * rel * cmd.desired_rate - rel * rate_dot);
  cmd.thrust = u.dot(R.col(2));
  return cmd;
}

ControllerUpdate step_controller(const SystemState& state, const Setpoint& sp,
                                 const ControllerState& cs,
                                 const ControllerGains& g,
                                 const SystemParams& params,
                                 const CableAllocator& allocator, double dt,
                                 ControlMode mode) {
  const std::size_t n = params.count();
  const bool adaptive = mode == ControlMode::kAdaptive;

  ControllerUpdate out;
  ControlDiagnostics& diag = out.diagnostics;
  diag.payload = payload_errors(sp.attitude, state.attitude, sp.angular_velocity,
                                state.angular_velocity, sp.position, sp.velocity,
                                state.position, state.velocity);
  const PayloadErrors& e = diag.payload;

  for (int j = 0; j < 3; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    diag.phi_x_estimate[j] =
        adaptive ? nn_estimate(cs.translational_nets[idx], translational_input(e, j))
                 : 0.0;
    diag.phi_R_estimate[j] =
        adaptive ? nn_estimate(cs.rotational_nets[idx], rotational_input(e, j)) : 0.0;
  }
  const Vec3 mass =
      adaptive ? cs.mass_estimate : Vec3::Constant(params.reference_mass);
  const Vec3 inertia =
      adaptive ? cs.inertia_estimate : Vec3(params.reference_inertia.diagonal());

  diag.translational_command = translational_control(
      e, sp, mass, diag.phi_x_estimate, g, params.gravity);
  diag.rotational_command =
      rotational_control(e, state, sp, inertia, diag.phi_R_estimate, g);

  ControlOutput& ctrl = out.output;
  ctrl = ControlOutput::zero(n);
  std::tie(ctrl.force, ctrl.moment) = first_level_control(
      diag.translational_command, diag.rotational_command, cs, state, params);
  ctrl.tension_desired = allocator.allocate(ctrl.force, ctrl.moment, state.attitude);

  // Measured payload accelerations by backward difference.
  Vec3 accel = Vec3::Zero();
  Vec3 angular_accel = Vec3::Zero();
  if (cs.primed) {
    accel = (state.velocity - cs.last_velocity) / dt;
    angular_accel = (state.angular_velocity - cs.last_angular_velocity) / dt;
  }

  ControllerState& next = out.next;
  next = cs;
  next.cable_direction_filter.resize(n);
  next.cable_rate_filter.resize(n);
  next.quad_attitude_filter.resize(n);
  next.quad_rate_filter.resize(n);
  diag.cables.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const CableState& cable = state.cables[i];
    const UnitVector& q = cable.direction;
    const Vec3& mu_d = ctrl.tension_desired[i];
    ctrl.tension[i] = project_parallel(q, mu_d);
    if (q.dot(mu_d) > 0.0) ++diag.compressed_cables;

    const DesiredDirection qd = desired_cable_direction(
        mu_d, cs.primed ? cs.cable_direction_filter[i] : q, cs.primed,
        g.derivative_time_constant, dt, g.tension_epsilon);
    diag.cables[i] = cable_errors(qd.direction, qd.rate, q, cable.angular_velocity);
    const Vec3& w_d = diag.cables[i].desired_angular_velocity;
    FilteredRate w_d_dot;
    if (cs.primed) {
      w_d_dot = filtered_rate(w_d, cs.cable_rate_filter[i], g.derivative_time_constant, dt);
    } else {
      w_d_dot.next_filter = w_d;
    }

    const Vec3 a = connection_acceleration(state, accel, angular_accel, i, params);
    ctrl.thrust_perpendicular[i] =
        cable_attitude_control(diag.cables[i], cable, w_d_dot.rate, a, i, g, params);
    ctrl.thrust_parallel[i] =
        parallel_control_component(ctrl.tension[i], state, a, i, params);
    ctrl.thrust_vector[i] = ctrl.thrust_parallel[i] + ctrl.thrust_perpendicular[i];

    const AttitudeCommand cmd = quadrotor_attitude_control(
        ctrl.thrust_vector[i], state.quadrotors[i],
        cs.primed ? cs.quad_attitude_filter[i] : state.quadrotors[i].attitude,
        cs.primed ? cs.quad_rate_filter[i] : Vec3::Zero(), cs.primed, g,
        params.quadrotors[i].inertia, dt);
    ctrl.thrust[i] = cmd.thrust;
    ctrl.quad_moment[i] = cmd.moment;

    next.cable_direction_filter[i] = qd.next_filter;
    next.cable_rate_filter[i] = w_d_dot.next_filter;
    next.quad_attitude_filter[i] = cmd.next_attitude_filter;
    next.quad_rate_filter[i] = cmd.next_rate_filter;
  }
  next.primed = true;
  next.last_velocity = state.velocity;
  next.last_angular_velocity = state.angular_velocity;

  for (int j = 0; j < 3; ++j) {
    diag.mass_drive[j] = translational_drive(e, j, g) * diag.translational_command[j];
    diag.inertia_drive[j] = e.angular_velocity[j] * diag.rotational_command[j];
  }
  if (adaptive) {
    const Vec3 j_max = params.max_inertia.diagonal();
    for (int j = 0; j < 3; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      next.mass_estimate[j] = update_mass_estimate(
          cs.mass_estimate[j], diag.mass_drive[j], g, params.max_mass, dt);
      next.inertia_estimate[j] = update_inertia_estimate(
          cs.inertia_estimate[j], diag.inertia_drive[j], g, j_max[j], dt);
      update_weights(next.translational_nets[idx], translational_drive(e, j, g),
                     translational_input(e, j), g.gamma_x[j], dt);
      update_weights(next.rotational_nets[idx], e.angular_velocity[j],
                     rotational_input(e, j), g.gamma_R[j], dt);
    }
  }
  update_disturbance_estimates(next, e, diag.cables, state, g, params, dt);
  return out;
}

}  // namespace cablelift
