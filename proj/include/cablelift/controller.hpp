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

// Adaptive-neuro geometric controller for the cable-suspended payload.
//
// Cascade per control step:
//   {F_d, M_d} -> {mu_i_d} -> {mu_i} -> {u_i_par, u_i_perp} -> {f_i, M_i}
//
// The first level scales a per-axis PD law by online mass / inertia estimates
// and subtracts RBF-network estimates of the unknown augmented dynamics; the
// integral compensations subtract estimated payload and quadrotor
// disturbances. The lower levels are a geometric cable-direction tracker and a
// geometric attitude loop per quadrotor.
//
// In ControlMode::kBaseline the estimates are frozen at the reference model,
// network outputs are zero, and only the integral compensations run.

#ifndef CABLELIFT_CONTROLLER_HPP_
#define CABLELIFT_CONTROLLER_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cablelift/dynamics.hpp"
#include "cablelift/geometry.hpp"

namespace cablelift {

enum class ControlMode { kAdaptive, kBaseline };

std::string to_string(ControlMode mode);
ControlMode control_mode_from_string(const std::string& name);

// 2-l-1 Gaussian RBF network.
struct RbfNetwork {
  std::vector<Vec2> centers;
  std::vector<double> widths;
  Eigen::VectorXd weights;

  std::size_t size() const { return centers.size(); }
};

// Centers evenly spaced on the diagonal from (center_min, center_min) to
// (center_max, center_max); widths evenly spaced over [width_min, width_max].
struct NetworkLayout {
  int neurons = 5;
  double center_min = -2.0;
  double center_max = 2.0;
  double width_min = 1.0;
  double width_max = 2.0;
};

void validate(const NetworkLayout& layout);
RbfNetwork make_network(const NetworkLayout& layout);

// h_k(x) = exp(-|x - c_k|^2 / (2 b_k^2))
Eigen::VectorXd rbf_activation(const Vec2& x, const RbfNetwork& net);
double nn_estimate(const RbfNetwork& net, const Vec2& x);

struct ControllerGains {
  Vec3 kp = Vec3(20.0, 20.0, 1000.0);
  Vec3 kd = Vec3(10.0, 10.0, 200.0);
  double k_R0 = 20.0;
  double k_Omega0 = 10.0;
  double k_q = 8.0;        // cable direction
  double k_omega = 4.0;    // cable angular velocity
  double k_R = 8.0;        // quadrotor attitude
  double k_Omega = 2.0;    // quadrotor angular velocity
  double c_q = 0.01;
  double h_x0 = 1.0;
  double h_R0 = 0.1;
  double h_xi = 0.1;
  double eta_m = 0.01;
  double eta_J = 0.01;
  double s_m = 0.01;
  double s_J = 0.01;
  Vec3 gamma_x = Vec3(5000.0, 5000.0, 1000.0);
  Vec3 gamma_R = Vec3(1500.0, 1500.0, 100.0);
  std::array<Mat2, 3> Q{Mat2(Vec2(0.05, 0.05).asDiagonal()),
                        Mat2(Vec2(0.05, 0.05).asDiagonal()), Mat2::Identity()};
  std::array<Mat2, 3> P{Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};

  double mass_floor = 0.1;        // kg
  double inertia_floor = 0.01;    // kg m^2
  double tension_epsilon = 1e-6;  // N, below this q_i_d is held
  double thrust_epsilon = 1e-6;   // N, below this R_i_d is held
  // Time constant of the filtered derivatives of q_i_d, omega_i_d, R_i_d and
  // Omega_i_d (s).
  double derivative_time_constant = 0.01;
};

// [[0, 1], [-kp, -kd]]
Mat2 error_dynamics_matrix(double kp, double kd);

// Solves A^T P + P A = -Q for the companion-form A above.
Mat2 solve_lyapunov(const Mat2& a, const Mat2& q);

// [[c_q k_q, c_q k_omega / 2], [c_q k_omega / 2, k_omega - c_q]]
Mat2 cable_coupling_matrix(const ControllerGains& gains);

// Fills gains.P from (kp, kd, Q) and checks every positivity condition.
// Throws ConfigError naming the field.
void finalize(ControllerGains& gains);

struct Setpoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  RotationMatrix attitude = Mat3::Identity();
  Vec3 angular_velocity = Vec3::Zero();
  Vec3 angular_acceleration = Vec3::Zero();
};

struct ControllerState {
  Vec3 mass_estimate = Vec3::Ones();     // per-axis payload mass (kg)
  Vec3 inertia_estimate = Vec3::Ones();  // diagonal payload inertia (kg m^2)
  std::array<RbfNetwork, 3> translational_nets;
  std::array<RbfNetwork, 3> rotational_nets;
  Vec3 payload_force_estimate = Vec3::Zero();   // (N)
  Vec3 payload_moment_estimate = Vec3::Zero();  // (N m)
  std::vector<Vec3> quad_force_estimates;       // (N)

  // Derivative filter states and velocity memory, empty until the first step.
  bool primed = false;
  std::vector<UnitVector> cable_direction_filter;
  std::vector<Vec3> cable_rate_filter;
  std::vector<RotationMatrix> quad_attitude_filter;
  std::vector<Vec3> quad_rate_filter;
  Vec3 last_velocity = Vec3::Zero();
  Vec3 last_angular_velocity = Vec3::Zero();

  // Reference-model estimates, zero weights, zero disturbance estimates.
  static ControllerState initial(const SystemParams& params,
                                 const NetworkLayout& layout);
};

// E_j^T P_j B for axis j, with E_j = (e_x0[j], de_x0[j]) and B = (0, 1).
double translational_drive(const PayloadErrors& errors, int axis,
                           const ControllerGains& gains);

inline Vec2 translational_input(const PayloadErrors& e, int axis) {
  return Vec2(e.position[axis], e.velocity[axis]);
}

inline Vec2 rotational_input(const PayloadErrors& e, int axis) {
  return Vec2(e.attitude[axis], e.angular_velocity[axis]);
}

Vec3 translational_control(const PayloadErrors& errors, const Setpoint& setpoint,
                           const Vec3& mass_estimate, const Vec3& phi_estimate,
                           const ControllerGains& gains, double gravity);

Vec3 rotational_control(const PayloadErrors& errors, const SystemState& state,
                        const Setpoint& setpoint, const Vec3& inertia_estimate,
                        const Vec3& phi_estimate, const ControllerGains& gains);

// Three-branch bounded law shared by the mass and inertia estimates:
//   drive > 0                      : -(est^2 / eta) * drive
//   drive <= 0 and est <  max      : -(est^2 / eta) * drive
//   drive <= 0 and est >= max      : -scale * est^2 / eta
double bounded_estimate_rate(double estimate, double drive, double eta,
                             double scale, double max_value);

// Euler step of the bounded law, clamped below at the floor.
double update_mass_estimate(double estimate, double drive,
                            const ControllerGains& gains, double max_mass,
                            double dt);
double update_inertia_estimate(double estimate, double drive,
                               const ControllerGains& gains, double max_inertia,
                               double dt);

// W += gamma * drive * h(input) * dt
void update_weights(RbfNetwork& net, double drive, const Vec2& input,
                    double gamma, double dt);

// Euler step of the integral compensations for Delta_x0, Delta_R0, Delta_xi.
void update_disturbance_estimates(ControllerState& cs,
                                  const PayloadErrors& payload,
                                  const std::vector<CableErrors>& cables,
                                  const SystemState& state,
                                  const ControllerGains& gains,
                                  const SystemParams& params, double dt);

// F_d = U_x - Dbar_x0 - sum_i Dbar_xi_par
// M_d = U_R - Dbar_R0 - sum_i hat(rho_i) R0^T Dbar_xi_par
std::pair<Vec3, Vec3> first_level_control(const Vec3& U_x, const Vec3& U_R,
                                          const ControllerState& cs,
                                          const SystemState& state,
                                          const SystemParams& params);

// First-order filtered derivative: the filter state follows `value` with
// time constant tau and the rate estimate is (value - filter) / tau.
struct FilteredRate {
  Vec3 rate = Vec3::Zero();
  Vec3 next_filter = Vec3::Zero();
};
FilteredRate filtered_rate(const Vec3& value, const Vec3& filter, double tau, double dt);

struct DesiredDirection {
  UnitVector direction = -Vec3::UnitZ();
  Vec3 rate = Vec3::Zero();               // dq_d, tangent to q_d
  UnitVector next_filter = -Vec3::UnitZ();
  bool held = false;
};

// q_d = -mu_d / |mu_d| (held at the filter state when |mu_d| < epsilon) and
// its filtered derivative. `filter` is ignored when has_filter is false.
DesiredDirection desired_cable_direction(const Vec3& tension_desired,
                                         const UnitVector& filter, bool has_filter,
                                         double tau, double dt, double epsilon);

// Normal thrust component for cable i. Cancels the connection-point
// acceleration term of the cable dynamics and imposes
//   -hat(q)^2 de_omega = -k_q e_q - k_omega e_omega
// on the cable direction error.
Vec3 cable_attitude_control(const CableErrors& errors, const CableState& cable,
                            const Vec3& desired_rate_dot, const Vec3& accel,
                            std::size_t i, const ControllerGains& gains,
                            const SystemParams& params);

struct AttitudeCommand {
  double thrust = 0.0;           // f_i (N)
  Vec3 moment = Vec3::Zero();    // M_i (N m)
  RotationMatrix desired = Mat3::Identity();
  Vec3 desired_rate = Vec3::Zero();        // Omega_i_d, body frame
  Vec3 desired_rate_dot = Vec3::Zero();
  RotationMatrix next_attitude_filter = Mat3::Identity();
  Vec3 next_rate_filter = Vec3::Zero();
  bool held = false;
};

// Desired body z axis along u, heading from e1. Desired rates are filtered
// derivatives of the desired attitude; without filter state they are zero.
AttitudeCommand quadrotor_attitude_control(
    const Vec3& u, const QuadrotorState& quad, const RotationMatrix& attitude_filter,
    const Vec3& rate_filter, bool has_filter, const ControllerGains& gains,
    const Mat3& inertia, double dt);

struct ControlDiagnostics {
  PayloadErrors payload;
  std::vector<CableErrors> cables;
  Vec3 translational_command = Vec3::Zero();  // U_x
  Vec3 rotational_command = Vec3::Zero();     // U_R
  Vec3 phi_x_estimate = Vec3::Zero();
  Vec3 phi_R_estimate = Vec3::Zero();
  Vec3 mass_drive = Vec3::Zero();
  Vec3 inertia_drive = Vec3::Zero();
  std::size_t compressed_cables = 0;  // cables with q_i . mu_i_d > 0
};

struct ControllerUpdate {
  ControlOutput output;
  ControllerState next;
  ControlDiagnostics diagnostics;
};

ControllerUpdate step_controller(const SystemState& state, const Setpoint& setpoint,
                                 const ControllerState& cs,
                                 const ControllerGains& gains,
                                 const SystemParams& params,
                                 const CableAllocator& allocator, double dt,
                                 ControlMode mode);

}  // namespace cablelift

#endif  // CABLELIFT_CONTROLLER_HPP_
