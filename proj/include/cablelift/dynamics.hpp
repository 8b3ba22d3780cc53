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

// Disturbance-augmented equations of motion for n quadrotors carrying a rigid
// payload on massless rigid cables, plus the minimum-norm split of a desired
// payload wrench into per-cable tension forces.
//
// Frames: e3 points up, gravity acts along -e3. q_i points from quadrotor i to
// its attachment point C_i on the payload.

#ifndef CABLELIFT_DYNAMICS_HPP_
#define CABLELIFT_DYNAMICS_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cablelift/geometry.hpp"

namespace cablelift {

struct QuadrotorParams {
  double mass = 1.0;                                    // m_i (kg)
  Mat3 inertia = Vec3(0.02, 0.02, 0.04).asDiagonal();   // J_i (kg m^2)
  double cable_length = 1.0;                            // l_i (m)
  Vec3 attachment = Vec3::Zero();                       // rho_i in payload frame (m)
};

struct SystemParams {
  double payload_mass = 1.0;                    // m0 (kg)
  Mat3 payload_inertia = Mat3::Identity();      // J0 (kg m^2)
  std::vector<QuadrotorParams> quadrotors;
  double gravity = 9.81;                        // g (m/s^2)

  // Controller-side knowledge: reference model and preset bounds.
  double reference_mass = 1.0;                  // m0' (kg)
  Mat3 reference_inertia = Mat3::Identity();    // J0' (kg m^2)
  double max_mass = 6.0;                        // (kg)
  Mat3 max_inertia = Mat3::Identity();          // (kg m^2)

  std::size_t count() const { return quadrotors.size(); }
};

// Throws ConfigError naming the offending field.
void validate(const SystemParams& params);

struct CableState {
  UnitVector direction = -Vec3::UnitZ();   // q_i
  Vec3 angular_velocity = Vec3::Zero();    // omega_i (rad/s), orthogonal to q_i
};

struct QuadrotorState {
  RotationMatrix attitude = Mat3::Identity();  // R_i
  Vec3 angular_velocity = Vec3::Zero();        // Omega_i (rad/s), body frame
};

struct SystemState {
  Vec3 position = Vec3::Zero();                // x0 (m)
  Vec3 velocity = Vec3::Zero();                // dx0 (m/s)
  RotationMatrix attitude = Mat3::Identity();  // R0
  Vec3 angular_velocity = Vec3::Zero();        // Omega0 (rad/s), body frame
  std::vector<CableState> cables;
  std::vector<QuadrotorState> quadrotors;

  // Payload hanging at rest below n level quadrotors.
  static SystemState hover(std::size_t n);
};

struct SystemStateDerivative {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Mat3 attitude = Mat3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
  std::vector<Vec3> cable_direction;
  std::vector<Vec3> cable_angular_velocity;
  std::vector<Mat3> quadrotor_attitude;
  std::vector<Vec3> quadrotor_angular_velocity;
};

struct DisturbanceSample {
  Vec3 payload_force = Vec3::Zero();    // Delta_x0 (N)
  Vec3 payload_moment = Vec3::Zero();   // Delta_R0 (N m)
  std::vector<Vec3> quad_force;         // Delta_xi (N)
  std::vector<Vec3> quad_moment;        // Delta_Ri (N m)
  std::vector<Vec3> quad_force_parallel;       // along q_i
  std::vector<Vec3> quad_force_perpendicular;  // normal to q_i

  static DisturbanceSample zero(std::size_t n);
  // Recomputes the parallel / perpendicular split of quad_force at the
  // given cable directions.
  void decompose(const std::vector<CableState>& cables);
};

struct ControlOutput {
  Vec3 force = Vec3::Zero();   // F_d (N)
  Vec3 moment = Vec3::Zero();  // M_d (N m)
  std::vector<Vec3> tension_desired;       // mu_i_d (N)
  std::vector<Vec3> tension;               // mu_i = (q_i q_i^T) mu_i_d (N)
  std::vector<Vec3> thrust_vector;         // u_i (N)
  std::vector<Vec3> thrust_parallel;       // u_i_par (N)
  std::vector<Vec3> thrust_perpendicular;  // u_i_perp (N)
  std::vector<double> thrust;              // f_i (N)
  std::vector<Vec3> quad_moment;           // M_i (N m)

  static ControlOutput zero(std::size_t n);
};

// Minimum-norm solution of
//   sum_i mu_i = F,   sum_i hat(rho_i) R0^T mu_i = M
// computed in the payload frame through the 6x6 normal equations of the wide
// 6 x 3n allocation matrix. The rank check happens once, in the constructor.
class CableAllocator {
 public:
  explicit CableAllocator(const SystemParams& params);

  std::vector<Vec3> allocate(const Vec3& force, const Vec3& moment,
                             const RotationMatrix& R0) const;

  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;               // [I ... I; hat(rho_1) ... hat(rho_n)]
  Eigen::LLT<Eigen::Matrix<double, 6, 6>> gram_;
};

std::vector<Vec3> allocate_cable_forces(const Vec3& force, const Vec3& moment,
                                        const RotationMatrix& R0,
                                        const SystemParams& params);

// a_i = ddx0 + g e3 + R0 hat(Omega0)^2 rho_i - R0 hat(rho_i) dOmega0
Vec3 connection_acceleration(const SystemState& state, const Vec3& payload_accel,
                             const Vec3& payload_angular_accel, std::size_t i,
                             const SystemParams& params);

// u_i_par = mu_i + m_i l_i |omega_i|^2 q_i + m_i (q_i q_i^T) a_i
Vec3 parallel_control_component(const Vec3& tension, const SystemState& state,
                                const Vec3& accel, std::size_t i,
                                const SystemParams& params);

// Cable-tracking residuals Y_x, Y_R: effect of mu_i != mu_i_d on the payload.
struct CableResiduals {
  Vec3 translational = Vec3::Zero();
  Vec3 rotational = Vec3::Zero();
};

CableResiduals cable_residuals(const SystemState& state, const ControlOutput& ctrl,
                               const SystemParams& params);

SystemStateDerivative system_derivative(const SystemState& state,
                                        const ControlOutput& ctrl,
                                        const DisturbanceSample& dist,
                                        const Vec3& phi_x, const Vec3& phi_R,
                                        const SystemParams& params);

// Flat packing used by the integrator: payload (x0, v0, R0 col-major, Omega0),
// then per cable (q, omega), then per quadrotor (R col-major, Omega).
std::size_t state_dimension(std::size_t n);
Eigen::VectorXd pack(const SystemState& state);
Eigen::VectorXd pack(const SystemStateDerivative& derivative);
SystemState unpack(const Eigen::VectorXd& y, std::size_t n);

}  // namespace cablelift

#endif  // CABLELIFT_DYNAMICS_HPP_
