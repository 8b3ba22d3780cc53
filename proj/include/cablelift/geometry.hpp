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

// Fixed-size rotation algebra on SO(3) and S^2 and the tracking-error maps
// shared by the plant model and the controller.

#ifndef CABLELIFT_GEOMETRY_HPP_
#define CABLELIFT_GEOMETRY_HPP_

#include <Eigen/Dense>

namespace cablelift {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Mat3 / Vec3 carrying a manifold constraint. The constraint is restored by
// renormalize_rotation() / renormalize_direction() after every integrator step.
using RotationMatrix = Eigen::Matrix3d;
using UnitVector = Eigen::Vector3d;

inline constexpr double kSkewTolerance = 1e-9;
inline constexpr double kRenormalizeTolerance = 1e-3;

inline Vec3 unit_axis(int j) { return Vec3::Unit(j); }

Mat3 hat(const Vec3& v);

// Inverse of hat(). Throws AlgebraError when |M + M^T| exceeds kSkewTolerance.
Vec3 vee(const Mat3& m);

struct PayloadErrors {
  Vec3 position = Vec3::Zero();          // e_x0 (m)
  Vec3 velocity = Vec3::Zero();          // de_x0 (m/s)
  Vec3 attitude = Vec3::Zero();          // e_R0
  Vec3 angular_velocity = Vec3::Zero();  // e_Omega0 (rad/s)
  double attitude_potential = 0.0;       // Psi_R in [0, 2]
};

PayloadErrors payload_errors(const RotationMatrix& R_d, const RotationMatrix& R,
                             const Vec3& Omega_d, const Vec3& Omega,
                             const Vec3& x_d, const Vec3& v_d, const Vec3& x,
                             const Vec3& v);

struct CableErrors {
  Vec3 direction = Vec3::Zero();         // e_q = q_d x q
  Vec3 angular_velocity = Vec3::Zero();  // e_omega = omega + hat(q)^2 omega_d
  double potential = 0.0;                // Psi_q = 1 - q . q_d
  UnitVector desired_direction = -Vec3::UnitZ();
  Vec3 desired_angular_velocity = Vec3::Zero();  // omega_d = q_d x dq_d
};

CableErrors cable_errors(const UnitVector& q_d, const Vec3& q_d_dot,
                         const UnitVector& q, const Vec3& omega);

inline Vec3 project_parallel(const UnitVector& q, const Vec3& v) {
  return q * q.dot(v);
}

inline Vec3 project_perpendicular(const UnitVector& q, const Vec3& v) {
  return v - project_parallel(q, v);
}

// Frobenius norm of R^T R - I.
double orthogonality_residual(const Mat3& r);

// Nearest proper rotation (polar factor via SVD). Throws DivergenceError when
// the input is farther than kRenormalizeTolerance from SO(3) or is a
// reflection.
RotationMatrix renormalize_rotation(const Mat3& r);

UnitVector renormalize_direction(const Vec3& q);

// Rodrigues formula; angle in rad about a (not necessarily unit) axis.
RotationMatrix axis_angle(const Vec3& axis, double angle);

// exp(hat(w)).
RotationMatrix exp_so3(const Vec3& w);

}  // namespace cablelift

#endif  // CABLELIFT_GEOMETRY_HPP_
