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

#include "cablelift/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cablelift/errors.hpp"

namespace cablelift {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSkewTolerance)) {
    throw AlgebraError("vee: matrix is not skew-symmetric (|M + M^T|_max = " +
                       std::to_string(asym) + ")");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

PayloadErrors payload_errors(const RotationMatrix& R_d, const RotationMatrix& R,
                             const Vec3& Omega_d, const Vec3& Omega,
                             const Vec3& x_d, const Vec3& v_d, const Vec3& x,
                             const Vec3& v) {
  PayloadErrors e;
  e.position = x - x_d;
  e.velocity = v - v_d;
  const Mat3 rel = R_d.transpose() * R;
  e.attitude = 0.5 * vee(rel - rel.transpose());
  e.angular_velocity = Omega - R.transpose() * R_d * Omega_d;
  e.attitude_potential = 0.5 * (3.0 - rel.trace());
  return e;
}

CableErrors cable_errors(const UnitVector& q_d, const Vec3& q_d_dot,
                         const UnitVector& q, const Vec3& omega) {
  CableErrors e;
  e.desired_direction = q_d;
  e.desired_angular_velocity = q_d.cross(q_d_dot);
  e.direction = q_d.cross(q);
  const Mat3 qh = hat(q);
  e.angular_velocity = omega + qh * qh * e.desired_angular_velocity;
  e.potential = 1.0 - q.dot(q_d);
  return e;
}

double orthogonality_residual(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm();
}

RotationMatrix renormalize_rotation(const Mat3& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!r.allFinite()) {
    throw DivergenceError("rotation matrix has non-finite entries", nan);
  }
  const double residual = orthogonality_residual(r);
  if (residual > kRenormalizeTolerance) {
    throw DivergenceError("rotation drifted off SO(3) (|R^T R - I| = " +
                              std::to_string(residual) + ")",
                          nan);
  }
  if (r.determinant() <= 0.0) {
    throw DivergenceError("rotation matrix is a reflection", nan);
  }
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

UnitVector renormalize_direction(const Vec3& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || n < 0.5) {
    throw DivergenceError("cable direction lost unit norm",
                          std::numeric_limits<double>::quiet_NaN());
  }
  return q / n;
}

RotationMatrix axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return Mat3::Identity();
  return exp_so3(axis / n * angle);
}

RotationMatrix exp_so3(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 k = hat(w);
  if (theta < 1e-12) return Mat3::Identity() + k;
  return Mat3::Identity() + std::sin(theta) / theta * k +
         (1.0 - std::cos(theta)) / (theta * theta) * k * k;
}

}  // namespace cablelift
