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

#include "cablelift/dynamics.hpp"

#include <cmath>
#include <string>

#include "cablelift/errors.hpp"

namespace cablelift {
namespace {

void require_positive(double v, const std::string& field) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ConfigError(field + " must be a positive finite number");
  }
}

void require_spd(const Mat3& m, const std::string& field) {
  if (!m.allFinite()) throw ConfigError(field + " has non-finite entries");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.norm())) {
    throw ConfigError(field + " must be symmetric");
  }
  Eigen::LLT<Mat3> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ConfigError(field + " must be positive-definite");
  }
}

}  // namespace

void validate(const SystemParams& p) {
  require_positive(p.payload_mass, "plant.payload_mass_kg");
  require_spd(p.payload_inertia, "plant.payload_inertia_kgm2");
  require_positive(p.gravity, "plant.gravity_mps2");
  require_positive(p.reference_mass, "reference.payload_mass_kg");
  require_spd(p.reference_inertia, "reference.payload_inertia_kgm2");
  require_positive(p.max_mass, "reference.max_payload_mass_kg");
  require_spd(p.max_inertia, "reference.max_payload_inertia_kgm2");
  if (p.quadrotors.empty()) {
    throw ConfigError("plant.quadrotors must list at least one quadrotor");
  }
  for (std::size_t i = 0; i < p.count(); ++i) {
    const auto& q = p.quadrotors[i];
    const std::string prefix = "plant.quadrotors[" + std::to_string(i) + "].";
    require_positive(q.mass, prefix + "mass_kg");
    require_spd(q.inertia, prefix + "inertia_kgm2");
    require_positive(q.cable_length, prefix + "cable_length_m");
    if (!q.attachment.allFinite()) {
      throw ConfigError(prefix + "attachment_m has non-finite entries");
    }
  }
  // Rank of the allocation matrix.
  CableAllocator check(p);
  (void)check;
}

SystemState SystemState::hover(std::size_t n) {
  SystemState s;
  s.cables.assign(n, CableState{});
  s.quadrotors.assign(n, QuadrotorState{});
  return s;
}

DisturbanceSample DisturbanceSample::zero(std::size_t n) {
  DisturbanceSample d;
  d.quad_force.assign(n, Vec3::Zero());
  d.quad_moment.assign(n, Vec3::Zero());
  d.quad_force_parallel.assign(n, Vec3::Zero());
  d.quad_force_perpendicular.assign(n, Vec3::Zero());
  return d;
}

void DisturbanceSample::decompose(const std::vector<CableState>& cables) {
  quad_force_parallel.resize(quad_force.size());
  quad_force_perpendicular.resize(quad_force.size());
  for (std::size_t i = 0; i < quad_force.size(); ++i) {
    const UnitVector& q = cables[i].direction;
    quad_force_parallel[i] = project_parallel(q, quad_force[i]);
    quad_force_perpendicular[i] = quad_force[i] - quad_force_parallel[i];
  }
}

ControlOutput ControlOutput::zero(std::size_t n) {
  ControlOutput c;
  c.tension_desired.assign(n, Vec3::Zero());
  c.tension.assign(n, Vec3::Zero());
  c.thrust_vector.assign(n, Vec3::Zero());
  c.thrust_parallel.assign(n, Vec3::Zero());
  c.thrust_perpendicular.assign(n, Vec3::Zero());
  c.thrust.assign(n, 0.0);
  c.quad_moment.assign(n, Vec3::Zero());
  return c;
}

CableAllocator::CableAllocator(const SystemParams& params) {
  const auto n = static_cast<Eigen::Index>(params.count());
  matrix_.setZero(6, 3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    matrix_.block<3, 3>(0, 3 * i).setIdentity();
    matrix_.block<3, 3>(3, 3 * i) =
        hat(params.quadrotors[static_cast<std::size_t>(i)].attachment);
  }
  const Eigen::Matrix<double, 6, 6> gram = matrix_ * matrix_.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 1e-10 * hi)) {
    throw ConfigError(
        "plant.quadrotors attachment points give a rank-deficient allocation "
        "matrix (need rank 6)");
  }
  gram_.compute(gram);
}

std::vector<Vec3> CableAllocator::allocate(const Vec3& force, const Vec3& moment,
                                           const RotationMatrix& R0) const {
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << R0.transpose() * force, moment;
  const Eigen::VectorXd body = matrix_.transpose() * gram_.solve(rhs);
  std::vector<Vec3> out(static_cast<std::size_t>(matrix_.cols() / 3));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = R0 * body.segment<3>(3 * static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<Vec3> allocate_cable_forces(const Vec3& force, const Vec3& moment,
                                        const RotationMatrix& R0,
                                        const SystemParams& params) {
  return CableAllocator(params).allocate(force, moment, R0);
}

Vec3 connection_acceleration(const SystemState& state, const Vec3& payload_accel,
                             const Vec3& payload_angular_accel, std::size_t i,
                             const SystemParams& params) {
  const Vec3& rho = params.quadrotors[i].attachment;
  const Mat3 w = hat(state.angular_velocity);
  return payload_accel + params.gravity * Vec3::UnitZ() +
         state.attitude * (w * (w * rho)) -
         state.attitude * (hat(rho) * payload_angular_accel);
}

Vec3 parallel_control_component(const Vec3& tension, const SystemState& state,
                                const Vec3& accel, std::size_t i,
                                const SystemParams& params) {
  const auto& quad = params.quadrotors[i];
  const auto& cable = state.cables[i];
  const UnitVector& q = cable.direction;
  return tension +
         quad.mass * quad.cable_length * cable.angular_velocity.squaredNorm() * q +
         quad.mass * project_parallel(q, accel);
}

CableResiduals cable_residuals(const SystemState& state, const ControlOutput& ctrl,
                               const SystemParams& params) {
  CableResiduals y;
  Vec3 moment = Vec3::Zero();
  for (std::size_t i = 0; i < params.count(); ++i) {
    const Vec3& mu_d = ctrl.tension_desired[i];
    const Vec3 delta = project_parallel(state.cables[i].direction, mu_d) - mu_d;
    y.translational += delta;
    moment += hat(params.quadrotors[i].attachment) *
              (state.attitude.transpose() * delta);
  }
  y.translational /= params.payload_mass;
  y.rotational = params.payload_inertia.llt().solve(moment);
  return y;
}

SystemStateDerivative system_derivative(const SystemState& state,
                                        const ControlOutput& ctrl,
                                        const DisturbanceSample& dist,
                                        const Vec3& phi_x, const Vec3& phi_R,
                                        const SystemParams& params) {
  const std::size_t n = params.count();
  const Mat3& R0 = state.attitude;
  const Vec3& W0 = state.angular_velocity;
  const Mat3& J0 = params.payload_inertia;

  Vec3 par_force = Vec3::Zero();
  Vec3 par_moment = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    par_force += dist.quad_force_parallel[i];
    par_moment += hat(params.quadrotors[i].attachment) *
                  (R0.transpose() * dist.quad_force_parallel[i]);
  }
  const CableResiduals y = cable_residuals(state, ctrl, params);

  SystemStateDerivative d;
  d.position = state.velocity;
  d.velocity = (ctrl.force + dist.payload_force + par_force) / params.payload_mass -
               params.gravity * Vec3::UnitZ() + y.translational + phi_x;
  d.attitude = R0 * hat(W0);
  d.angular_velocity =
      J0.llt().solve(ctrl.moment - W0.cross(J0 * W0) + dist.payload_moment +
                     par_moment) +
      y.rotational + phi_R;

  d.cable_direction.resize(n);
  d.cable_angular_velocity.resize(n);
  d.quadrotor_attitude.resize(n);
  d.quadrotor_angular_velocity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& quad = params.quadrotors[i];
    const auto& cable = state.cables[i];
    const UnitVector& q = cable.direction;
    const Vec3 a = connection_acceleration(state, d.velocity, d.angular_velocity,
                                           i, params);
    d.cable_direction[i] = cable.angular_velocity.cross(q);
    d.cable_angular_velocity[i] =
        q.cross(a) / quad.cable_length -
        q.cross(ctrl.thrust_perpendicular[i] + dist.quad_force_perpendicular[i]) /
            (quad.mass * quad.cable_length);

    const auto& body = state.quadrotors[i];
    const Vec3& w = body.angular_velocity;
    d.quadrotor_attitude[i] = body.attitude * hat(w);
    d.quadrotor_angular_velocity[i] = quad.inertia.llt().solve(
        ctrl.quad_moment[i] - w.cross(quad.inertia * w) + dist.quad_moment[i]);
  }
  return d;
}

std::size_t state_dimension(std::size_t n) { return 18 + 18 * n; }

namespace {

template <typename Block>
void put_mat(Block&& dst, const Mat3& m) {
  dst = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(m.data());
}

Mat3 get_mat(const Eigen::VectorXd& y, Eigen::Index at) {
  return Eigen::Map<const Mat3>(y.data() + at);
}

}  // namespace

Eigen::VectorXd pack(const SystemState& s) {
  const std::size_t n = s.cables.size();
  Eigen::VectorXd y(static_cast<Eigen::Index>(state_dimension(n)));
  y.segment<3>(0) = s.position;
  y.segment<3>(3) = s.velocity;
  put_mat(y.segment<9>(6), s.attitude);
  y.segment<3>(15) = s.angular_velocity;
  Eigen::Index at = 18;
  for (std::size_t i = 0; i < n; ++i, at += 6) {
    y.segment<3>(at) = s.cables[i].direction;
    y.segment<3>(at + 3) = s.cables[i].angular_velocity;
  }
  for (std::size_t i = 0; i < n; ++i, at += 12) {
    put_mat(y.segment<9>(at), s.quadrotors[i].attitude);
    y.segment<3>(at + 9) = s.quadrotors[i].angular_velocity;
  }
  return y;
}

Eigen::VectorXd pack(const SystemStateDerivative& d) {
  const std::size_t n = d.cable_direction.size();
  Eigen::VectorXd y(static_cast<Eigen::Index>(state_dimension(n)));
  y.segment<3>(0) = d.position;
  y.segment<3>(3) = d.velocity;
  put_mat(y.segment<9>(6), d.attitude);
  y.segment<3>(15) = d.angular_velocity;
  Eigen::Index at = 18;
  for (std::size_t i = 0; i < n; ++i, at += 6) {
    y.segment<3>(at) = d.cable_direction[i];
    y.segment<3>(at + 3) = d.cable_angular_velocity[i];
  }
  for (std::size_t i = 0; i < n; ++i, at += 12) {
    put_mat(y.segment<9>(at), d.quadrotor_attitude[i]);
    y.segment<3>(at + 9) = d.quadrotor_angular_velocity[i];
  }
  return y;
}

SystemState unpack(const Eigen::VectorXd& y, std::size_t n) {
  SystemState s = SystemState::hover(n);
  s.position = y.segment<3>(0);
  s.velocity = y.segment<3>(3);
  s.attitude = get_mat(y, 6);
  s.angular_velocity = y.segment<3>(15);
  Eigen::Index at = 18;
  for (std::size_t i = 0; i < n; ++i, at += 6) {
    s.cables[i].direction = y.segment<3>(at);
    s.cables[i].angular_velocity = y.segment<3>(at + 3);
  }
  for (std::size_t i = 0; i < n; ++i, at += 12) {
    s.quadrotors[i].attitude = get_mat(y, at);
    s.quadrotors[i].angular_velocity = y.segment<3>(at + 9);
  }
  return s;
}

}  // namespace cablelift
