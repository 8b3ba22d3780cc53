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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cablelift/errors.hpp"
#include "cablelift/scenario.hpp"
#include "support/generators.hpp"

namespace cablelift {
namespace {

using testing::Gen;

ControllerGains finalized_gains() {
  ControllerGains g;
  finalize(g);
  return g;
}

// ---------------------------------------------------------------- RBF network

TEST(Rbf, CenterHitIsOne) {
  const RbfNetwork net = make_network(NetworkLayout{});
  for (std::size_t k = 0; k < net.size(); ++k) {
    EXPECT_DOUBLE_EQ(rbf_activation(net.centers[k], net)[static_cast<Eigen::Index>(k)], 1.0);
  }
}

TEST(Rbf, OneOverEAtRootTwoWidths) {
  const RbfNetwork net = make_network(NetworkLayout{});
  for (std::size_t k = 0; k < net.size(); ++k) {
    const Vec2 x = net.centers[k] + net.widths[k] * std::sqrt(2.0) * Vec2(0.6, 0.8);
    EXPECT_NEAR(rbf_activation(x, net)[static_cast<Eigen::Index>(k)], std::exp(-1.0), 1e-15);
  }
}

TEST(Rbf, DecaysMonotonicallyWithDistance) {
  const RbfNetwork net = make_network(NetworkLayout{});
  const Vec2 dir = Vec2(1.0, -2.0).normalized();
  double last = 2.0;
  for (int k = 0; k < 60; ++k) {
    const double h = rbf_activation(net.centers[0] + 0.25 * k * dir, net)[0];
    ASSERT_LT(h, last) << "step " << k;
    last = h;
  }
  EXPECT_LT(last, 1e-6);
}

TEST(Rbf, DefaultLayoutSpansDiagonalAndWidthRange) {
  const RbfNetwork net = make_network(NetworkLayout{});
  ASSERT_EQ(net.size(), 5u);
  EXPECT_EQ(net.centers.front(), Vec2(-2.0, -2.0));
  EXPECT_EQ(net.centers.back(), Vec2(2.0, 2.0));
  EXPECT_EQ(net.widths.front(), 1.0);
  EXPECT_EQ(net.widths.back(), 2.0);
  EXPECT_TRUE(net.weights.isZero(0.0));
}

TEST(NnEstimate, ZeroWeightsGiveZero) {
  const RbfNetwork net = make_network(NetworkLayout{});
  EXPECT_EQ(nn_estimate(net, Vec2(0.3, -0.1)), 0.0);
}

TEST(NnEstimate, SingleNeuronAtCenter) {
  NetworkLayout layout;
  layout.neurons = 1;
  RbfNetwork net = make_network(layout);
  net.weights << 2.0;
  EXPECT_DOUBLE_EQ(nn_estimate(net, net.centers[0]), 2.0);
}

TEST(NnEstimate, MatchesExplicitSum) {
  Gen gen(41);
  RbfNetwork net = make_network(NetworkLayout{});
  for (int k = 0; k < 200; ++k) {
    for (Eigen::Index i = 0; i < net.weights.size(); ++i) net.weights[i] = gen.uniform(-5, 5);
    const Vec2 x = gen.vec2(3.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
      const double d2 = (x - net.centers[i]).squaredNorm();
      sum += net.weights[static_cast<Eigen::Index>(i)] *
             std::exp(-d2 / (2.0 * net.widths[i] * net.widths[i]));
    }
    ASSERT_NEAR(nn_estimate(net, x), sum, 1e-14 * (1.0 + std::abs(sum))) << "case " << k;
  }
}

TEST(UpdateWeights, ZeroDriveLeavesWeights) {
  RbfNetwork net = make_network(NetworkLayout{});
  net.weights.setConstant(0.7);
  update_weights(net, 0.0, Vec2(0.1, 0.2), 5000.0, 1e-3);
  EXPECT_TRUE((net.weights.array() == 0.7).all());
}

TEST(UpdateWeights, UnitDriveAtCenter) {
  RbfNetwork net = make_network(NetworkLayout{});
  const Vec2 x = net.centers[2];
  update_weights(net, 1.0, x, 5000.0, 1e-3);
  EXPECT_NEAR(net.weights[2], 5.0, 1e-12);
}

TEST(UpdateWeights, StepIsParallelToActivation) {
  Gen gen(42);
  for (int k = 0; k < 200; ++k) {
    RbfNetwork net = make_network(NetworkLayout{});
    const Eigen::VectorXd before = Eigen::VectorXd::Random(5);
    net.weights = before;
    const Vec2 x = gen.vec2(3.0);
    update_weights(net, gen.uniform(-10, 10), x, gen.uniform(1, 5000), 1e-3);
    const Eigen::VectorXd step = net.weights - before;
    const Eigen::VectorXd h = rbf_activation(x, net);
    // Parallel vectors: the component orthogonal to h vanishes.
    const Eigen::VectorXd residual = step - h * (h.dot(step) / h.squaredNorm());
    ASSERT_LE(residual.norm(), 1e-14 * (1.0 + step.norm())) << "case " << k;
  }
}

// ------------------------------------------------------------ Lyapunov matrix

TEST(SolveLyapunov, ResidualVanishes) {
  Gen gen(43);
  for (int k = 0; k < 500; ++k) {
    const double kp = gen.uniform(0.1, 2000.0);
    const double kd = gen.uniform(0.1, 300.0);
    const double q1 = gen.uniform(0.01, 10.0), q2 = gen.uniform(0.01, 10.0);
    const double q12 = gen.uniform(-0.5, 0.5) * std::sqrt(q1 * q2);
    Mat2 q;
    q << q1, q12, q12, q2;
    const Mat2 a = error_dynamics_matrix(kp, kd);
    const Mat2 p = solve_lyapunov(a, q);
    const Mat2 r = a.transpose() * p + p * a + q;
    const double scale = 1.0 + p.cwiseAbs().maxCoeff() * (kp + kd);
    ASSERT_LE(r.cwiseAbs().maxCoeff(), 1e-10 * scale) << "case " << k;
    ASSERT_EQ(p(0, 1), p(1, 0));
    ASSERT_GT(p.determinant(), 0.0);
    ASSERT_GT(p(0, 0), 0.0);
  }
}

TEST(Finalize, DefaultGainsProducePositiveDefiniteP) {
  const ControllerGains g = finalized_gains();
  for (const Mat2& p : g.P) {
    Eigen::SelfAdjointEigenSolver<Mat2> eig(p);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Finalize, NamesTheOffendingGain) {
  ControllerGains g;
  g.k_R0 = -1.0;
  try {
    finalize(g);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("gains.k_R0"), std::string::npos);
  }
}

TEST(Finalize, RejectsLargeCableCoupling) {
  ControllerGains g;
  g.c_q = 100.0;
  EXPECT_THROW(finalize(g), ConfigError);
}

TEST(Finalize, RejectsIndefiniteQ) {
  ControllerGains g;
  g.Q[1] << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(finalize(g), ConfigError);
}

// -------------------------------------------------------- first-level control

TEST(TranslationalControl, GravityFeedforward) {
  const ControllerGains g = finalized_gains();
  const Vec3 u = translational_control(PayloadErrors{}, Setpoint{}, Vec3(1.0, 2.0, 3.0),
                                       Vec3::Zero(), g, 9.81);
  EXPECT_EQ(u, Vec3(0.0, 0.0, 3.0 * 9.81));
}

TEST(TranslationalControl, SingleAxisProportionalTerm) {
  const ControllerGains g = finalized_gains();
  PayloadErrors e;
  e.position = Vec3::UnitX();
  const Vec3 u = translational_control(e, Setpoint{}, Vec3(1.5, 1.0, 1.0), Vec3::Zero(), g, 9.81);
  EXPECT_DOUBLE_EQ(u.x(), -1.5 * g.kp.x());
}

TEST(TranslationalControl, MatchesVectorTranscription) {
  Gen gen(44);
  const ControllerGains g = finalized_gains();
  for (int k = 0; k < 500; ++k) {
    PayloadErrors e;
    e.position = gen.vec3();
    e.velocity = gen.vec3();
    Setpoint sp;
    sp.acceleration = gen.vec3(3.0);
    const Vec3 m = Vec3(gen.uniform(0.1, 6), gen.uniform(0.1, 6), gen.uniform(0.1, 6));
    const Vec3 phi = gen.vec3(2.0);
    const double grav = gen.uniform(9.0, 10.0);
    const Vec3 oracle = m.asDiagonal() *
                        (-(g.kp.asDiagonal() * e.position) - g.kd.asDiagonal() * e.velocity +
                         sp.acceleration + grav * Vec3::UnitZ() - phi);
    const Vec3 u = translational_control(e, sp, m, phi, g, grav);
    ASSERT_LE((u - oracle).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + oracle.norm()))
        << "case " << k;
  }
}

TEST(RotationalControl, PerfectTrackingIsZero) {
  const ControllerGains g = finalized_gains();
  const SystemState s = SystemState::hover(3);
  EXPECT_TRUE(rotational_control(PayloadErrors{}, s, Setpoint{}, Vec3::Ones(), Vec3::Zero(), g)
                  .isZero(0.0));
}

TEST(RotationalControl, SingleAxisProportionalTerm) {
  const ControllerGains g = finalized_gains();
  PayloadErrors e;
  e.attitude = Vec3::UnitZ();
  const SystemState s = SystemState::hover(3);
  const Vec3 u = rotational_control(e, s, Setpoint{}, Vec3(0.1, 0.2, 0.3), Vec3::Zero(), g);
  EXPECT_DOUBLE_EQ(u.z(), -0.3 * g.k_R0);
}

TEST(RotationalControl, MatchesMatrixTranscription) {
  Gen gen(45);
  const ControllerGains g = finalized_gains();
  for (int k = 0; k < 500; ++k) {
    SystemState s = SystemState::hover(3);
    s.attitude = gen.rotation();
    s.angular_velocity = gen.vec3();
    Setpoint sp;
    sp.attitude = gen.rotation();
    sp.angular_velocity = gen.vec3();
    sp.angular_acceleration = gen.vec3();
    const PayloadErrors e = payload_errors(sp.attitude, s.attitude, sp.angular_velocity,
                                           s.angular_velocity, Vec3::Zero(), Vec3::Zero(),
                                           Vec3::Zero(), Vec3::Zero());
    const Vec3 j = Vec3(gen.uniform(0.01, 1), gen.uniform(0.01, 1), gen.uniform(0.01, 1));
    const Vec3 phi = gen.vec3();
    const Mat3 rt_rd = s.attitude.transpose() * sp.attitude;
    const Vec3 oracle =
        j.asDiagonal() * (-g.k_R0 * e.attitude - g.k_Omega0 * e.angular_velocity -
                          hat(s.angular_velocity) * rt_rd * sp.angular_velocity +
                          rt_rd * sp.angular_acceleration - phi);
    const Vec3 u = rotational_control(e, s, sp, j, phi, g);
    ASSERT_LE((u - oracle).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + oracle.norm()))
        << "case " << k;
  }
}

// ------------------------------------------------------------ adaptive laws

TEST(BoundedEstimate, ZeroDriveBelowCapIsStill) {
  EXPECT_EQ(bounded_estimate_rate(2.0, 0.0, 0.01, 0.01, 6.0), 0.0);
  const ControllerGains g = finalized_gains();
  EXPECT_EQ(update_mass_estimate(2.0, 0.0, g, 6.0, 1e-3), 2.0);
  EXPECT_EQ(update_inertia_estimate(0.5, 0.0, g, 1.0, 1e-3), 0.5);
}

TEST(BoundedEstimate, AtCapIsPushedBack) {
  // s_m * m^2 / eta_m with m = 6, s_m = eta_m = 0.01.
  EXPECT_DOUBLE_EQ(bounded_estimate_rate(6.0, -3.0, 0.01, 0.01, 6.0), -0.01 * 36.0 / 0.01);
  EXPECT_DOUBLE_EQ(bounded_estimate_rate(6.0, 0.0, 0.01, 0.01, 6.0), -36.0);
  const ControllerGains g = finalized_gains();
  EXPECT_LT(update_mass_estimate(6.0, -1.0, g, 6.0, 1e-3), 6.0);
  EXPECT_LT(update_inertia_estimate(1.0, -1.0, g, 1.0, 1e-3), 1.0);
}

TEST(BoundedEstimate, PositiveDriveAlwaysDecreases) {
  Gen gen(46);
  for (int k = 0; k < 500; ++k) {
    const double m = gen.uniform(0.1, 10.0);
    const double s = gen.uniform(1e-6, 100.0);
    ASSERT_LT(bounded_estimate_rate(m, s, 0.01, 0.01, 6.0), 0.0) << "case " << k;
  }
}

TEST(BoundedEstimate, NegativeDriveBelowCapIncreases) {
  EXPECT_DOUBLE_EQ(bounded_estimate_rate(2.0, -0.5, 0.01, 0.01, 6.0), 4.0 / 0.01 * 0.5);
}

TEST(BoundedEstimate, FloorHolds) {
  const ControllerGains g = finalized_gains();
  EXPECT_EQ(update_mass_estimate(0.2, 1e6, g, 6.0, 1e-3), g.mass_floor);
  EXPECT_EQ(update_inertia_estimate(0.02, 1e6, g, 1.0, 1e-3), g.inertia_floor);
}

TEST(BoundedEstimate, ManyStepsStayAboveFloorAndNearCap) {
  // Random drive sequences; the estimate never drops under the floor and only
  // exceeds the cap by the step that crossed it.
  Gen gen(47);
  const ControllerGains g = finalized_gains();
  for (int k = 0; k < 100; ++k) {
    double m = gen.uniform(0.5, 5.0);
    for (int step = 0; step < 2000; ++step) {
      const double before = m;
      m = update_mass_estimate(m, gen.uniform(-2.0, 2.0), g, 6.0, 1e-3);
      ASSERT_GE(m, g.mass_floor);
      if (before > 6.0) ASSERT_LT(m, before + 1e-12) << "case " << k;
    }
  }
}

// ------------------------------------------------ integral compensation

TEST(DisturbanceEstimates, ZeroErrorsFreezeEstimates) {
  const Scenario sc = builtin_scenario("groupA");
  ControllerState cs = ControllerState::initial(sc.params, sc.network);
  cs.payload_force_estimate = Vec3(1, 2, 3);
  cs.quad_force_estimates[0] = Vec3(0, 0, 0.5);
  const ControllerState before = cs;
  const SystemState s = SystemState::hover(3);
  update_disturbance_estimates(cs, PayloadErrors{}, std::vector<CableErrors>(3), s,
                               sc.gains, sc.params, 1e-3);
  EXPECT_EQ(cs.payload_force_estimate, before.payload_force_estimate);
  EXPECT_EQ(cs.payload_moment_estimate, before.payload_moment_estimate);
  EXPECT_EQ(cs.quad_force_estimates[0], before.quad_force_estimates[0]);
}

TEST(DisturbanceEstimates, ConstantRateErrorIntegratesExactly) {
  const Scenario sc = builtin_scenario("groupA");
  ControllerState cs = ControllerState::initial(sc.params, sc.network);
  PayloadErrors e;
  e.angular_velocity = Vec3::UnitZ();
  const SystemState s = SystemState::hover(3);
  const double dt = 1e-3;
  const int steps = 2000;
  for (int k = 0; k < steps; ++k) {
    update_disturbance_estimates(cs, e, std::vector<CableErrors>(3), s, sc.gains,
                                 sc.params, dt);
  }
  const double expected =
      sc.gains.h_R0 / sc.params.reference_inertia(2, 2) * (steps * dt);
  EXPECT_NEAR(cs.payload_moment_estimate.z(), expected, 1e-12);
  EXPECT_EQ(cs.payload_moment_estimate.x(), 0.0);
}

TEST(DisturbanceEstimates, QuadUpdateLiesAlongCable) {
  Gen gen(48);
  const Scenario sc = builtin_scenario("groupA");
  for (int k = 0; k < 200; ++k) {
    ControllerState cs = ControllerState::initial(sc.params, sc.network);
    SystemState s = SystemState::hover(3);
    s.attitude = gen.rotation(0.5);
    std::vector<CableErrors> cables(3);
    for (std::size_t i = 0; i < 3; ++i) {
      s.cables[i].direction = gen.unit();
      cables[i].direction = gen.vec3();
      cables[i].angular_velocity = gen.vec3();
    }
    PayloadErrors e;
    e.position = gen.vec3();
    e.velocity = gen.vec3();
    e.angular_velocity = gen.vec3();
    update_disturbance_estimates(cs, e, cables, s, sc.gains, sc.params, 1e-3);
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec3& d = cs.quad_force_estimates[i];
      ASSERT_LE(project_perpendicular(s.cables[i].direction, d).norm(),
                1e-14 * (1.0 + d.norm()))
          << "case " << k;
    }
  }
}

TEST(FirstLevel, ZeroEstimatesPassThrough) {
  const Scenario sc = builtin_scenario("groupA");
  const ControllerState cs = ControllerState::initial(sc.params, sc.network);
  const auto [f, m] = first_level_control(Vec3(1, 2, 3), Vec3(4, 5, 6), cs,
                                          SystemState::hover(3), sc.params);
  EXPECT_EQ(f, Vec3(1, 2, 3));
  EXPECT_EQ(m, Vec3(4, 5, 6));
}

TEST(FirstLevel, PayloadForceEstimateIsSubtracted) {
  const Scenario sc = builtin_scenario("groupA");
  ControllerState cs = ControllerState::initial(sc.params, sc.network);
  cs.payload_force_estimate = Vec3::UnitX();
  const auto [f, m] = first_level_control(Vec3(1, 2, 3), Vec3::Zero(), cs,
                                          SystemState::hover(3), sc.params);
  EXPECT_EQ(f.x(), 0.0);
  EXPECT_EQ(f.tail<2>(), Vec2(2, 3));
}

TEST(FirstLevel, MatchesSummedTranscription) {
  Gen gen(49);
  const Scenario sc = builtin_scenario("groupA");
  for (int k = 0; k < 300; ++k) {
    ControllerState cs = ControllerState::initial(sc.params, sc.network);
    SystemState s = SystemState::hover(3);
    s.attitude = gen.rotation();
    cs.payload_force_estimate = gen.vec3();
    cs.payload_moment_estimate = gen.vec3();
    for (std::size_t i = 0; i < 3; ++i) {
      s.cables[i].direction = gen.unit();
      cs.quad_force_estimates[i] = gen.vec3();
    }
    const Vec3 ux = gen.vec3(10), ur = gen.vec3();
    Vec3 f = ux - cs.payload_force_estimate;
    Vec3 m = ur - cs.payload_moment_estimate;
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec3 q = s.cables[i].direction;
      const Vec3 par = q * q.transpose() * cs.quad_force_estimates[i];
      f -= par;
      m -= sc.params.quadrotors[i].attachment.cross(s.attitude.transpose() * par);
    }
    const auto [gf, gm] = first_level_control(ux, ur, cs, s, sc.params);
    ASSERT_LE((gf - f).cwiseAbs().maxCoeff(), 1e-12) << "case " << k;
    ASSERT_LE((gm - m).cwiseAbs().maxCoeff(), 1e-12) << "case " << k;
  }
}

// ---------------------------------------------------------- cable loop

TEST(FilteredRate, TimeConstantEqualToStepIsBackwardDifference) {
  Gen gen(50);
  for (int k = 0; k < 100; ++k) {
    const Vec3 prev = gen.vec3(), now = gen.vec3();
    const double dt = gen.uniform(1e-4, 1e-2);
    const FilteredRate f = filtered_rate(now, prev, dt, dt);
    ASSERT_LE((f.rate - (now - prev) / dt).cwiseAbs().maxCoeff(), 1e-9) << "case " << k;
    ASSERT_LE((f.next_filter - now).cwiseAbs().maxCoeff(), 1e-15) << "case " << k;
  }
}

TEST(FilteredRate, ConvergesOnRamp) {
  // A ramp of slope 3 is differentiated exactly once the filter settles.
  const double dt = 1e-3, tau = 0.01;
  Vec3 filter = Vec3::Zero();
  FilteredRate f;
  for (int k = 1; k <= 1000; ++k) {
    f = filtered_rate(Vec3::Constant(3.0 * k * dt), filter, tau, dt);
    filter = f.next_filter;
  }
  EXPECT_NEAR(f.rate.x(), 3.0, 1e-9);
}

TEST(DesiredDirection, OppositeToTension) {
  const DesiredDirection d =
      desired_cable_direction(Vec3(0, 0, 9.81), -Vec3::UnitZ(), false, 0.01, 1e-3, 1e-6);
  EXPECT_LE((d.direction - Vec3(0, 0, -1)).norm(), 1e-15);
  EXPECT_FALSE(d.held);
}

TEST(DesiredDirection, ZeroTensionHoldsPrevious) {
  const UnitVector prev = Vec3(0.6, 0.0, -0.8);
  const DesiredDirection d =
      desired_cable_direction(Vec3::Zero(), prev, true, 0.01, 1e-3, 1e-6);
  EXPECT_TRUE(d.held);
  EXPECT_EQ(d.direction, prev);
  EXPECT_TRUE(d.rate.isZero(0.0));
}

TEST(DesiredDirection, UnitNormAndTangentRate) {
  Gen gen(51);
  for (int k = 0; k < 1000; ++k) {
    const DesiredDirection d = desired_cable_direction(gen.vec3(30.0), gen.unit(), true,
                                                       0.01, 1e-3, 1e-6);
    ASSERT_NEAR(d.direction.norm(), 1.0, 1e-15) << "case " << k;
    ASSERT_NEAR(d.next_filter.norm(), 1.0, 1e-15) << "case " << k;
    ASSERT_LE(std::abs(d.rate.dot(d.direction)), 1e-12 * (1.0 + d.rate.norm()))
        << "case " << k;
  }
}

TEST(CableControl, PerfectTrackingNeedsNoNormalThrust) {
  const Scenario sc = builtin_scenario("groupA");
  const CableState cable;
  const CableErrors e = cable_errors(cable.direction, Vec3::Zero(), cable.direction,
                                     Vec3::Zero());
  const Vec3 u =
      cable_attitude_control(e, cable, Vec3::Zero(), Vec3::Zero(), 0, sc.gains, sc.params);
  EXPECT_TRUE(u.isZero(0.0));
}

TEST(CableControl, OutputIsNormalToCable) {
  Gen gen(52);
  const Scenario sc = builtin_scenario("groupA");
  for (int k = 0; k < 1000; ++k) {
    CableState cable;
    cable.direction = gen.unit();
    cable.angular_velocity = project_perpendicular(cable.direction, gen.vec3(3.0));
    const UnitVector qd = gen.unit();
    const CableErrors e = cable_errors(qd, project_perpendicular(qd, gen.vec3()),
                                       cable.direction, cable.angular_velocity);
    const Vec3 u = cable_attitude_control(e, cable, gen.vec3(), gen.vec3(10.0),
                                          static_cast<std::size_t>(k % 3), sc.gains,
                                          sc.params);
    ASSERT_LE(std::abs(u.dot(cable.direction)), 1e-10) << "case " << k;
  }
}

TEST(CableControl, DirectionErrorTerm) {
  const Scenario sc = builtin_scenario("groupA");
  const CableState cable;
  CableErrors e;
  e.direction = Vec3(0.1, 0.2, 0.0);
  const Vec3 u =
      cable_attitude_control(e, cable, Vec3::Zero(), Vec3::Zero(), 1, sc.gains, sc.params);
  const auto& quad = sc.params.quadrotors[1];
  const Vec3 expected =
      -sc.gains.k_q * quad.mass * quad.cable_length * cable.direction.cross(e.direction);
  EXPECT_LE((u - expected).norm(), 1e-13);
}

// ------------------------------------------------------- quadrotor attitude

TEST(AttitudeControl, HoverThrust) {
  const ControllerGains g = finalized_gains();
  const QuadrotorState quad;
  const Mat3 j = Vec3(0.02, 0.02, 0.04).asDiagonal();
  const AttitudeCommand cmd = quadrotor_attitude_control(
      Vec3(0, 0, 1.5 * 9.81), quad, Mat3::Identity(), Vec3::Zero(), true, g, j, 1e-3);
  EXPECT_DOUBLE_EQ(cmd.thrust, 1.5 * 9.81);
  EXPECT_LE(cmd.moment.norm(), 1e-12);
}

TEST(AttitudeControl, AlignedStaticBodyHasOnlyGyroscopicMoment) {
  Gen gen(53);
  const ControllerGains g = finalized_gains();
  const Mat3 j = Vec3(0.02, 0.03, 0.04).asDiagonal();
  for (int k = 0; k < 200; ++k) {
    QuadrotorState quad;
    const Vec3 u = gen.unit() * gen.uniform(1.0, 30.0);
    // Build the same desired frame the controller uses, then sit on it.
    const AttitudeCommand probe = quadrotor_attitude_control(
        u, quad, Mat3::Identity(), Vec3::Zero(), false, g, j, 1e-3);
    quad.attitude = probe.desired;
    const AttitudeCommand cmd = quadrotor_attitude_control(
        u, quad, probe.desired, Vec3::Zero(), false, g, j, 1e-3);
    ASSERT_NEAR(cmd.thrust, u.norm(), 1e-12 * u.norm()) << "case " << k;
    ASSERT_LE(cmd.moment.norm(), 1e-12) << "case " << k;
  }
}

TEST(AttitudeControl, MomentMatchesTranscription) {
  Gen gen(54);
  const ControllerGains g = finalized_gains();
  const double dt = 1e-3, tau = g.derivative_time_constant;
  for (int k = 0; k < 500; ++k) {
    const Mat3 j = Vec3(gen.uniform(0.01, 0.05), gen.uniform(0.01, 0.05),
                        gen.uniform(0.02, 0.08)).asDiagonal();
    QuadrotorState quad;
    quad.attitude = gen.rotation(1.0);
    quad.angular_velocity = gen.vec3(2.0);
    const Vec3 u = gen.unit() * gen.uniform(1.0, 30.0);
    const RotationMatrix filt = gen.rotation(0.2);
    const Vec3 rate_filt = gen.vec3();
    const AttitudeCommand cmd =
        quadrotor_attitude_control(u, quad, filt, rate_filt, true, g, j, dt);

    const Mat3 rd = cmd.desired;
    const Mat3 gap = filt.transpose() * rd;
    const Vec3 wd = vee(0.5 * (gap - gap.transpose())) / tau;
    const Vec3 wd_dot = (wd - rate_filt) / tau;
    const Mat3 r = quad.attitude;
    const Vec3 w = quad.angular_velocity;
    const Mat3 err = rd.transpose() * r - r.transpose() * rd;
    const Vec3 e_r = 0.5 * vee(err);
    const Vec3 e_w = w - r.transpose() * rd * wd;
    const Vec3 oracle = -g.k_R * e_r - g.k_Omega * e_w + w.cross(j * w) -
                        j * (w.cross(r.transpose() * rd * wd) - r.transpose() * rd * wd_dot);
    ASSERT_LE((cmd.moment - oracle).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + oracle.norm()))
        << "case " << k;
    ASSERT_NEAR(cmd.thrust, u.dot(r.col(2)), 1e-12 * u.norm()) << "case " << k;
    ASSERT_LE(orthogonality_residual(cmd.desired), 1e-14) << "case " << k;
    ASSERT_LE((cmd.desired.col(2) - u.normalized()).norm(), 1e-14) << "case " << k;
  }
}

// ------------------------------------------------------------- full cascade

struct HoverFixture {
  Scenario sc = builtin_scenario("groupA");
  SystemState state = SystemState::hover(3);
  CableAllocator allocator{sc.params};
};

TEST(StepController, HoverThrustBalancesWeight) {
  HoverFixture fx;
  const ControllerState cs = ControllerState::initial(fx.sc.params, fx.sc.network);
  const ControllerUpdate up = step_controller(fx.state, Setpoint{}, cs, fx.sc.gains,
                                              fx.sc.params, fx.allocator, 1e-3,
                                              ControlMode::kBaseline);
  double total = 0.0, weight = fx.sc.params.payload_mass;
  for (std::size_t i = 0; i < 3; ++i) {
    total += up.output.thrust[i];
    weight += fx.sc.params.quadrotors[i].mass;
  }
  EXPECT_NEAR(total, weight * fx.sc.params.gravity, 1e-6);
  EXPECT_EQ(up.diagnostics.compressed_cables, 0u);
}

TEST(StepController, ModesAgreeAtReferenceEstimates) {
  HoverFixture fx;
  Gen gen(55);
  for (int k = 0; k < 20; ++k) {
    SystemState s = fx.state;
    s.position = gen.vec3(0.1);
    s.velocity = gen.vec3(0.1);
    s.attitude = gen.rotation(0.1);
    s.angular_velocity = gen.vec3(0.1);
    const ControllerState cs = ControllerState::initial(fx.sc.params, fx.sc.network);
    const ControllerUpdate a = step_controller(s, Setpoint{}, cs, fx.sc.gains, fx.sc.params,
                                               fx.allocator, 1e-3, ControlMode::kAdaptive);
    const ControllerUpdate b = step_controller(s, Setpoint{}, cs, fx.sc.gains, fx.sc.params,
                                               fx.allocator, 1e-3, ControlMode::kBaseline);
    ASSERT_EQ(a.output.force, b.output.force) << "case " << k;
    ASSERT_EQ(a.output.moment, b.output.moment) << "case " << k;
    for (std::size_t i = 0; i < 3; ++i) {
      ASSERT_EQ(a.output.tension_desired[i], b.output.tension_desired[i]);
      ASSERT_EQ(a.output.thrust_vector[i], b.output.thrust_vector[i]);
      ASSERT_EQ(a.output.thrust[i], b.output.thrust[i]);
      ASSERT_EQ(a.output.quad_moment[i], b.output.quad_moment[i]);
    }
  }
}

TEST(StepController, BaselineFreezesAdaptiveState) {
  HoverFixture fx;
  SystemState s = fx.state;
  s.position = Vec3(0.1, -0.1, 0.0);
  s.angular_velocity = Vec3(0.1, 0.0, 0.2);
  const ControllerState cs = ControllerState::initial(fx.sc.params, fx.sc.network);
  const ControllerUpdate b = step_controller(s, Setpoint{}, cs, fx.sc.gains, fx.sc.params,
                                             fx.allocator, 1e-3, ControlMode::kBaseline);
  EXPECT_EQ(b.next.mass_estimate, cs.mass_estimate);
  EXPECT_EQ(b.next.inertia_estimate, cs.inertia_estimate);
  for (const auto& net : b.next.translational_nets) EXPECT_TRUE(net.weights.isZero(0.0));
  // Integral compensation stays on in both modes.
  EXPECT_NE(b.next.payload_force_estimate, cs.payload_force_estimate);
  const ControllerUpdate a = step_controller(s, Setpoint{}, cs, fx.sc.gains, fx.sc.params,
                                             fx.allocator, 1e-3, ControlMode::kAdaptive);
  EXPECT_FALSE(a.next.translational_nets[0].weights.isZero(0.0));
}

TEST(ControlMode, ParsesNames) {
  EXPECT_EQ(control_mode_from_string("adaptive"), ControlMode::kAdaptive);
  EXPECT_EQ(control_mode_from_string("baseline"), ControlMode::kBaseline);
  EXPECT_THROW(control_mode_from_string("pid"), ConfigError);
}

}  // namespace
}  // namespace cablelift
