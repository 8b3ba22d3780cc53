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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "cablelift/errors.hpp"
#include "cablelift/scenario.hpp"

namespace cablelift {
namespace {

StateVector scalar(double v) { return StateVector::Constant(1, v); }

double integrate_decay(int steps) {
  const DerivativeFunction f = [](double, const StateVector& y) { return StateVector(-y); };
  const double dt = 1.0 / steps;
  StateVector y = scalar(1.0);
  for (int k = 0; k < steps; ++k) y = rk3_step(f, y, k * dt, dt);
  return y[0];
}

TEST(Rk3, ZeroFieldLeavesStateUnchanged) {
  const DerivativeFunction f = [](double, const StateVector& y) {
    return StateVector::Zero(y.size());
  };
  const StateVector y = StateVector::LinSpaced(4, -1.0, 2.0);
  EXPECT_EQ(rk3_step(f, y, 0.0, 0.1), y);
}

TEST(Rk3, HandEvaluatedGrowthStep) {
  // Stages 1, 1.05, 1.07875 combine with weights 2/9, 3/9, 4/9.
  const DerivativeFunction f = [](double, const StateVector& y) { return y; };
  const double expected = 1.0 + 0.1 * (2.0 + 3.0 * 1.05 + 4.0 * 1.07875) / 9.0;
  const double got = rk3_step(f, scalar(1.0), 0.0, 0.1)[0];
  EXPECT_NEAR(got, expected, 1e-15);
  // For a linear field the step equals the cubic Taylor polynomial.
  EXPECT_NEAR(got, 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0, 1e-15);
  // Local error is fourth order in dt.
  EXPECT_LT(std::abs(got - std::exp(0.1)), 1e-5);
  EXPECT_GT(std::abs(got - std::exp(0.1)), 1e-7);
}

TEST(Rk3, ThirdOrderGlobalConvergence) {
  double last = std::abs(integrate_decay(10) - std::exp(-1.0));
  for (int steps = 20; steps <= 320; steps *= 2) {
    const double err = std::abs(integrate_decay(steps) - std::exp(-1.0));
    const double ratio = last / err;
    EXPECT_GE(ratio, 7.0) << steps << " steps";
    EXPECT_LE(ratio, 9.0) << steps << " steps";
    last = err;
  }
}

TEST(Rk3, TimeArgumentReachesStages) {
  // y' = t integrates exactly: y(dt) = dt^2 / 2.
  const DerivativeFunction f = [](double t, const StateVector&) { return scalar(t); };
  EXPECT_NEAR(rk3_step(f, scalar(0.0), 1.0, 0.2)[0], 1.0 * 0.2 + 0.02, 1e-15);
}

TEST(Rk3, NonFiniteStageIsDivergence) {
  const DerivativeFunction f = [](double t, const StateVector& y) {
    return t > 0.0 ? StateVector::Constant(y.size(), std::numeric_limits<double>::infinity())
                   : StateVector::Zero(y.size());
  };
  try {
    rk3_step(f, scalar(1.0), 0.0, 0.1);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_DOUBLE_EQ(e.time(), 0.05);
  }
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig c;
  EXPECT_NO_THROW(validate(c));
  c.dt = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = IntegratorConfig{};
  c.dt = 0.02;
  EXPECT_THROW(validate(c), ConfigError);
  c = IntegratorConfig{};
  c.log_interval = 0.0105;
  EXPECT_THROW(validate(c), ConfigError);
  c = IntegratorConfig{};
  c.duration = -1.0;
  EXPECT_THROW(validate(c), ConfigError);
  c.duration = 0.0;
  EXPECT_NO_THROW(validate(c));
}

SimulationInputs hover_inputs(double duration) {
  Scenario sc = builtin_scenario("groupA");
  sc.mode = ControlMode::kBaseline;
  sc.disturbances = DisturbanceProfile::zero(3);
  sc.integrator.duration = duration;
  validate(sc);
  return simulation_inputs(sc);
}

TEST(Simulate, ZeroDurationLogsInitialRecordOnly) {
  int records = 0;
  const SimulationSummary s =
      simulate(hover_inputs(0.0), [&](const StepRecord& r) {
        ++records;
        EXPECT_EQ(r.time, 0.0);
      });
  EXPECT_EQ(records, 1);
  EXPECT_EQ(s.steps, 0u);
  EXPECT_FALSE(s.diverged);
}

TEST(Simulate, EquilibriumHoverHolds) {
  double drift = 0.0, attitude = 0.0;
  int records = 0;
  const SimulationSummary s = simulate(hover_inputs(10.0), [&](const StepRecord& r) {
    drift = std::max(drift, r.state.position.norm());
    attitude = std::max(attitude, r.diagnostics.payload.attitude.norm());
    ++records;
  });
  EXPECT_FALSE(s.diverged);
  EXPECT_EQ(records, 1001);
  EXPECT_LE(drift, 1e-4);
  EXPECT_LE(attitude, 1e-6);
  EXPECT_LE(s.max_rotation_residual, 1e-9);
  EXPECT_LE(s.max_direction_residual, 1e-9);
}

TEST(Simulate, IsDeterministic) {
  Scenario sc = builtin_scenario("groupB");
  sc.integrator.duration = 1.0;
  validate(sc);
  const SimulationInputs in = simulation_inputs(sc);
  std::vector<double> a, b;
  simulate(in, [&](const StepRecord& r) { a.push_back(r.state.position.x()); });
  simulate(in, [&](const StepRecord& r) { b.push_back(r.state.position.x()); });
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) ASSERT_EQ(a[k], b[k]) << "record " << k;
}

TEST(Simulate, RunawayStateIsReportedNotThrown) {
  SimulationInputs in = hover_inputs(1.0);
  in.initial.angular_velocity = Vec3(0.0, 0.0, 5e6);
  const SimulationSummary s = simulate(in, nullptr);
  EXPECT_TRUE(s.diverged);
  EXPECT_FALSE(s.divergence_reason.empty());
  EXPECT_TRUE(std::isfinite(s.divergence_time));
}

}  // namespace
}  // namespace cablelift
