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

// Time-parameterized disturbance waveforms for the six disturbance inputs of
// the plant and for the (normally unknown) augmented dynamics phi_x, phi_R.

#ifndef CABLELIFT_DISTURBANCES_HPP_
#define CABLELIFT_DISTURBANCES_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cablelift/dynamics.hpp"
#include "cablelift/geometry.hpp"

namespace cablelift {

enum class SignalKind { kZero, kConstant, kSinusoid, kProductChirp, kCompositeSum };
enum class InnerFunction { kSin, kCos };

// Per-axis signal, zero for t < start_time:
//   constant       A_j
//   sinusoid       A_j sin(w_j t + p_j)
//   product-chirp  A_j sin(inner_j(w_j t + p_j) * t)
//   composite-sum  sum of terms (each with its own start time)
struct SignalSpec {
  SignalKind kind = SignalKind::kZero;
  Vec3 amplitude = Vec3::Zero();
  Vec3 frequency = Vec3::Zero();  // rad/s
  Vec3 phase = Vec3::Zero();      // rad
  std::array<InnerFunction, 3> inner{InnerFunction::kSin, InnerFunction::kSin,
                                     InnerFunction::kSin};
  double start_time = 0.0;        // s
  std::vector<SignalSpec> terms;

  static SignalSpec zero() { return {}; }
  static SignalSpec constant(const Vec3& value, double start = 0.0);
  static SignalSpec sinusoid(const Vec3& amplitude, const Vec3& frequency,
                             const Vec3& phase, double start = 0.0);
  static SignalSpec sum(std::vector<SignalSpec> terms, double start = 0.0);
};

// Throws ConfigError on non-finite parameters or negative start time.
void validate(const SignalSpec& spec, const std::string& field);

Vec3 evaluate(const SignalSpec& spec, double t);

// Largest |component| the signal can reach (sum of amplitudes), per axis.
Vec3 amplitude_bound(const SignalSpec& spec);

struct DisturbanceProfile {
  SignalSpec payload_force;               // Delta_x0 (N)
  SignalSpec payload_moment;              // Delta_R0 (N m)
  std::vector<SignalSpec> quad_force;     // Delta_xi (N)
  std::vector<SignalSpec> quad_moment;    // Delta_Ri (N m)
  SignalSpec phi_x;                       // true augmented dynamics (m/s^2)
  SignalSpec phi_R;                       // (rad/s^2)

  static DisturbanceProfile zero(std::size_t n);
};

void validate(const DisturbanceProfile& profile, std::size_t n);

struct DisturbanceEvaluation {
  DisturbanceSample sample;
  Vec3 phi_x = Vec3::Zero();
  Vec3 phi_R = Vec3::Zero();
};

// Pure in (t, cable directions).
DisturbanceEvaluation eval(const DisturbanceProfile& profile, double t,
                           const SystemState& state);

// Group B extra payload force:
//   [15 sin(sin(0.02t) t) + cos(0.5t),
//    15 sin(cos(0.04t + pi) t) + 5 cos(0.5t),
//   -25 sin(1.5t) + cos(0.5t)]  (N)
SignalSpec group_b_payload_force();

// Group C extra payload moment: [10 sin(t - 5), 0, 0] N m from t = 5 s.
SignalSpec group_c_payload_moment();

// Background disturbance applied on every channel: per-axis sinusoids at
// 1.1, 1.3, 1.7 rad/s with the given amplitude.
SignalSpec background_signal(double amplitude);

// Background on all six channels: 1 N / 0.1 N m.
DisturbanceProfile full_disturbances(std::size_t n);

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

}  // namespace cablelift

#endif  // CABLELIFT_DISTURBANCES_HPP_
