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

#include "cablelift/disturbances.hpp"

#include <cmath>
#include <numbers>

#include "cablelift/errors.hpp"

namespace cablelift {

SignalSpec SignalSpec::constant(const Vec3& value, double start) {
  SignalSpec s;
  s.kind = SignalKind::kConstant;
  s.amplitude = value;
  s.start_time = start;
  return s;
}

SignalSpec SignalSpec::sinusoid(const Vec3& amplitude, const Vec3& frequency,
                                const Vec3& phase, double start) {
  SignalSpec s;
  s.kind = SignalKind::kSinusoid;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.phase = phase;
  s.start_time = start;
  return s;
}

SignalSpec SignalSpec::sum(std::vector<SignalSpec> terms, double start) {
  SignalSpec s;
  s.kind = SignalKind::kCompositeSum;
  s.terms = std::move(terms);
  s.start_time = start;
  return s;
}

void validate(const SignalSpec& spec, const std::string& field) {
  if (!spec.amplitude.allFinite() || !spec.frequency.allFinite() ||
      !spec.phase.allFinite()) {
    throw ConfigError(field + " has non-finite signal parameters");
  }
  if (!(std::isfinite(spec.start_time) && spec.start_time >= 0.0)) {
    throw ConfigError(field + ".start_s must be >= 0");
  }
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    validate(spec.terms[k], field + ".terms[" + std::to_string(k) + "]");
  }
}

Vec3 evaluate(const SignalSpec& spec, double t) {
  if (t < spec.start_time) return Vec3::Zero();
  Vec3 out = Vec3::Zero();
  switch (spec.kind) {
    case SignalKind::kZero:
      break;
    case SignalKind::kConstant:
      out = spec.amplitude;
      break;
    case SignalKind::kSinusoid:
      for (int j = 0; j < 3; ++j) {
        if (spec.amplitude[j] == 0.0) continue;
        out[j] = spec.amplitude[j] * std::sin(spec.frequency[j] * t + spec.phase[j]);
      }
      break;
    case SignalKind::kProductChirp:
      for (int j = 0; j < 3; ++j) {
        if (spec.amplitude[j] == 0.0) continue;
        const double arg = spec.frequency[j] * t + spec.phase[j];
        const double inner = spec.inner[static_cast<std::size_t>(j)] ==
                                     InnerFunction::kSin
                                 ? std::sin(arg)
                                 : std::cos(arg);
        out[j] = spec.amplitude[j] * std::sin(inner * t);
      }
      break;
    case SignalKind::kCompositeSum:
      for (const auto& term : spec.terms) out += evaluate(term, t);
      break;
  }
  return out;
}

Vec3 amplitude_bound(const SignalSpec& spec) {
  switch (spec.kind) {
    case SignalKind::kZero:
      return Vec3::Zero();
    case SignalKind::kCompositeSum: {
      Vec3 b = Vec3::Zero();
      for (const auto& term : spec.terms) b += amplitude_bound(term);
      return b;
    }
    default:
      return spec.amplitude.cwiseAbs();
  }
}

DisturbanceProfile DisturbanceProfile::zero(std::size_t n) {
  DisturbanceProfile p;
  p.quad_force.assign(n, SignalSpec::zero());
  p.quad_moment.assign(n, SignalSpec::zero());
  return p;
}

void validate(const DisturbanceProfile& p, std::size_t n) {
  if (p.quad_force.size() != n || p.quad_moment.size() != n) {
    throw ConfigError("disturbances: quadrotor channel count must equal " +
                      std::to_string(n));
  }
  validate(p.payload_force, "disturbances.payload_force_N");
  validate(p.payload_moment, "disturbances.payload_moment_Nm");
  for (std::size_t i = 0; i < n; ++i) {
    validate(p.quad_force[i], "disturbances.quad_force_N[" + std::to_string(i) + "]");
    validate(p.quad_moment[i], "disturbances.quad_moment_Nm[" + std::to_string(i) + "]");
  }
  validate(p.phi_x, "disturbances.phi_x_mps2");
  validate(p.phi_R, "disturbances.phi_R_radps2");
}

DisturbanceEvaluation eval(const DisturbanceProfile& profile, double t,
                           const SystemState& state) {
  const std::size_t n = profile.quad_force.size();
  DisturbanceEvaluation e;
  e.sample = DisturbanceSample::zero(n);
  e.sample.payload_force = evaluate(profile.payload_force, t);
  e.sample.payload_moment = evaluate(profile.payload_moment, t);
  for (std::size_t i = 0; i < n; ++i) {
    e.sample.quad_force[i] = evaluate(profile.quad_force[i], t);
    e.sample.quad_moment[i] = evaluate(profile.quad_moment[i], t);
  }
  e.sample.decompose(state.cables);
  e.phi_x = evaluate(profile.phi_x, t);
  e.phi_R = evaluate(profile.phi_R, t);
  return e;
}

SignalSpec group_b_payload_force() {
  constexpr double pi = std::numbers::pi;
  SignalSpec chirp;
  chirp.kind = SignalKind::kProductChirp;
  chirp.amplitude = Vec3(15.0, 15.0, 0.0);
  chirp.frequency = Vec3(0.02, 0.04, 0.0);
  chirp.phase = Vec3(0.0, pi, 0.0);
  chirp.inner = {InnerFunction::kSin, InnerFunction::kCos, InnerFunction::kSin};
  const SignalSpec heave =
      SignalSpec::sinusoid(Vec3(0.0, 0.0, -25.0), Vec3::Constant(1.5), Vec3::Zero());
  const SignalSpec drift = SignalSpec::sinusoid(Vec3(1.0, 5.0, 1.0), Vec3::Constant(0.5),
                                                Vec3::Constant(pi / 2.0));
  return SignalSpec::sum({chirp, heave, drift});
}

SignalSpec group_c_payload_moment() {
  return SignalSpec::sinusoid(Vec3(10.0, 0.0, 0.0), Vec3::Constant(1.0),
                              Vec3::Constant(-5.0), 5.0);
}

SignalSpec background_signal(double amplitude) {
  return SignalSpec::sinusoid(Vec3::Constant(amplitude), Vec3(1.1, 1.3, 1.7),
                              Vec3::Zero());
}

DisturbanceProfile full_disturbances(std::size_t n) {
  DisturbanceProfile p = DisturbanceProfile::zero(n);
  p.payload_force = background_signal(1.0);
  p.payload_moment = background_signal(0.1);
  for (std::size_t i = 0; i < n; ++i) {
    p.quad_force[i] = background_signal(1.0);
    p.quad_moment[i] = background_signal(0.1);
  }
  return p;
}

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::kZero: return "zero";
    case SignalKind::kConstant: return "constant";
    case SignalKind::kSinusoid: return "sinusoid";
    case SignalKind::kProductChirp: return "product-chirp";
    case SignalKind::kCompositeSum: return "composite-sum";
  }
  return "zero";
}

SignalKind signal_kind_from_string(const std::string& name) {
  if (name == "zero") return SignalKind::kZero;
  if (name == "constant") return SignalKind::kConstant;
  if (name == "sinusoid") return SignalKind::kSinusoid;
  if (name == "product-chirp") return SignalKind::kProductChirp;
  if (name == "composite-sum") return SignalKind::kCompositeSum;
  throw ConfigError("unknown signal kind '" + name + "'");
}

}  // namespace cablelift
