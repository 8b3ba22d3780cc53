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

#include "cablelift/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "cablelift/errors.hpp"

namespace cablelift {
namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field + " must be finite");
  return v;
}

Vec3 as_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(field + " must be an array of 3 numbers");
  }
  Vec3 v;
  for (std::size_t k = 0; k < 3; ++k) v[k] = as_number(j[k], indexed(field, k));
  return v;
}

// Either three diagonal entries or a 3x3 row-major nested array.
Mat3 as_mat3(const json& j, const std::string& field) {
  if (j.is_array() && j.size() == 3 && j[0].is_number()) {
    return as_vec3(j, field).asDiagonal();
  }
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(field + " must be 3 diagonal entries or a 3x3 array");
  }
  Mat3 m;
  for (std::size_t r = 0; r < 3; ++r) m.row(r) = as_vec3(j[r], indexed(field, r));
  return m;
}

Mat2 as_mat2(const json& j, const std::string& field) {
  if (j.is_array() && j.size() == 2 && j[0].is_number()) {
    return Vec2(as_number(j[0], indexed(field, 0)), as_number(j[1], indexed(field, 1)))
        .asDiagonal();
  }
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(field + " must be 2 diagonal entries or a 2x2 array");
  }
  Mat2 m;
  for (std::size_t r = 0; r < 2; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != 2) {
      throw ConfigError(indexed(field, r) + " must be an array of 2 numbers");
    }
    for (std::size_t c = 0; c < 2; ++c) {
      m(r, c) = as_number(row[c], indexed(indexed(field, r), c));
    }
  }
  return m;
}

// Reads obj[key] into `out` when present. When absent, throws if required.
class Reader {
 public:
  Reader(const json& obj, std::string path, bool required)
      : obj_(obj), path_(std::move(path)), required_(required) {
    if (!obj_.is_object()) throw ConfigError(path_ + " must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& at(const std::string& key) const { return obj_.at(key); }
  std::string field(const std::string& key) const { return join(path_, key); }

  template <typename Fn>
  bool read(const std::string& key, Fn&& fn) const {
    if (!obj_.contains(key)) {
      if (required_) throw ConfigError("missing field " + field(key));
      return false;
    }
    fn(obj_.at(key), field(key));
    return true;
  }

  void number(const std::string& key, double& out) const {
    read(key, [&](const json& j, const std::string& f) { out = as_number(j, f); });
  }
  void vec3(const std::string& key, Vec3& out) const {
    read(key, [&](const json& j, const std::string& f) { out = as_vec3(j, f); });
  }
  void mat3(const std::string& key, Mat3& out) const {
    read(key, [&](const json& j, const std::string& f) { out = as_mat3(j, f); });
  }

 private:
  const json& obj_;
  std::string path_;
  bool required_;
};

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json mat_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return rows;
}

json mat2_json(const Mat2& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

// ---- signals ----

SignalSpec preset_signal(const std::string& name, const std::string& field) {
  if (name == "group_b_force") return group_b_payload_force();
  if (name == "group_c_moment") return group_c_payload_moment();
  if (name == "background_force") return background_signal(1.0);
  if (name == "background_moment") return background_signal(0.1);
  throw ConfigError(field + ".preset: unknown preset '" + name + "'");
}

SignalSpec parse_signal(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field + " must be an object");
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw ConfigError(field + ".preset must be a string");
    return preset_signal(j.at("preset").get<std::string>(), field);
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("missing field " + field + ".kind");
  }
  SignalSpec s;
  try {
    s.kind = signal_kind_from_string(j.at("kind").get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(field + ".kind: " + e.what());
  }
  if (j.contains("start_s")) s.start_time = as_number(j.at("start_s"), field + ".start_s");
  const Reader r(j, field, true);
  switch (s.kind) {
    case SignalKind::kZero:
      break;
    case SignalKind::kConstant:
      r.vec3("value", s.amplitude);
      break;
    case SignalKind::kSinusoid:
    case SignalKind::kProductChirp:
      r.vec3("amplitude", s.amplitude);
      r.vec3("frequency_radps", s.frequency);
      if (j.contains("phase_rad")) s.phase = as_vec3(j.at("phase_rad"), field + ".phase_rad");
      if (s.kind == SignalKind::kProductChirp && j.contains("inner")) {
        const json& inner = j.at("inner");
        if (!inner.is_array() || inner.size() != 3) {
          throw ConfigError(field + ".inner must be an array of 3 of \"sin\"/\"cos\"");
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const std::string v = inner[k].is_string() ? inner[k].get<std::string>() : "";
          if (v == "sin") {
            s.inner[k] = InnerFunction::kSin;
          } else if (v == "cos") {
            s.inner[k] = InnerFunction::kCos;
          } else {
            throw ConfigError(indexed(field + ".inner", k) + " must be \"sin\" or \"cos\"");
          }
        }
      }
      break;
    case SignalKind::kCompositeSum: {
      r.read("terms", [&](const json& terms, const std::string& f) {
        if (!terms.is_array()) throw ConfigError(f + " must be an array");
        for (std::size_t k = 0; k < terms.size(); ++k) {
          s.terms.push_back(parse_signal(terms[k], indexed(f, k)));
        }
      });
      break;
    }
  }
  validate(s, field);
  return s;
}

json signal_json(const SignalSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  if (s.start_time != 0.0) j["start_s"] = s.start_time;
  switch (s.kind) {
    case SignalKind::kZero:
      break;
    case SignalKind::kConstant:
      j["value"] = vec_json(s.amplitude);
      break;
    case SignalKind::kSinusoid:
    case SignalKind::kProductChirp:
      j["amplitude"] = vec_json(s.amplitude);
      j["frequency_radps"] = vec_json(s.frequency);
      j["phase_rad"] = vec_json(s.phase);
      if (s.kind == SignalKind::kProductChirp) {
        json inner = json::array();
        for (auto f : s.inner) inner.push_back(f == InnerFunction::kSin ? "sin" : "cos");
        j["inner"] = inner;
      }
      break;
    case SignalKind::kCompositeSum: {
      json terms = json::array();
      for (const auto& t : s.terms) terms.push_back(signal_json(t));
      j["terms"] = terms;
      break;
    }
  }
  return j;
}

// One spec for every quadrotor, or an array with one spec per quadrotor.
void parse_channel(const json& j, const std::string& field, std::size_t n,
                   std::vector<SignalSpec>& out) {
  if (j.is_array()) {
    if (j.size() != n) {
      throw ConfigError(field + " must list one signal per quadrotor (" +
                        std::to_string(n) + ")");
    }
    out.clear();
    for (std::size_t i = 0; i < n; ++i) out.push_back(parse_signal(j[i], indexed(field, i)));
  } else {
    out.assign(n, parse_signal(j, field));
  }
}

// ---- sections ----

void parse_plant(const json& j, bool required, SystemParams& p) {
  const Reader r(j, "plant", required);
  r.number("payload_mass_kg", p.payload_mass);
  r.mat3("payload_inertia_kgm2", p.payload_inertia);
  r.number("gravity_mps2", p.gravity);
  r.read("quadrotors", [&](const json& quads, const std::string& f) {
    if (!quads.is_array() || quads.empty()) {
      throw ConfigError(f + " must be a non-empty array");
    }
    std::vector<QuadrotorParams> out;
    for (std::size_t i = 0; i < quads.size(); ++i) {
      QuadrotorParams q;
      const Reader qr(quads[i], indexed(f, i), true);
      qr.number("mass_kg", q.mass);
      qr.mat3("inertia_kgm2", q.inertia);
      qr.number("cable_length_m", q.cable_length);
      qr.vec3("attachment_m", q.attachment);
      out.push_back(q);
    }
    p.quadrotors = std::move(out);
  });
}

void parse_reference(const json& j, bool required, SystemParams& p) {
  const Reader r(j, "reference", required);
  r.number("payload_mass_kg", p.reference_mass);
  r.mat3("payload_inertia_kgm2", p.reference_inertia);
  r.number("max_payload_mass_kg", p.max_mass);
  r.mat3("max_payload_inertia_kgm2", p.max_inertia);
}

void parse_gains(const json& j, bool required, ControllerGains& g) {
  const Reader r(j, "gains", required);
  r.vec3("k_p", g.kp);
  r.vec3("k_d", g.kd);
  r.number("k_R0", g.k_R0);
  r.number("k_Omega0", g.k_Omega0);
  r.number("k_q", g.k_q);
  r.number("k_omega", g.k_omega);
  r.number("k_R", g.k_R);
  r.number("k_Omega", g.k_Omega);
  r.number("c_q", g.c_q);
  r.number("h_x0", g.h_x0);
  r.number("h_R0", g.h_R0);
  r.number("h_xi", g.h_xi);
  r.number("eta_m", g.eta_m);
  r.number("eta_J", g.eta_J);
  r.number("s_m", g.s_m);
  r.number("s_J", g.s_J);
  r.vec3("gamma_x", g.gamma_x);
  r.vec3("gamma_R", g.gamma_R);
  r.read("Q", [&](const json& q, const std::string& f) {
    if (!q.is_array() || q.size() != 3) throw ConfigError(f + " must list 3 matrices");
    for (std::size_t k = 0; k < 3; ++k) g.Q[k] = as_mat2(q[k], indexed(f, k));
  });
  const Reader opt(j, "gains", false);
  opt.number("mass_floor_kg", g.mass_floor);
  opt.number("inertia_floor_kgm2", g.inertia_floor);
  opt.number("tension_epsilon_N", g.tension_epsilon);
  opt.number("thrust_epsilon_N", g.thrust_epsilon);
  opt.number("derivative_time_constant_s", g.derivative_time_constant);
}

void parse_network(const json& j, NetworkLayout& n) {
  const Reader r(j, "network", false);
  r.read("neurons", [&](const json& v, const std::string& f) {
    if (!v.is_number_integer()) throw ConfigError(f + " must be an integer");
    n.neurons = v.get<int>();
  });
  r.number("center_min", n.center_min);
  r.number("center_max", n.center_max);
  r.number("width_min", n.width_min);
  r.number("width_max", n.width_max);
}

void parse_disturbances(const json& j, std::size_t n, DisturbanceProfile& d) {
  const Reader r(j, "disturbances", false);
  if (d.quad_force.size() != n) d.quad_force.assign(n, SignalSpec::zero());
  if (d.quad_moment.size() != n) d.quad_moment.assign(n, SignalSpec::zero());
  r.read("payload_force_N", [&](const json& v, const std::string& f) {
    d.payload_force = parse_signal(v, f);
  });
  r.read("payload_moment_Nm", [&](const json& v, const std::string& f) {
    d.payload_moment = parse_signal(v, f);
  });
  r.read("quad_force_N", [&](const json& v, const std::string& f) {
    parse_channel(v, f, n, d.quad_force);
  });
  r.read("quad_moment_Nm", [&](const json& v, const std::string& f) {
    parse_channel(v, f, n, d.quad_moment);
  });
  r.read("phi_x_mps2", [&](const json& v, const std::string& f) {
    d.phi_x = parse_signal(v, f);
  });
  r.read("phi_R_radps2", [&](const json& v, const std::string& f) {
    d.phi_R = parse_signal(v, f);
  });
}

void parse_setpoint(const json& j, SetpointSpec& s) {
  const Reader r(j, "setpoint", false);
  r.read("kind", [&](const json& v, const std::string& f) {
    const std::string k = v.is_string() ? v.get<std::string>() : "";
    if (k == "hold") {
      s.kind = SetpointKind::kHold;
    } else if (k == "figure_eight") {
      s.kind = SetpointKind::kFigureEight;
    } else {
      throw ConfigError(f + " must be \"hold\" or \"figure_eight\"");
    }
  });
  r.vec3("position_m", s.position);
  r.number("amplitude_m", s.amplitude);
  r.number("period_s", s.period);
}

void parse_integrator(const json& j, IntegratorConfig& c) {
  const Reader r(j, "integrator", false);
  r.number("dt_s", c.dt);
  r.number("duration_s", c.duration);
  r.number("log_interval_s", c.log_interval);
  r.read("renormalize", [&](const json& v, const std::string& f) {
    if (!v.is_boolean()) throw ConfigError(f + " must be true or false");
    c.renormalize = v.get<bool>();
  });
}

void parse_initial(const json& j, InitialCondition& c) {
  const Reader r(j, "initial", false);
  r.vec3("payload_position_m", c.position);
  r.vec3("payload_velocity_mps", c.velocity);
  r.vec3("payload_rotation_vector_rad", c.rotation_vector);
  r.vec3("payload_angular_velocity_radps", c.angular_velocity);
  r.number("perturbation_scale", c.perturbation_scale);
}

void parse_metrics(const json& j, Scenario& s) {
  const Reader r(j, "metrics", false);
  r.number("steady_state_start_s", s.steady_state_start);
  r.read("comparison", [&](const json& v, const std::string& f) {
    const std::string k = v.is_string() ? v.get<std::string>() : "";
    if (k == "position") {
      s.comparison = ComparisonMetric::kPosition;
    } else if (k == "attitude") {
      s.comparison = ComparisonMetric::kAttitude;
    } else {
      throw ConfigError(f + " must be \"position\" or \"attitude\"");
    }
  });
}

// ---- built-ins ----

Scenario reference_defaults() {
  Scenario s;
  SystemParams& p = s.params;
  p.payload_mass = 1.0;
  p.payload_inertia = Vec3(1.0 / 8.0, 1.0 / 8.0, 1.0 / 6.0).asDiagonal();
  p.quadrotors = default_quadrotors();
  p.gravity = 9.81;
  p.reference_mass = 1.0;
  p.reference_inertia = p.payload_inertia;
  p.max_mass = 6.0;
  p.max_inertia = Vec3(0.75, 0.75, 1.0).asDiagonal();
  s.gains = ControllerGains{};
  s.network = NetworkLayout{};
  s.disturbances = full_disturbances(p.count());
  s.setpoint = SetpointSpec{};
  s.integrator = IntegratorConfig{};
  s.mode = ControlMode::kAdaptive;
  s.assumptions = {
      "station-keeping setpoint: payload held at the origin with identity attitude",
      "quadrotor mass, inertia, cable length and attachment points are defaults",
      "background disturbance: per-axis sinusoids, 1 N / 0.1 N m at 1.1, 1.3, 1.7 rad/s "
      "on every channel",
      "simulation duration 30 s at dt = 1 ms",
  };
  return s;
}

}  // namespace

Setpoint SetpointSpec::at(double t) const {
  Setpoint sp;
  sp.position = position;
  if (kind == SetpointKind::kFigureEight) {
    const double w = 2.0 * kPi / period;
    const double a = amplitude;
    sp.position += Vec3(a * std::sin(w * t), 0.5 * a * std::sin(2.0 * w * t), 0.0);
    sp.velocity = Vec3(a * w * std::cos(w * t), a * w * std::cos(2.0 * w * t), 0.0);
    sp.acceleration = Vec3(-a * w * w * std::sin(w * t),
                           -2.0 * a * w * w * std::sin(2.0 * w * t), 0.0);
  }
  return sp;
}

std::vector<QuadrotorParams> default_quadrotors() {
  std::vector<QuadrotorParams> quads(3);
  for (std::size_t i = 0; i < quads.size(); ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / 3.0;
    quads[i].attachment = Vec3(0.5 * std::cos(angle), 0.5 * std::sin(angle), 0.0);
  }
  return quads;
}

bool is_builtin_scenario(const std::string& name) {
  return name == "groupA" || name == "groupB" || name == "groupC";
}

Scenario builtin_scenario(const std::string& name) {
  if (!is_builtin_scenario(name)) {
    throw ConfigError("unknown scenario '" + name + "' (expected groupA, groupB or groupC)");
  }
  Scenario s = reference_defaults();
  s.label = name;
  if (name != "groupA") {
    s.params.payload_mass = 5.0;
    s.params.payload_inertia = Vec3(0.688, 0.594, 0.783).asDiagonal();
  }
  if (name == "groupB") {
    s.disturbances.payload_force =
        SignalSpec::sum({background_signal(1.0), group_b_payload_force()});
    s.comparison = ComparisonMetric::kPosition;
  }
  if (name == "groupC") {
    s.disturbances.payload_moment =
        SignalSpec::sum({background_signal(0.1), group_c_payload_moment()});
    s.comparison = ComparisonMetric::kAttitude;
  }
  validate(s);
  return s;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");

  Scenario s;
  bool required = true;
  if (doc.contains("base")) {
    if (!doc.at("base").is_string()) throw ConfigError("base must be a string");
    s = builtin_scenario(doc.at("base").get<std::string>());
    required = false;
  } else {
    s = reference_defaults();
    s.disturbances = DisturbanceProfile::zero(0);
    s.assumptions.clear();
  }
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) throw ConfigError("label must be a string");
    s.label = doc.at("label").get<std::string>();
  }
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw ConfigError("mode must be a string");
    s.mode = control_mode_from_string(doc.at("mode").get<std::string>());
  }
  const json empty = json::object();
  auto section = [&](const char* key) -> const json& {
    if (doc.contains(key)) return doc.at(key);
    if (required) throw ConfigError(std::string("missing field ") + key);
    return empty;
  };
  parse_plant(section("plant"), required, s.params);
  parse_reference(section("reference"), required, s.params);
  parse_gains(section("gains"), required, s.gains);
  auto optional = [&](const char* key) -> const json& {
    return doc.contains(key) ? doc.at(key) : empty;
  };
  parse_network(optional("network"), s.network);
  parse_disturbances(optional("disturbances"), s.params.count(), s.disturbances);
  parse_setpoint(optional("setpoint"), s.setpoint);
  parse_integrator(optional("integrator"), s.integrator);
  parse_initial(optional("initial"), s.initial);
  parse_metrics(optional("metrics"), s);
  if (doc.contains("seed")) {
    const json& seed = doc.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ConfigError("seed must be a non-negative integer");
    }
    s.seed = seed.get<std::uint64_t>();
  }
  if (doc.contains("assumptions")) {
    const json& a = doc.at("assumptions");
    if (!a.is_array()) throw ConfigError("assumptions must be an array of strings");
    s.assumptions.clear();
    for (const auto& item : a) {
      if (!item.is_string()) throw ConfigError("assumptions must be an array of strings");
      s.assumptions.push_back(item.get<std::string>());
    }
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& name_or_path) {
  if (is_builtin_scenario(name_or_path)) return builtin_scenario(name_or_path);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open scenario '" + name_or_path +
                      "' (not a file and not groupA, groupB or groupC)");
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(name_or_path + ": " + e.what());
  }
}

std::string scenario_json(const Scenario& s) {
  json doc;
  doc["label"] = s.label;
  doc["mode"] = to_string(s.mode);
  const SystemParams& p = s.params;
  json quads = json::array();
  for (const auto& q : p.quadrotors) {
    quads.push_back({{"mass_kg", q.mass},
                     {"inertia_kgm2", mat_json(q.inertia)},
                     {"cable_length_m", q.cable_length},
                     {"attachment_m", vec_json(q.attachment)}});
  }
  doc["plant"] = {{"payload_mass_kg", p.payload_mass},
                  {"payload_inertia_kgm2", mat_json(p.payload_inertia)},
                  {"gravity_mps2", p.gravity},
                  {"quadrotors", quads}};
  doc["reference"] = {{"payload_mass_kg", p.reference_mass},
                      {"payload_inertia_kgm2", mat_json(p.reference_inertia)},
                      {"max_payload_mass_kg", p.max_mass},
                      {"max_payload_inertia_kgm2", mat_json(p.max_inertia)}};
  const ControllerGains& g = s.gains;
  json q = json::array();
  for (const auto& m : g.Q) q.push_back(mat2_json(m));
  json pm = json::array();
  for (const auto& m : g.P) pm.push_back(mat2_json(m));
  doc["gains"] = {{"k_p", vec_json(g.kp)},          {"k_d", vec_json(g.kd)},
                  {"k_R0", g.k_R0},                 {"k_Omega0", g.k_Omega0},
                  {"k_q", g.k_q},                   {"k_omega", g.k_omega},
                  {"k_R", g.k_R},                   {"k_Omega", g.k_Omega},
                  {"c_q", g.c_q},                   {"h_x0", g.h_x0},
                  {"h_R0", g.h_R0},                 {"h_xi", g.h_xi},
                  {"eta_m", g.eta_m},               {"eta_J", g.eta_J},
                  {"s_m", g.s_m},                   {"s_J", g.s_J},
                  {"gamma_x", vec_json(g.gamma_x)}, {"gamma_R", vec_json(g.gamma_R)},
                  {"Q", q},
                  {"mass_floor_kg", g.mass_floor},
                  {"inertia_floor_kgm2", g.inertia_floor},
                  {"tension_epsilon_N", g.tension_epsilon},
                  {"thrust_epsilon_N", g.thrust_epsilon},
                  {"derivative_time_constant_s", g.derivative_time_constant}};
  doc["derived"] = {{"P", pm}};
  doc["network"] = {{"neurons", s.network.neurons},
                    {"center_min", s.network.center_min},
                    {"center_max", s.network.center_max},
                    {"width_min", s.network.width_min},
                    {"width_max", s.network.width_max}};
  const DisturbanceProfile& d = s.disturbances;
  json qf = json::array();
  for (const auto& sig : d.quad_force) qf.push_back(signal_json(sig));
  json qm = json::array();
  for (const auto& sig : d.quad_moment) qm.push_back(signal_json(sig));
  doc["disturbances"] = {{"payload_force_N", signal_json(d.payload_force)},
                         {"payload_moment_Nm", signal_json(d.payload_moment)},
                         {"quad_force_N", qf},
                         {"quad_moment_Nm", qm},
                         {"phi_x_mps2", signal_json(d.phi_x)},
                         {"phi_R_radps2", signal_json(d.phi_R)}};
  doc["setpoint"] = {
      {"kind", s.setpoint.kind == SetpointKind::kHold ? "hold" : "figure_eight"},
      {"position_m", vec_json(s.setpoint.position)},
      {"amplitude_m", s.setpoint.amplitude},
      {"period_s", s.setpoint.period}};
  doc["integrator"] = {{"dt_s", s.integrator.dt},
                       {"duration_s", s.integrator.duration},
                       {"log_interval_s", s.integrator.log_interval},
                       {"renormalize", s.integrator.renormalize}};
  doc["initial"] = {{"payload_position_m", vec_json(s.initial.position)},
                    {"payload_velocity_mps", vec_json(s.initial.velocity)},
                    {"payload_rotation_vector_rad", vec_json(s.initial.rotation_vector)},
                    {"payload_angular_velocity_radps", vec_json(s.initial.angular_velocity)},
                    {"perturbation_scale", s.initial.perturbation_scale}};
  doc["seed"] = s.seed;
  doc["metrics"] = {{"steady_state_start_s", s.steady_state_start},
                    {"comparison", to_string(s.comparison)}};
  doc["assumptions"] = s.assumptions;
  return doc.dump(2) + "\n";
}

void validate(Scenario& s) {
  validate(s.params);
  finalize(s.gains);
  validate(s.network);
  validate(s.disturbances, s.params.count());
  validate(s.integrator);
  if (s.gains.derivative_time_constant < s.integrator.dt) {
    throw ConfigError("gains.derivative_time_constant_s must be at least integrator.dt_s");
  }
  if (s.setpoint.kind == SetpointKind::kFigureEight &&
      !(s.setpoint.period > 0.0 && s.setpoint.amplitude >= 0.0)) {
    throw ConfigError("setpoint.period_s must be > 0 and amplitude_m >= 0");
  }
  if (!s.setpoint.position.allFinite()) throw ConfigError("setpoint.position_m must be finite");
  const InitialCondition& ic = s.initial;
  if (!ic.position.allFinite() || !ic.velocity.allFinite() ||
      !ic.rotation_vector.allFinite() || !ic.angular_velocity.allFinite()) {
    throw ConfigError("initial condition must be finite");
  }
  if (!(ic.perturbation_scale >= 0.0) || !std::isfinite(ic.perturbation_scale)) {
    throw ConfigError("initial.perturbation_scale must be >= 0");
  }
  if (!(s.steady_state_start >= 0.0) || !std::isfinite(s.steady_state_start)) {
    throw ConfigError("metrics.steady_state_start_s must be >= 0");
  }
}

SystemState initial_state(const Scenario& s) {
  SystemState state = SystemState::hover(s.params.count());
  Vec3 position = s.initial.position;
  Vec3 rotation = s.initial.rotation_vector;
  const double scale = s.initial.perturbation_scale;
  if (scale > 0.0) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int j = 0; j < 3; ++j) position[j] += scale * unit(rng);
    for (int j = 0; j < 3; ++j) rotation[j] += 0.1 * scale * unit(rng);
  }
  state.position = position;
  state.velocity = s.initial.velocity;
  state.attitude = exp_so3(rotation);
  state.angular_velocity = s.initial.angular_velocity;
  return state;
}

SimulationInputs simulation_inputs(const Scenario& s) {
  SimulationInputs in;
  in.params = s.params;
  in.gains = s.gains;
  in.network = s.network;
  in.disturbances = s.disturbances;
  in.setpoint = [sp = s.setpoint](double t) { return sp.at(t); };
  in.integrator = s.integrator;
  in.mode = s.mode;
  in.initial = initial_state(s);
  return in;
}

std::string to_string(ComparisonMetric metric) {
  return metric == ComparisonMetric::kPosition ? "position" : "attitude";
}

}  // namespace cablelift
