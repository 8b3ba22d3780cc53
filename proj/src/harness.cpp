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

#include "cablelift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <system_error>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "cablelift/errors.hpp"

namespace cablelift {
namespace {

using nlohmann::json;

struct Column {
  std::string name;
  std::string unit;
  std::string description;
};

void add3(std::vector<Column>& cols, const std::string& stem, const std::string& unit,
          const std::string& description) {
  for (int j = 1; j <= 3; ++j) {
    cols.push_back({stem + "_" + std::to_string(j), unit,
                    description + ", axis " + std::to_string(j)});
  }
}

std::vector<Column> trajectory_schema(std::size_t n) {
  std::vector<Column> c;
  c.push_back({"t", "s", "time"});
  add3(c, "x0", "m", "payload position");
  add3(c, "v0", "m/s", "payload velocity");
  add3(c, "Omega0", "rad/s", "payload angular velocity, body frame");
  for (int r = 1; r <= 3; ++r) {
    for (int k = 1; k <= 3; ++k) {
      c.push_back({"R0_" + std::to_string(r) + std::to_string(k), "1",
                   "payload attitude matrix entry"});
    }
  }
  add3(c, "e_x0", "m", "payload position error");
  add3(c, "e_v0", "m/s", "payload velocity error");
  add3(c, "e_R0", "1", "payload attitude error");
  add3(c, "e_Omega0", "rad/s", "payload angular velocity error");
  c.push_back({"norm_e_x0", "m", "payload position error norm"});
  c.push_back({"norm_e_R0", "1", "payload attitude error norm"});
  c.push_back({"norm_e_Omega0", "rad/s", "payload angular velocity error norm"});
  add3(c, "m_bar", "kg", "payload mass estimate");
  add3(c, "J_bar", "kg m^2", "payload inertia estimate (diagonal)");
  add3(c, "phi_x_bar", "m/s^2", "translational network output");
  add3(c, "phi_R_bar", "rad/s^2", "rotational network output");
  add3(c, "Delta_x0_bar", "N", "payload force compensation");
  add3(c, "Delta_R0_bar", "N m", "payload moment compensation");
  add3(c, "Delta_x0", "N", "true payload disturbance force");
  add3(c, "Delta_R0", "N m", "true payload disturbance moment");
  c.push_back({"V_x", "1", "translational Lyapunov term"});
  c.push_back({"V_R", "1", "rotational Lyapunov term"});
  c.push_back({"V_q", "1", "cable Lyapunov term"});
  c.push_back({"V_Delta", "1", "disturbance-estimation Lyapunov term"});
  c.push_back({"V", "1", "total Lyapunov function"});
  c.push_back({"norm_F_d", "N", "desired payload force norm"});
  c.push_back({"norm_M_d", "N m", "desired payload moment norm"});
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string s = std::to_string(i);
    c.push_back({"norm_e_q_" + s, "1", "cable " + s + " direction error norm"});
    c.push_back({"norm_e_omega_" + s, "rad/s", "cable " + s + " angular velocity error norm"});
    c.push_back({"norm_mu_" + s, "N", "cable " + s + " tension force norm"});
    c.push_back({"f_" + s, "N", "quadrotor " + s + " thrust"});
    c.push_back({"norm_M_" + s, "N m", "quadrotor " + s + " moment norm"});
  }
  c.push_back({"compressed_cables", "count", "cables whose desired force pushes"});
  return c;
}

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), ",%.10g", v);
  line += buf;
}

void put3(std::string& line, const Vec3& v) {
  for (int j = 0; j < 3; ++j) put(line, v[j]);
}

std::string trajectory_row(const TrajectoryRecord& r) {
  std::string line;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", r.time);
  line += buf;
  const SystemState& s = r.state;
  put3(line, s.position);
  put3(line, s.velocity);
  put3(line, s.angular_velocity);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) put(line, s.attitude(a, b));
  }
  const PayloadErrors& e = r.diagnostics.payload;
  put3(line, e.position);
  put3(line, e.velocity);
  put3(line, e.attitude);
  put3(line, e.angular_velocity);
  put(line, e.position.norm());
  put(line, e.attitude.norm());
  put(line, e.angular_velocity.norm());
  put3(line, r.controller.mass_estimate);
  put3(line, r.controller.inertia_estimate);
  put3(line, r.diagnostics.phi_x_estimate);
  put3(line, r.diagnostics.phi_R_estimate);
  put3(line, r.controller.payload_force_estimate);
  put3(line, r.controller.payload_moment_estimate);
  put3(line, r.disturbance.payload_force);
  put3(line, r.disturbance.payload_moment);
  put(line, r.lyapunov.translational);
  put(line, r.lyapunov.rotational);
  put(line, r.lyapunov.cable);
  put(line, r.lyapunov.disturbance);
  put(line, r.lyapunov.total);
  put(line, r.control.force.norm());
  put(line, r.control.moment.norm());
  for (std::size_t i = 0; i < s.cables.size(); ++i) {
    put(line, r.diagnostics.cables[i].direction.norm());
    put(line, r.diagnostics.cables[i].angular_velocity.norm());
    put(line, r.control.tension[i].norm());
    put(line, r.control.thrust[i]);
    put(line, r.control.quad_moment[i].norm());
  }
  put(line, static_cast<double>(r.diagnostics.compressed_cables));
  return line;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw OutputError("write failed for " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_output(path);
  out << text;
  finish(out, path);
}

void make_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create directory " + dir.string() + ": " + ec.message());
}

// Series extracted from a record for the plot-data files.
using Series = std::vector<std::pair<std::string, std::function<double(const TrajectoryRecord&)>>>;

void write_series(const std::filesystem::path& path, const Trajectory& traj,
                  const Series& series) {
  std::ofstream out = open_output(path);
  out << "t";
  for (const auto& [name, fn] : series) out << "," << name;
  out << "\n";
  for (const auto& r : traj.records) {
    std::string line;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", r.time);
    line += buf;
    for (const auto& [name, fn] : series) put(line, fn(r));
    out << line << "\n";
  }
  finish(out, path);
}

Series axis_series(const std::string& stem,
                   std::function<Vec3(const TrajectoryRecord&)> fn) {
  Series s;
  for (int j = 0; j < 3; ++j) {
    s.emplace_back(stem + "_" + std::to_string(j + 1),
                   [fn, j](const TrajectoryRecord& r) { return fn(r)[j]; });
  }
  return s;
}

Series concat(Series a, const Series& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json stats_json(const ErrorStats& s) { return {{"rms", s.rms}, {"max", s.max}}; }

json metrics_json(const Metrics& m) {
  json j;
  j["records"] = m.records;
  j["whole_run"] = {{"position_error_m", stats_json(m.position)},
                    {"attitude_error", stats_json(m.attitude)},
                    {"angular_velocity_error_radps", stats_json(m.angular_velocity)}};
  j["steady_state"] = {{"window_s", json::array({m.window_start, m.window_end})},
                       {"samples", m.window_samples},
                       {"position_error_m", stats_json(m.position_steady)},
                       {"attitude_error", stats_json(m.attitude_steady)},
                       {"angular_velocity_error_radps", stats_json(m.angular_velocity_steady)}};
  j["estimates"] = {{"mass_min_kg", vec_json(m.mass_min)},
                    {"mass_max_kg", vec_json(m.mass_max)},
                    {"inertia_min_kgm2", vec_json(m.inertia_min)},
                    {"inertia_max_kgm2", vec_json(m.inertia_max)},
                    {"mass_cap_slack_kg", vec_json(m.mass_cap_slack)},
                    {"inertia_cap_slack_kgm2", vec_json(m.inertia_cap_slack)}};
  j["manifold"] = {{"max_rotation_residual", m.max_rotation_residual},
                   {"max_direction_residual", m.max_direction_residual},
                   {"max_step_drift", m.max_step_drift}};
  j["lyapunov"] = {{"check_start_s", m.lyapunov_check_start},
                   {"max_increase_per_record", m.lyapunov_max_increase}};
  j["compression_steps"] = m.compression_steps;
  j["diverged"] = m.diverged;
  if (m.diverged) {
    j["divergence"] = {{"time_s", m.divergence_time}, {"reason", m.divergence_reason}};
  }
  return j;
}

json provenance_json(const Scenario& s) {
  json quads = json::array();
  for (const auto& q : s.params.quadrotors) {
    quads.push_back({{"mass_kg", q.mass},
                     {"inertia_diag_kgm2", vec_json(q.inertia.diagonal())},
                     {"cable_length_m", q.cable_length},
                     {"attachment_m", vec_json(q.attachment)}});
  }
  return {{"label", s.label},
          {"mode", to_string(s.mode)},
          {"dt_s", s.integrator.dt},
          {"duration_s", s.integrator.duration},
          {"seed", s.seed},
          {"quadrotors", quads},
          {"assumptions", s.assumptions}};
}

double steady_value(const Metrics& m, ComparisonMetric metric) {
  return metric == ComparisonMetric::kPosition ? m.position_steady.rms
                                               : m.attitude_steady.rms;
}

}  // namespace

LyapunovTerms lyapunov_terms(const ControllerState& cs, const ControlDiagnostics& diag,
                             const DisturbanceSample& dist, const SystemParams& params,
                             const ControllerGains& g) {
  LyapunovTerms v;
  const PayloadErrors& e = diag.payload;
  const Vec3 j_true = params.payload_inertia.diagonal();
  for (int j = 0; j < 3; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const Vec2 ex = translational_input(e, j);
    const double m_tilde = 1.0 / params.payload_mass - 1.0 / cs.mass_estimate[j];
    v.translational += 0.5 * ex.dot(g.P[idx] * ex) + 0.5 * g.eta_m * m_tilde * m_tilde +
                       cs.translational_nets[idx].weights.squaredNorm() / (2.0 * g.gamma_x[j]);
    const double j_tilde = 1.0 / j_true[j] - 1.0 / cs.inertia_estimate[j];
    v.rotational += 0.5 * e.angular_velocity[j] * e.angular_velocity[j] +
                    0.5 * g.eta_J * j_tilde * j_tilde +
                    cs.rotational_nets[idx].weights.squaredNorm() / (2.0 * g.gamma_R[j]);
  }
  v.rotational += g.k_R0 * e.attitude_potential;
  for (const auto& c : diag.cables) {
    v.cable += 0.5 * c.angular_velocity.squaredNorm() + g.k_q * c.potential +
               g.c_q * c.direction.dot(c.angular_velocity);
  }
  v.disturbance = (dist.payload_force - cs.payload_force_estimate).squaredNorm() / (2.0 * g.h_x0) +
                  (dist.payload_moment - cs.payload_moment_estimate).squaredNorm() / (2.0 * g.h_R0);
  for (std::size_t i = 0; i < cs.quad_force_estimates.size(); ++i) {
    v.disturbance +=
        (dist.quad_force_parallel[i] - cs.quad_force_estimates[i]).squaredNorm() /
        (2.0 * g.h_xi);
  }
  v.total = v.translational + v.rotational + v.cable + v.disturbance;
  return v;
}

Metrics compute_metrics(const Trajectory& traj, const SimulationSummary& summary,
                        const Scenario& scenario) {
  Metrics m;
  m.records = traj.records.size();
  // Runs shorter than the configured start use their second half.
  m.window_end = scenario.integrator.duration;
  m.window_start = scenario.steady_state_start < m.window_end ? scenario.steady_state_start
                                                               : 0.5 * m.window_end;
  m.compression_steps = summary.compression_steps;
  m.diverged = summary.diverged;
  m.divergence_time = summary.divergence_time;
  m.divergence_reason = summary.divergence_reason;
  m.max_rotation_residual = summary.max_rotation_residual;
  m.max_direction_residual = summary.max_direction_residual;
  m.max_step_drift = summary.max_step_drift;
  m.mass_cap_slack = summary.mass_cap_slack;
  m.inertia_cap_slack = summary.inertia_cap_slack;
  if (traj.records.empty()) return m;

  const double eps = 1e-9;
  double sx = 0.0, sr = 0.0, so = 0.0, wx = 0.0, wr = 0.0, wo = 0.0;
  m.mass_min = m.mass_max = traj.records.front().controller.mass_estimate;
  m.inertia_min = m.inertia_max = traj.records.front().controller.inertia_estimate;
  const TrajectoryRecord* prev = nullptr;
  for (const auto& r : traj.records) {
    const double ex = r.diagnostics.payload.position.norm();
    const double er = r.diagnostics.payload.attitude.norm();
    const double eo = r.diagnostics.payload.angular_velocity.norm();
    sx += ex * ex;
    sr += er * er;
    so += eo * eo;
    m.position.max = std::max(m.position.max, ex);
    m.attitude.max = std::max(m.attitude.max, er);
    m.angular_velocity.max = std::max(m.angular_velocity.max, eo);
    if (r.time >= m.window_start - eps && r.time <= m.window_end + eps) {
      ++m.window_samples;
      wx += ex * ex;
      wr += er * er;
      wo += eo * eo;
      m.position_steady.max = std::max(m.position_steady.max, ex);
      m.attitude_steady.max = std::max(m.attitude_steady.max, er);
      m.angular_velocity_steady.max = std::max(m.angular_velocity_steady.max, eo);
    }
    m.mass_min = m.mass_min.cwiseMin(r.controller.mass_estimate);
    m.mass_max = m.mass_max.cwiseMax(r.controller.mass_estimate);
    m.inertia_min = m.inertia_min.cwiseMin(r.controller.inertia_estimate);
    m.inertia_max = m.inertia_max.cwiseMax(r.controller.inertia_estimate);
    if (prev != nullptr && prev->time >= m.lyapunov_check_start - eps) {
      m.lyapunov_max_increase =
          std::max(m.lyapunov_max_increase, r.lyapunov.total - prev->lyapunov.total);
    }
    prev = &r;
  }
  const double count = static_cast<double>(traj.records.size());
  m.position.rms = std::sqrt(sx / count);
  m.attitude.rms = std::sqrt(sr / count);
  m.angular_velocity.rms = std::sqrt(so / count);
  if (m.window_samples > 0) {
    const double w = static_cast<double>(m.window_samples);
    m.position_steady.rms = std::sqrt(wx / w);
    m.attitude_steady.rms = std::sqrt(wr / w);
    m.angular_velocity_steady.rms = std::sqrt(wo / w);
  }
  return m;
}

RunResult run(const Scenario& scenario) {
  RunResult result;
  result.scenario = scenario;
  const SimulationInputs inputs = simulation_inputs(scenario);
  auto& records = result.trajectory.records;
  records.reserve(static_cast<std::size_t>(
      scenario.integrator.duration / scenario.integrator.log_interval) + 2);
  const SimulationSummary summary = simulate(inputs, [&](const StepRecord& s) {
    TrajectoryRecord r;
    r.time = s.time;
    r.state = s.state;
    r.controller = s.controller;
    r.control = s.control;
    r.diagnostics = s.diagnostics;
    r.disturbance = s.disturbance.sample;
    r.lyapunov = lyapunov_terms(s.controller, s.diagnostics, s.disturbance.sample,
                                inputs.params, inputs.gains);
    records.push_back(std::move(r));
  });
  result.metrics = compute_metrics(result.trajectory, summary, scenario);
  return result;
}

std::vector<std::string> trajectory_columns(std::size_t n) {
  std::vector<std::string> names;
  for (const auto& c : trajectory_schema(n)) names.push_back(c.name);
  return names;
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  make_directory(dir);
  const std::size_t n = result.scenario.params.count();
  const auto schema = trajectory_schema(n);

  {
    const auto path = dir / "trajectory.csv";
    std::ofstream out = open_output(path);
    for (std::size_t k = 0; k < schema.size(); ++k) {
      out << (k ? "," : "") << schema[k].name;
    }
    out << "\n";
    for (const auto& r : result.trajectory.records) out << trajectory_row(r) << "\n";
    finish(out, path);
  }

  json cols = json::array();
  for (const auto& c : schema) {
    cols.push_back({{"name", c.name}, {"unit", c.unit}, {"description", c.description}});
  }
  json schema_doc = {{"file", "trajectory.csv"},
                     {"row", "one row per log interval, starting at t = 0"},
                     {"columns", cols}};
  write_text(dir / "schema.json", schema_doc.dump(2) + "\n");

  json metrics = {{"scenario", provenance_json(result.scenario)},
                  {"metrics", metrics_json(result.metrics)}};
  write_text(dir / "metrics.json", metrics.dump(2) + "\n");
  write_text(dir / "scenario.json", scenario_json(result.scenario));

  const Trajectory& t = result.trajectory;
  write_series(dir / "plot_mass_estimates.csv", t,
               concat(axis_series("m_bar", [](const TrajectoryRecord& r) {
                        return r.controller.mass_estimate;
                      }),
                      axis_series("phi_x_bar", [](const TrajectoryRecord& r) {
                        return r.diagnostics.phi_x_estimate;
                      })));
  write_series(dir / "plot_inertia_estimates.csv", t,
               concat(axis_series("J_bar", [](const TrajectoryRecord& r) {
                        return r.controller.inertia_estimate;
                      }),
                      axis_series("phi_R_bar", [](const TrajectoryRecord& r) {
                        return r.diagnostics.phi_R_estimate;
                      })));
  Series errors = {
      {"norm_e_x0", [](const TrajectoryRecord& r) { return r.diagnostics.payload.position.norm(); }},
      {"norm_e_R0", [](const TrajectoryRecord& r) { return r.diagnostics.payload.attitude.norm(); }},
      {"norm_e_Omega0",
       [](const TrajectoryRecord& r) { return r.diagnostics.payload.angular_velocity.norm(); }},
  };
  errors = concat(errors, axis_series("e_x0", [](const TrajectoryRecord& r) {
                    return r.diagnostics.payload.position;
                  }));
  errors = concat(errors, axis_series("e_R0", [](const TrajectoryRecord& r) {
                    return r.diagnostics.payload.attitude;
                  }));
  write_series(dir / "plot_tracking_errors.csv", t, errors);
}

Comparison compare(const Scenario& scenario) {
  Comparison c;
  c.label = scenario.label;
  c.metric = scenario.comparison;
  Scenario base = scenario;
  base.mode = ControlMode::kBaseline;
  Scenario adaptive = scenario;
  adaptive.mode = ControlMode::kAdaptive;

  std::exception_ptr failure;
  std::thread worker([&] {
    try {
      c.baseline = run(base);
    } catch (...) {
      failure = std::current_exception();
    }
  });
  try {
    c.adaptive = run(adaptive);
  } catch (...) {
    worker.join();
    throw;
  }
  worker.join();
  if (failure) std::rethrow_exception(failure);

  c.baseline_value = steady_value(c.baseline.metrics, c.metric);
  c.adaptive_value = steady_value(c.adaptive.metrics, c.metric);
  c.margin = c.baseline_value > 0.0 ? 1.0 - c.adaptive_value / c.baseline_value : 0.0;
  if (c.baseline.metrics.diverged && c.adaptive.metrics.diverged) {
    c.verdict = "both-diverged";
  } else if (c.baseline.metrics.diverged != c.adaptive.metrics.diverged) {
    c.verdict = c.baseline.metrics.diverged ? "adaptive" : "baseline";
  } else if (c.adaptive_value < c.baseline_value) {
    c.verdict = "adaptive";
  } else if (c.adaptive_value > c.baseline_value) {
    c.verdict = "baseline";
  } else {
    c.verdict = "tie";
  }
  return c;
}

void write_comparison(const Comparison& c, const std::filesystem::path& dir) {
  make_directory(dir);
  write_outputs(c.baseline, dir / "baseline");
  write_outputs(c.adaptive, dir / "adaptive");

  const std::string metric =
      c.metric == ComparisonMetric::kPosition ? "steady_state_rms_position_error_m"
                                              : "steady_state_rms_attitude_error";
  json doc = {{"label", c.label},
              {"compared_metric", metric},
              {"baseline", c.baseline_value},
              {"adaptive", c.adaptive_value},
              {"margin", c.margin},
              {"verdict", c.verdict},
              {"steady_state_window_s",
               json::array({c.adaptive.metrics.window_start, c.adaptive.metrics.window_end})},
              {"assumptions", c.adaptive.scenario.assumptions},
              {"baseline_metrics", metrics_json(c.baseline.metrics)},
              {"adaptive_metrics", metrics_json(c.adaptive.metrics)}};
  write_text(dir / "comparison.json", doc.dump(2) + "\n");

  // Paired error traces; shorter runs (divergence) are padded with nan.
  const auto& b = c.baseline.trajectory.records;
  const auto& a = c.adaptive.trajectory.records;
  const auto path = dir / "plot_comparison_errors.csv";
  std::ofstream out = open_output(path);
  out << "t,baseline_norm_e_x0,adaptive_norm_e_x0,baseline_norm_e_R0,adaptive_norm_e_R0\n";
  const std::size_t rows = std::max(a.size(), b.size());
  const double nan = std::nan("");
  for (std::size_t k = 0; k < rows; ++k) {
    const TrajectoryRecord* rb = k < b.size() ? &b[k] : nullptr;
    const TrajectoryRecord* ra = k < a.size() ? &a[k] : nullptr;
    std::string line;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", (ra ? ra : rb)->time);
    line += buf;
    put(line, rb ? rb->diagnostics.payload.position.norm() : nan);
    put(line, ra ? ra->diagnostics.payload.position.norm() : nan);
    put(line, rb ? rb->diagnostics.payload.attitude.norm() : nan);
    put(line, ra ? ra->diagnostics.payload.attitude.norm() : nan);
    out << line << "\n";
  }
  finish(out, path);
}

}  // namespace cablelift
