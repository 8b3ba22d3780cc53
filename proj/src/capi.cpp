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

#include "cablelift/cablelift.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <new>
#include <string>

#include "cablelift/errors.hpp"
#include "cablelift/harness.hpp"
#include "cablelift/scenario.hpp"

struct cl_scenario {
  cablelift::Scenario scenario;
};

struct cl_result {
  cablelift::RunResult result;
};

struct cl_comparison {
  cablelift::Comparison comparison;
  cl_result baseline;
  cl_result adaptive;
};

namespace {

thread_local std::string last_error;

cl_status fail(cl_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
cl_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const cablelift::ConfigError& e) {
    return fail(CL_ERR_CONFIG, e.what());
  } catch (const cablelift::DivergenceError& e) {
    return fail(CL_ERR_DIVERGED, e.what());
  } catch (const cablelift::OutputError& e) {
    return fail(CL_ERR_OUTPUT, e.what());
  } catch (const cablelift::AlgebraError& e) {
    return fail(CL_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CL_ERR_INTERNAL, "unknown error");
  }
}

cl_status null_argument(const char* name) {
  return fail(CL_ERR_CONFIG, std::string(name) + " must not be null");
}

cl_status diverged_status(const cablelift::Metrics& m) {
  if (!m.diverged) return CL_OK;
  char buf[64];
  std::snprintf(buf, sizeof(buf), " at t = %.4f s", m.divergence_time);
  return fail(CL_ERR_DIVERGED, "run diverged: " + m.divergence_reason + buf);
}

// Revalidates after a setter, restoring the previous scenario on failure.
template <typename Fn>
cl_status modify(cl_scenario* s, Fn&& fn) {
  if (s == nullptr) return null_argument("scenario");
  return guarded([&] {
    cablelift::Scenario copy = s->scenario;
    fn(copy);
    cablelift::validate(copy);
    s->scenario = std::move(copy);
    return CL_OK;
  });
}

}  // namespace

extern "C" {

cl_status cl_scenario_load(const char* name_or_path, cl_scenario** out) {
  if (name_or_path == nullptr) return null_argument("name_or_path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto* s = new cl_scenario{cablelift::load_scenario(name_or_path)};
    *out = s;
    return CL_OK;
  });
}

cl_status cl_scenario_set_mode(cl_scenario* s, cl_mode mode) {
  if (mode != CL_MODE_ADAPTIVE && mode != CL_MODE_BASELINE) {
    return fail(CL_ERR_CONFIG, "unknown mode");
  }
  return modify(s, [&](cablelift::Scenario& sc) {
    sc.mode = mode == CL_MODE_ADAPTIVE ? cablelift::ControlMode::kAdaptive
                                       : cablelift::ControlMode::kBaseline;
  });
}

cl_status cl_scenario_set_dt(cl_scenario* s, double dt_s) {
  return modify(s, [&](cablelift::Scenario& sc) {
    // Keep the log cadence when it is still a whole number of steps.
    sc.integrator.dt = dt_s;
    const double ratio = sc.integrator.log_interval / dt_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio) sc.integrator.log_interval = dt_s;
  });
}

cl_status cl_scenario_set_duration(cl_scenario* s, double duration_s) {
  return modify(s, [&](cablelift::Scenario& sc) {
    sc.integrator.duration = duration_s;
  });
}

cl_status cl_scenario_set_seed(cl_scenario* s, uint64_t seed) {
  return modify(s, [&](cablelift::Scenario& sc) { sc.seed = seed; });
}

const char* cl_scenario_label(const cl_scenario* s) {
  return s == nullptr ? "" : s->scenario.label.c_str();
}

void cl_scenario_free(cl_scenario* s) { delete s; }

cl_status cl_run(const cl_scenario* s, cl_result** out) {
  if (s == nullptr) return null_argument("scenario");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto* r = new cl_result{cablelift::run(s->scenario)};
    *out = r;
    return diverged_status(r->result.metrics);
  });
}

cl_status cl_result_write(const cl_result* r, const char* dir) {
  if (r == nullptr) return null_argument("result");
  if (dir == nullptr) return null_argument("dir");
  return guarded([&] {
    cablelift::write_outputs(r->result, dir);
    return CL_OK;
  });
}

cl_status cl_result_metric(const cl_result* r, cl_metric metric, double* value) {
  if (r == nullptr) return null_argument("result");
  if (value == nullptr) return null_argument("value");
  const cablelift::Metrics& m = r->result.metrics;
  switch (metric) {
    case CL_METRIC_POSITION_RMS: *value = m.position.rms; break;
    case CL_METRIC_POSITION_MAX: *value = m.position.max; break;
    case CL_METRIC_ATTITUDE_RMS: *value = m.attitude.rms; break;
    case CL_METRIC_ATTITUDE_MAX: *value = m.attitude.max; break;
    case CL_METRIC_ANGULAR_VELOCITY_RMS: *value = m.angular_velocity.rms; break;
    case CL_METRIC_POSITION_STEADY_RMS: *value = m.position_steady.rms; break;
    case CL_METRIC_ATTITUDE_STEADY_RMS: *value = m.attitude_steady.rms; break;
    case CL_METRIC_ANGULAR_VELOCITY_STEADY_RMS: *value = m.angular_velocity_steady.rms; break;
    case CL_METRIC_MASS_MAX: *value = m.mass_max.maxCoeff(); break;
    case CL_METRIC_MASS_MIN: *value = m.mass_min.minCoeff(); break;
    case CL_METRIC_INERTIA_MAX: *value = m.inertia_max.maxCoeff(); break;
    case CL_METRIC_INERTIA_MIN: *value = m.inertia_min.minCoeff(); break;
    case CL_METRIC_COMPRESSION_STEPS: *value = static_cast<double>(m.compression_steps); break;
    case CL_METRIC_DIVERGED: *value = m.diverged ? 1.0 : 0.0; break;
    case CL_METRIC_DIVERGENCE_TIME: *value = m.divergence_time; break;
    case CL_METRIC_MAX_ROTATION_RESIDUAL: *value = m.max_rotation_residual; break;
    case CL_METRIC_MAX_DIRECTION_RESIDUAL: *value = m.max_direction_residual; break;
    case CL_METRIC_LYAPUNOV_MAX_INCREASE: *value = m.lyapunov_max_increase; break;
    case CL_METRIC_WINDOW_SAMPLES: *value = static_cast<double>(m.window_samples); break;
    default: return fail(CL_ERR_CONFIG, "unknown metric");
  }
  return CL_OK;
}

size_t cl_result_record_count(const cl_result* r) {
  return r == nullptr ? 0 : r->result.trajectory.records.size();
}

void cl_result_free(cl_result* r) { delete r; }

cl_status cl_compare(const cl_scenario* s, cl_comparison** out) {
  if (s == nullptr) return null_argument("scenario");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto* c = new cl_comparison{};
    c->comparison = cablelift::compare(s->scenario);
    c->baseline.result = c->comparison.baseline;
    c->adaptive.result = c->comparison.adaptive;
    *out = c;
    return CL_OK;
  });
}

cl_status cl_comparison_write(const cl_comparison* c, const char* dir) {
  if (c == nullptr) return null_argument("comparison");
  if (dir == nullptr) return null_argument("dir");
  return guarded([&] {
    cablelift::write_comparison(c->comparison, dir);
    return CL_OK;
  });
}

double cl_comparison_baseline_value(const cl_comparison* c) {
  return c == nullptr ? std::nan("") : c->comparison.baseline_value;
}

double cl_comparison_adaptive_value(const cl_comparison* c) {
  return c == nullptr ? std::nan("") : c->comparison.adaptive_value;
}

double cl_comparison_margin(const cl_comparison* c) {
  return c == nullptr ? std::nan("") : c->comparison.margin;
}

const char* cl_comparison_verdict(const cl_comparison* c) {
  return c == nullptr ? "" : c->comparison.verdict.c_str();
}

const cl_result* cl_comparison_baseline(const cl_comparison* c) {
  return c == nullptr ? nullptr : &c->baseline;
}

const cl_result* cl_comparison_adaptive(const cl_comparison* c) {
  return c == nullptr ? nullptr : &c->adaptive;
}

void cl_comparison_free(cl_comparison* c) { delete c; }

const char* cl_status_string(cl_status status) {
  switch (status) {
    case CL_OK: return "ok";
    case CL_ERR_CONFIG: return "configuration error";
    case CL_ERR_DIVERGED: return "divergence";
    case CL_ERR_OUTPUT: return "output error";
    case CL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cl_last_error(void) { return last_error.c_str(); }

}  // extern "C"
