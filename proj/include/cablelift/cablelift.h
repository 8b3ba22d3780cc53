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

/* C interface to the cablelift simulator. All objects are opaque handles
 * owned by the caller and released with the matching *_free function.
 * Functions return a cl_status; on failure, cl_last_error() describes the
 * problem for the calling thread. */

#ifndef CABLELIFT_CABLELIFT_H_
#define CABLELIFT_CABLELIFT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CL_API __declspec(dllexport)
#else
#define CL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cl_status {
  CL_OK = 0,
  CL_ERR_CONFIG = 1,    /* invalid scenario, parameter or argument */
  CL_ERR_DIVERGED = 2,  /* run finished early; results are still available */
  CL_ERR_OUTPUT = 3,    /* file could not be written */
  CL_ERR_INTERNAL = 4
} cl_status;

typedef enum cl_mode { CL_MODE_ADAPTIVE = 0, CL_MODE_BASELINE = 1 } cl_mode;

typedef enum cl_metric {
  CL_METRIC_POSITION_RMS = 0,         /* m */
  CL_METRIC_POSITION_MAX,             /* m */
  CL_METRIC_ATTITUDE_RMS,
  CL_METRIC_ATTITUDE_MAX,
  CL_METRIC_ANGULAR_VELOCITY_RMS,     /* rad/s */
  CL_METRIC_POSITION_STEADY_RMS,      /* m */
  CL_METRIC_ATTITUDE_STEADY_RMS,
  CL_METRIC_ANGULAR_VELOCITY_STEADY_RMS,
  CL_METRIC_MASS_MAX,                 /* kg, largest estimate over all axes */
  CL_METRIC_MASS_MIN,
  CL_METRIC_INERTIA_MAX,              /* kg m^2 */
  CL_METRIC_INERTIA_MIN,
  CL_METRIC_COMPRESSION_STEPS,
  CL_METRIC_DIVERGED,                 /* 0 or 1 */
  CL_METRIC_DIVERGENCE_TIME,          /* s, NaN when not diverged */
  CL_METRIC_MAX_ROTATION_RESIDUAL,
  CL_METRIC_MAX_DIRECTION_RESIDUAL,
  CL_METRIC_LYAPUNOV_MAX_INCREASE,
  CL_METRIC_WINDOW_SAMPLES
} cl_metric;

typedef struct cl_scenario cl_scenario;
typedef struct cl_result cl_result;
typedef struct cl_comparison cl_comparison;

/* Built-in name ("groupA", "groupB", "groupC") or JSON scenario file. */
CL_API cl_status cl_scenario_load(const char* name_or_path, cl_scenario** out);
CL_API cl_status cl_scenario_set_mode(cl_scenario* s, cl_mode mode);
CL_API cl_status cl_scenario_set_dt(cl_scenario* s, double dt_s);
CL_API cl_status cl_scenario_set_duration(cl_scenario* s, double duration_s);
CL_API cl_status cl_scenario_set_seed(cl_scenario* s, uint64_t seed);
CL_API const char* cl_scenario_label(const cl_scenario* s);
CL_API void cl_scenario_free(cl_scenario* s);

/* Returns CL_ERR_DIVERGED with *out populated when the run diverged. */
CL_API cl_status cl_run(const cl_scenario* s, cl_result** out);
CL_API cl_status cl_result_write(const cl_result* r, const char* dir);
CL_API cl_status cl_result_metric(const cl_result* r, cl_metric metric, double* value);
CL_API size_t cl_result_record_count(const cl_result* r);
CL_API void cl_result_free(cl_result* r);

/* Baseline and adaptive runs of the same scenario, executed concurrently. */
CL_API cl_status cl_compare(const cl_scenario* s, cl_comparison** out);
CL_API cl_status cl_comparison_write(const cl_comparison* c, const char* dir);
CL_API double cl_comparison_baseline_value(const cl_comparison* c);
CL_API double cl_comparison_adaptive_value(const cl_comparison* c);
CL_API double cl_comparison_margin(const cl_comparison* c);
/* "adaptive", "baseline" or "tie". */
CL_API const char* cl_comparison_verdict(const cl_comparison* c);
/* Borrowed result handles, valid until the comparison is freed. */
CL_API const cl_result* cl_comparison_baseline(const cl_comparison* c);
CL_API const cl_result* cl_comparison_adaptive(const cl_comparison* c);
CL_API void cl_comparison_free(cl_comparison* c);

CL_API const char* cl_status_string(cl_status status);
CL_API const char* cl_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* CABLELIFT_CABLELIFT_H_ */
