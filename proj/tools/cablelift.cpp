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

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "cablelift/cablelift.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;

int exit_code(cl_status status) {
  switch (status) {
    case CL_OK: return kExitOk;
    case CL_ERR_DIVERGED: return kExitDiverged;
    default: return kExitConfig;
  }
}

int report(cl_status status, const char* context) {
  std::fprintf(stderr, "cablelift: %s: %s: %s\n", context, cl_status_string(status),
               cl_last_error());
  return exit_code(status);
}

double metric(const cl_result* r, cl_metric m) {
  double v = 0.0;
  cl_result_metric(r, m, &v);
  return v;
}

void print_summary(const char* tag, const cl_result* r) {
  std::printf("%s: records=%zu rms|e_x0|=%.6g m rms|e_R0|=%.6g steady rms|e_x0|=%.6g m "
              "steady rms|e_R0|=%.6g m_bar in [%.4g, %.4g] kg J_bar in [%.4g, %.4g] kg m^2",
              tag, cl_result_record_count(r), metric(r, CL_METRIC_POSITION_RMS),
              metric(r, CL_METRIC_ATTITUDE_RMS), metric(r, CL_METRIC_POSITION_STEADY_RMS),
              metric(r, CL_METRIC_ATTITUDE_STEADY_RMS), metric(r, CL_METRIC_MASS_MIN),
              metric(r, CL_METRIC_MASS_MAX), metric(r, CL_METRIC_INERTIA_MIN),
              metric(r, CL_METRIC_INERTIA_MAX));
  if (metric(r, CL_METRIC_DIVERGED) != 0.0) {
    std::printf(" DIVERGED at t=%.4f s", metric(r, CL_METRIC_DIVERGENCE_TIME));
  }
  std::printf("\n");
}

struct RunOptions {
  std::string scenario;
  std::string mode;
  std::string out;
  double dt = 0.0;
  double duration = 0.0;
  std::uint64_t seed = 0;
};

int do_run(const RunOptions& o, const CLI::App& cmd) {
  cl_scenario* s = nullptr;
  cl_status st = cl_scenario_load(o.scenario.c_str(), &s);
  if (st != CL_OK) return report(st, "load");
  if (cmd.count("--mode")) {
    st = cl_scenario_set_mode(s, o.mode == "baseline" ? CL_MODE_BASELINE : CL_MODE_ADAPTIVE);
  }
  if (st == CL_OK && cmd.count("--dt")) st = cl_scenario_set_dt(s, o.dt);
  if (st == CL_OK && cmd.count("--duration")) st = cl_scenario_set_duration(s, o.duration);
  if (st == CL_OK && cmd.count("--seed")) st = cl_scenario_set_seed(s, o.seed);
  if (st != CL_OK) {
    cl_scenario_free(s);
    return report(st, "options");
  }
  const std::string out =
      o.out.empty() ? "out/" + std::string(cl_scenario_label(s)) + "-" +
                          (cmd.count("--mode") ? o.mode : std::string("run"))
                    : o.out;
  cl_result* r = nullptr;
  const cl_status run_status = cl_run(s, &r);
  const std::string run_error = cl_last_error();
  cl_scenario_free(s);
  if (r == nullptr) return report(run_status, "run");
  const cl_status write_status = cl_result_write(r, out.c_str());
  if (write_status != CL_OK) {
    cl_result_free(r);
    return report(write_status, "write");
  }
  print_summary("run", r);
  std::printf("outputs: %s\n", out.c_str());
  cl_result_free(r);
  if (run_status != CL_OK) {
    std::fprintf(stderr, "cablelift: run: %s\n", run_error.c_str());
    return exit_code(run_status);
  }
  return kExitOk;
}

int do_compare(const std::string& group, const std::string& out_opt) {
  cl_scenario* s = nullptr;
  cl_status st = cl_scenario_load(group.c_str(), &s);
  if (st != CL_OK) return report(st, "load");
  const std::string out =
      out_opt.empty() ? "out/" + std::string(cl_scenario_label(s)) + "-compare" : out_opt;
  cl_comparison* c = nullptr;
  st = cl_compare(s, &c);
  cl_scenario_free(s);
  if (st != CL_OK) return report(st, "compare");
  st = cl_comparison_write(c, out.c_str());
  if (st != CL_OK) {
    cl_comparison_free(c);
    return report(st, "write");
  }
  print_summary("baseline", cl_comparison_baseline(c));
  print_summary("adaptive", cl_comparison_adaptive(c));
  std::printf("compared steady-state rms: baseline=%.6g adaptive=%.6g margin=%.1f%% "
              "verdict=%s\n",
              cl_comparison_baseline_value(c), cl_comparison_adaptive_value(c),
              100.0 * cl_comparison_margin(c), cl_comparison_verdict(c));
  std::printf("outputs: %s\n", out.c_str());
  // One divergent run is a legitimate comparison outcome; two leave nothing to compare.
  const bool both_diverged =
      metric(cl_comparison_baseline(c), CL_METRIC_DIVERGED) != 0.0 &&
      metric(cl_comparison_adaptive(c), CL_METRIC_DIVERGED) != 0.0;
  cl_comparison_free(c);
  if (both_diverged) {
    std::fprintf(stderr, "cablelift: compare: both runs diverged\n");
    return exit_code(CL_ERR_DIVERGED);
  }
  return kExitOk;
}

int do_validate(const std::string& path) {
  cl_scenario* s = nullptr;
  const cl_status st = cl_scenario_load(path.c_str(), &s);
  if (st != CL_OK) return report(st, "validate");
  std::printf("valid: %s\n", cl_scenario_label(s));
  cl_scenario_free(s);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative cable-suspended payload transport simulator"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate one scenario");
  run_cmd->add_option("scenario", run.scenario, "groupA, groupB, groupC or a JSON file")
      ->required();
  run_cmd->add_option("--mode", run.mode, "controller mode")
      ->check(CLI::IsMember({"adaptive", "baseline"}));
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_option("--dt", run.dt, "integration step (s)");
  run_cmd->add_option("--duration", run.duration, "simulated time (s)");
  run_cmd->add_option("--seed", run.seed, "seed for the initial-state perturbation");

  std::string group;
  std::string compare_out;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run baseline and adaptive modes side by side");
  compare_cmd->add_option("group", group, "groupA, groupB, groupC or a JSON file")
      ->required();
  compare_cmd->add_option("--out", compare_out, "output directory");

  std::string file;
  CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("scenario-file", file, "JSON scenario")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) return do_run(run, *run_cmd);
  if (*compare_cmd) return do_compare(group, compare_out);
  if (*validate_cmd) return do_validate(file);
  return kExitConfig;
}
