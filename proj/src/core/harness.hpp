#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/config_io.hpp"
#include "core/metrics.hpp"
#include "core/solver.hpp"

namespace defog {

struct ExperimentPlan {
  std::vector<std::string> inputs;
  std::vector<double> fog_levels{0.1, 0.2, 0.3};
  std::vector<std::string> methods{"dcp", "proposed"};
  double fog_airlight = 0.9;
  SolverConfig config;
  std::string output_dir;
  bool emit_traces = false;
};

// Validated plan from a parsed config file: inputs and output_dir must be
// present, methods must be a non-empty subset of {dcp, proposed}, fog levels
// must lie in [0, 1). Violations raise PlanError.
ExperimentPlan make_plan(const PlanFile& file);

// One table row. `trace` holds the per-iteration convergence CSV when the
// plan asked for traces and the method actually iterated.
struct RunRecord {
  std::string image_id;
  std::string method;
  std::optional<double> fog_level;
  MetricReport report;
  int iterations = 0;
  bool converged = true;
  double wall_time_ms = 0.0;
  std::vector<std::string> warnings;
  int cfl_violations = 0;
  std::string trace;
};

struct RunFailure {
  std::string image_id;
  std::string method;
  std::optional<double> fog_level;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<RunFailure> failures;
};

// Clean ground-truth protocol: every input x fog level x method gets fog
// synthesized, restored ("dcp" = recovered guidance only, "proposed" = full
// evolution), scored against the clean original, and the restored PNG saved
// under plan.output_dir. Failures are recorded and skipped.
ExperimentResult run_reference_experiment(const ExperimentPlan& plan);

// Real-foggy protocol: per input, a "foggy" baseline row (no restoration,
// CRI identically 1) followed by one row per method with no-reference
// metrics only. fog_levels are ignored.
ExperimentResult run_noreference_experiment(const ExperimentPlan& plan);

// Writes report.csv, report.json and any traces into dir. CSV columns:
//   image,method,fog_level,mse,ssim,fade,cri,entropy,ag,iterations,converged
// Wall time and warnings appear only in report.json so the CSV is
// byte-identical across reruns of the same plan. ParamError when there are
// no records.
void emit_report(const ExperimentResult& result, const std::string& dir);

}  // namespace defog
