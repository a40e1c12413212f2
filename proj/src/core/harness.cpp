#include "core/harness.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/codec.hpp"
#include "core/errors.hpp"
#include "core/format.hpp"
#include "core/haze.hpp"

namespace defog {

namespace {

namespace fs = std::filesystem;

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::string restored_name(const RunRecord& rec) {
  std::string name = rec.image_id + "_" + rec.method;
  if (rec.fog_level) name += "_L" + num9(*rec.fog_level);
  return name;
}

// Restores `foggy` with the requested method and assembles the record.
// `ref` enables the full-reference metrics.
RunRecord restore_and_score(const PlanarImage& foggy, const PlanarImage* ref,
                            const std::string& image_id, const std::string& method,
                            std::optional<double> level, const ExperimentPlan& plan,
                            PlanarImage& restored_out) {
  RunRecord rec;
  rec.image_id = image_id;
  rec.method = method;
  rec.fog_level = level;

  const auto start = std::chrono::steady_clock::now();
  if (method == "dcp") {
    restored_out = estimate(foggy, plan.config).guidance;
  } else if (method == "proposed") {
    SolveResult sol = solve(foggy, plan.config);
    restored_out = std::move(sol.restored);
    rec.iterations = sol.state.iteration;
    rec.converged = sol.state.converged;
    rec.warnings = sol.state.warnings;
    rec.cfl_violations = sol.state.cfl_violations;
    if (plan.emit_traces) {
      std::ostringstream trace;
      write_trace(sol.state, trace);
      rec.trace = trace.str();
    }
  } else {
    throw PlanError("unknown method '" + method + "'");
  }
  const auto stop = std::chrono::steady_clock::now();
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();

  rec.report = evaluate(ref, foggy, restored_out);
  return rec;
}

void save_restored(const PlanarImage& restored, const RunRecord& rec,
                   const ExperimentPlan& plan) {
  fs::create_directories(plan.output_dir);
  save_image(restored, (fs::path(plan.output_dir) / (restored_name(rec) + ".png")).string());
}

}  // namespace

ExperimentPlan make_plan(const PlanFile& file) {
  ExperimentPlan plan;
  if (file.inputs.empty()) throw PlanError("plan has no input images");
  plan.inputs = file.inputs;
  if (file.fog_levels) plan.fog_levels = *file.fog_levels;
  for (double level : plan.fog_levels)
    if (level < 0.0 || level >= 1.0)
      throw PlanError("fog level " + num9(level) + " outside [0, 1)");
  if (file.methods) plan.methods = *file.methods;
  if (plan.methods.empty()) throw PlanError("plan has no methods");
  for (const std::string& m : plan.methods)
    if (m != "dcp" && m != "proposed")
      throw PlanError("unknown method '" + m + "' (expected dcp or proposed)");
  if (!(file.fog_airlight > 0.0) || file.fog_airlight > 1.0)
    throw PlanError("fog_airlight must be in (0, 1]");
  plan.fog_airlight = file.fog_airlight;
  if (!file.output_dir) throw PlanError("plan has no output_dir");
  plan.output_dir = *file.output_dir;
  plan.emit_traces = file.emit_traces;
  plan.config = file.solver;
  validate(plan.config);
  return plan;
}

ExperimentResult run_reference_experiment(const ExperimentPlan& plan) {
  ExperimentResult result;
  for (const std::string& input : plan.inputs) {
    const std::string id = stem_of(input);
    PlanarImage clean;
    try {
      clean = load_image(input);
    } catch (const Error& e) {
      result.failures.push_back({id, "load", std::nullopt, e.what()});
      continue;
    }
    for (double level : plan.fog_levels) {
      FogSpec spec;
      spec.level = level;
      spec.airlight = plan.fog_airlight;
      PlanarImage foggy;
      try {
        foggy = synthesize_fog(clean, spec);
      } catch (const Error& e) {
        result.failures.push_back({id, "synth", level, e.what()});
        continue;
      }
      for (const std::string& method : plan.methods) {
        try {
          PlanarImage restored;
          RunRecord rec =
              restore_and_score(foggy, &clean, id, method, level, plan, restored);
          save_restored(restored, rec, plan);
          result.records.push_back(std::move(rec));
        } catch (const Error& e) {
          result.failures.push_back({id, method, level, e.what()});
        }
      }
    }
  }
  return result;
}

ExperimentResult run_noreference_experiment(const ExperimentPlan& plan) {
  ExperimentResult result;
  for (const std::string& input : plan.inputs) {
    const std::string id = stem_of(input);
    PlanarImage foggy;
    try {
      foggy = load_image(input);
    } catch (const Error& e) {
      result.failures.push_back({id, "load", std::nullopt, e.what()});
      continue;
    }

    RunRecord baseline;
    baseline.image_id = id;
    baseline.method = "foggy";
    baseline.report = evaluate(nullptr, foggy, foggy);
    result.records.push_back(std::move(baseline));

    for (const std::string& method : plan.methods) {
      try {
        PlanarImage restored;
        RunRecord rec = restore_and_score(foggy, nullptr, id, method,
                                          std::nullopt, plan, restored);
        save_restored(restored, rec, plan);
        result.records.push_back(std::move(rec));
      } catch (const Error& e) {
        result.failures.push_back({id, method, std::nullopt, e.what()});
      }
    }
  }
  return result;
}

void emit_report(const ExperimentResult& result, const std::string& dir) {
  if (result.records.empty()) throw ParamError("no records to report");
  fs::create_directories(dir);

  std::ofstream csv(fs::path(dir) / "report.csv", std::ios::binary);
  if (!csv) throw IoError("cannot write report.csv in " + dir);
  csv << "image,method,fog_level,mse,ssim,fade,cri,entropy,ag,iterations,converged\n";
  for (const RunRecord& rec : result.records) {
    csv << rec.image_id << ',' << rec.method << ','
        << (rec.fog_level ? num9(*rec.fog_level) : "") << ','
        << csv_cells(rec.report) << ',' << rec.iterations << ','
        << (rec.converged ? "true" : "false") << '\n';
  }
  csv.close();

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const RunRecord& rec : result.records) {
    nlohmann::ordered_json row;
    row["image"] = rec.image_id;
    row["method"] = rec.method;
    if (rec.fog_level) row["fog_level"] = *rec.fog_level;
    else row["fog_level"] = nullptr;
    row["metrics"] = to_json(rec.report);
    row["iterations"] = rec.iterations;
    row["converged"] = rec.converged;
    row["wall_time_ms"] = rec.wall_time_ms;
    row["warnings"] = rec.warnings;
    row["cfl_violations"] = rec.cfl_violations;
    if (!rec.trace.empty()) {
      const std::string trace_name = restored_name(rec) + ".trace.csv";
      std::ofstream trace(fs::path(dir) / trace_name, std::ios::binary);
      if (!trace) throw IoError("cannot write trace " + trace_name);
      trace << rec.trace;
      row["trace"] = trace_name;
    }
    records.push_back(std::move(row));
  }

  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const RunFailure& f : result.failures) {
    nlohmann::ordered_json row;
    row["image"] = f.image_id;
    row["method"] = f.method;
    if (f.fog_level) row["fog_level"] = *f.fog_level;
    else row["fog_level"] = nullptr;
    row["error"] = f.error;
    failures.push_back(std::move(row));
  }

  nlohmann::ordered_json report;
  report["records"] = std::move(records);
  report["failures"] = std::move(failures);

  std::ofstream json(fs::path(dir) / "report.json", std::ios::binary);
  if (!json) throw IoError("cannot write report.json in " + dir);
  json << report.dump(2) << '\n';
}

}  // namespace defog
