#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "defog/defog.h"

namespace {

using ImagePtr = std::unique_ptr<defog_image, decltype(&defog_image_free)>;
using ConfigPtr = std::unique_ptr<defog_config, decltype(&defog_config_free)>;
using SolutionPtr = std::unique_ptr<defog_solution, decltype(&defog_solution_free)>;
using PlanPtr = std::unique_ptr<defog_plan, decltype(&defog_plan_free)>;

// 2 = unusable invocation (bad plan/params), 1 = runtime failure.
int fail(const std::string& what, defog_status st) {
  std::fprintf(stderr, "defog: %s: %s\n", what.c_str(), defog_last_error());
  return (st == DEFOG_ERR_PLAN || st == DEFOG_ERR_PARAM) ? 2 : 1;
}

struct CliOptions {
  std::string config_file;
  std::vector<std::pair<std::string, double>> overrides;
};

// One flag per tunable parameter, applied on top of --config (or defaults).
void add_config_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_file,
                  "Config file ([prior]/[pde]/[stopping] sections)");
  static const char* kFields[] = {
      "omega",      "patch_radius", "airlight_fraction", "refine_sigma",
      "t_floor",    "lambda_damp",  "lambda_fid",        "k",
      "alpha",      "xi",           "v",                 "tau",
      "toll",       "max_iters",    "eps_rel"};
  for (const char* name : kFields) {
    cmd->add_option_function<double>(
        std::string("--") + name,
        [&opts, name](double v) { opts.overrides.emplace_back(name, v); },
        std::string("Override ") + name);
  }
}

int build_config(const CliOptions& opts, ConfigPtr& cfg) {
  defog_config* raw = nullptr;
  defog_status st = opts.config_file.empty()
                        ? defog_config_create(&raw)
                        : defog_config_load(opts.config_file.c_str(), &raw);
  if (st != DEFOG_OK) return fail("loading config", st);
  cfg.reset(raw);
  for (const auto& [name, value] : opts.overrides) {
    st = defog_config_set(cfg.get(), name.c_str(), value);
    if (st != DEFOG_OK) return fail("setting --" + name, st);
  }
  return 0;
}

int run_single(const std::string& in, const std::string& out,
               const CliOptions& opts, const std::string& trace_path,
               const std::string& guidance_path) {
  ConfigPtr cfg(nullptr, defog_config_free);
  if (int rc = build_config(opts, cfg)) return rc;

  defog_image* raw_img = nullptr;
  defog_status st = defog_image_load(in.c_str(), &raw_img);
  if (st != DEFOG_OK) return fail("loading " + in, st);
  ImagePtr foggy(raw_img, defog_image_free);

  defog_solution* raw_sol = nullptr;
  st = defog_solve(foggy.get(), cfg.get(), &raw_sol);
  if (st != DEFOG_OK) return fail("restoring " + in, st);
  SolutionPtr sol(raw_sol, defog_solution_free);

  defog_image* raw_restored = nullptr;
  st = defog_solution_image(sol.get(), &raw_restored);
  if (st != DEFOG_OK) return fail("reading solution", st);
  ImagePtr restored(raw_restored, defog_image_free);
  st = defog_image_save(restored.get(), out.c_str());
  if (st != DEFOG_OK) return fail("saving " + out, st);

  if (!guidance_path.empty()) {
    defog_image* raw_guidance = nullptr;
    st = defog_solution_guidance(sol.get(), &raw_guidance);
    if (st != DEFOG_OK) return fail("reading guidance", st);
    ImagePtr guidance(raw_guidance, defog_image_free);
    st = defog_image_save(guidance.get(), guidance_path.c_str());
    if (st != DEFOG_OK) return fail("saving " + guidance_path, st);
  }
  if (!trace_path.empty()) {
    st = defog_solution_write_trace(sol.get(), trace_path.c_str());
    if (st != DEFOG_OK) return fail("writing " + trace_path, st);
  }

  std::printf("airlight %.4f, %d iterations, %s, final rel err %.3e\n",
              defog_solution_airlight(sol.get()),
              defog_solution_iterations(sol.get()),
              defog_solution_converged(sol.get()) ? "converged" : "not converged",
              defog_solution_final_rel_err(sol.get()));
  for (int i = 0;; ++i) {
    const char* w = defog_solution_warning(sol.get(), i);
    if (!w) break;
    std::printf("warning: %s\n", w);
  }
  return 0;
}

int run_synth(const std::string& in, const std::string& out, double level,
              double airlight, bool ramp) {
  defog_image* raw_clean = nullptr;
  defog_status st = defog_image_load(in.c_str(), &raw_clean);
  if (st != DEFOG_OK) return fail("loading " + in, st);
  ImagePtr clean(raw_clean, defog_image_free);

  defog_image* raw_foggy = nullptr;
  st = defog_synthesize_fog(clean.get(), level, airlight, ramp ? 1 : 0, &raw_foggy);
  if (st != DEFOG_OK) return fail("synthesizing fog", st);
  ImagePtr foggy(raw_foggy, defog_image_free);

  st = defog_image_save(foggy.get(), out.c_str());
  if (st != DEFOG_OK) return fail("saving " + out, st);
  return 0;
}

int run_bench(const std::string& plan_path, const std::string& report_dir,
              bool reference) {
  defog_plan* raw_plan = nullptr;
  defog_status st = defog_plan_load(plan_path.c_str(), &raw_plan);
  if (st != DEFOG_OK) return fail("loading plan " + plan_path, st);
  PlanPtr plan(raw_plan, defog_plan_free);

  int n_records = 0, n_failures = 0;
  const char* dir = report_dir.empty() ? nullptr : report_dir.c_str();
  st = reference
           ? defog_plan_run_reference(plan.get(), dir, &n_records, &n_failures)
           : defog_plan_run_noreference(plan.get(), dir, &n_records, &n_failures);
  std::printf("%d records, %d failures\n", n_records, n_failures);
  if (st == DEFOG_ERR_PARTIAL) {
    std::fprintf(stderr, "defog: %s\n", defog_last_error());
    return 1;
  }
  if (st != DEFOG_OK) return fail("running plan", st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-image defogging via dark-channel estimation and "
               "fourth-order PDE restoration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", defog_version());

  std::string in, out, trace_path, guidance_path;
  CliOptions opts;
  CLI::App* single = app.add_subcommand("single", "Restore one image");
  single->add_option("input", in, "Foggy input image (PNG or PPM)")->required();
  single->add_option("output", out, "Restored output PNG")->required();
  add_config_flags(single, opts);
  single->add_option("--trace", trace_path, "Write per-iteration CSV trace");
  single->add_option("--save-guidance", guidance_path,
                     "Also save the recovered guidance image");

  std::string synth_in, synth_out;
  double level = 0.0, airlight = 0.9;
  bool ramp = false;
  CLI::App* synth = app.add_subcommand("synth", "Apply synthetic fog");
  synth->add_option("input", synth_in, "Clean input image")->required();
  synth->add_option("output", synth_out, "Foggy output PNG")->required();
  synth->add_option("--level", level, "Fog level in [0,1)")->required();
  synth->add_option("--airlight", airlight, "Fog airlight in (0,1]");
  synth->add_flag("--ramp", ramp, "Depth-ramp fog instead of homogeneous");

  std::string ref_plan, ref_report;
  CLI::App* bench_ref = app.add_subcommand(
      "bench-ref", "Fog-sweep benchmark against clean references");
  bench_ref->add_option("plan", ref_plan, "Plan config file")->required();
  bench_ref->add_option("--report-dir", ref_report,
                        "Report directory (default: plan output_dir)");

  std::string nr_plan, nr_report;
  CLI::App* bench_nr = app.add_subcommand(
      "bench-nr", "No-reference benchmark on real foggy images");
  bench_nr->add_option("plan", nr_plan, "Plan config file")->required();
  bench_nr->add_option("--report-dir", nr_report,
                       "Report directory (default: plan output_dir)");

  std::string corpus_dir;
  CLI::App* corpus = app.add_subcommand("corpus", "Write the bundled test scenes");
  corpus->add_option("dir", corpus_dir, "Destination directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (single->parsed())
    return run_single(in, out, opts, trace_path, guidance_path);
  if (synth->parsed()) return run_synth(synth_in, synth_out, level, airlight, ramp);
  if (bench_ref->parsed()) return run_bench(ref_plan, ref_report, true);
  if (bench_nr->parsed()) return run_bench(nr_plan, nr_report, false);
  if (corpus->parsed()) {
    const defog_status st = defog_corpus_write(corpus_dir.c_str());
    if (st != DEFOG_OK) return fail("writing corpus", st);
    std::printf("corpus written to %s\n", corpus_dir.c_str());
    return 0;
  }
  return 2;
}
