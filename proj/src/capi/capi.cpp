#include "defog/defog.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "core/codec.hpp"
#include "core/config_io.hpp"
#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/haze.hpp"
#include "core/metrics.hpp"
#include "core/solver.hpp"

struct defog_image {
  defog::PlanarImage img;
};
struct defog_config {
  defog::SolverConfig cfg;
};
struct defog_solution {
  defog::SolveResult result;
};
struct defog_plan {
  defog::ExperimentPlan plan;
};

namespace {

thread_local std::string g_last_error;

defog_status set_error(defog_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
defog_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return DEFOG_OK;
  } catch (const defog::DivergenceError& e) {
    return set_error(DEFOG_ERR_DIVERGED, e.what());
  } catch (const defog::ParamError& e) {
    return set_error(DEFOG_ERR_PARAM, e.what());
  } catch (const defog::IoError& e) {
    return set_error(DEFOG_ERR_IO, e.what());
  } catch (const defog::FormatError& e) {
    return set_error(DEFOG_ERR_FORMAT, e.what());
  } catch (const defog::DimensionError& e) {
    return set_error(DEFOG_ERR_DIMENSION, e.what());
  } catch (const defog::PlanError& e) {
    return set_error(DEFOG_ERR_PLAN, e.what());
  } catch (const std::exception& e) {
    return set_error(DEFOG_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(DEFOG_ERR_INTERNAL, "unknown error");
  }
}

defog_status null_arg() { return set_error(DEFOG_ERR_PARAM, "null argument"); }

double* config_field(defog::SolverConfig& cfg, const std::string& name,
                     int** int_field) {
  *int_field = nullptr;
  if (name == "omega") return &cfg.omega;
  if (name == "patch_radius") { *int_field = &cfg.patch_radius; return nullptr; }
  if (name == "airlight_fraction") return &cfg.airlight_fraction;
  if (name == "refine_sigma") return &cfg.refine_sigma;
  if (name == "t_floor") return &cfg.t_floor;
  if (name == "lambda_damp") return &cfg.lambda_damp;
  if (name == "lambda_fid") return &cfg.lambda_fid;
  if (name == "k") return &cfg.k;
  if (name == "alpha") return &cfg.alpha;
  if (name == "xi") return &cfg.xi;
  if (name == "v") return &cfg.v;
  if (name == "tau") return &cfg.tau;
  if (name == "toll") return &cfg.toll;
  if (name == "max_iters") { *int_field = &cfg.max_iters; return nullptr; }
  if (name == "eps_rel") return &cfg.eps_rel;
  return nullptr;
}

}  // namespace

extern "C" {

const char* defog_version(void) { return "1.0.0"; }

const char* defog_last_error(void) { return g_last_error.c_str(); }

defog_status defog_image_create(int height, int width, int channels,
                                defog_image** out) {
  if (!out) return null_arg();
  return guarded([&] { *out = new defog_image{defog::PlanarImage(height, width, channels)}; });
}

defog_status defog_image_from_data(int height, int width, int channels,
                                   const double* samples, defog_image** out) {
  if (!samples || !out) return null_arg();
  return guarded([&] {
    const std::size_t n = static_cast<std::size_t>(height > 0 ? height : 0) *
                          static_cast<std::size_t>(width > 0 ? width : 0) *
                          static_cast<std::size_t>(channels > 0 ? channels : 0);
    std::vector<double> data(samples, samples + n);
    *out = new defog_image{
        defog::PlanarImage::from_samples(height, width, channels, std::move(data))};
  });
}

defog_status defog_image_load(const char* path, defog_image** out) {
  if (!path || !out) return null_arg();
  return guarded([&] { *out = new defog_image{defog::load_image(path)}; });
}

defog_status defog_image_save(const defog_image* img, const char* path) {
  if (!img || !path) return null_arg();
  return guarded([&] { defog::save_image(img->img, path); });
}

void defog_image_free(defog_image* img) { delete img; }

int defog_image_height(const defog_image* img) { return img ? img->img.height() : 0; }
int defog_image_width(const defog_image* img) { return img ? img->img.width() : 0; }
int defog_image_channels(const defog_image* img) {
  return img ? img->img.channels() : 0;
}

defog_status defog_image_read(const defog_image* img, double* buffer,
                              size_t buffer_len) {
  if (!img || !buffer) return null_arg();
  if (buffer_len < img->img.size())
    return set_error(DEFOG_ERR_PARAM, "buffer too small for image samples");
  std::memcpy(buffer, img->img.data().data(), img->img.size() * sizeof(double));
  return DEFOG_OK;
}

defog_status defog_config_create(defog_config** out) {
  if (!out) return null_arg();
  return guarded([&] { *out = new defog_config{}; });
}

void defog_config_free(defog_config* cfg) { delete cfg; }

defog_status defog_config_set(defog_config* cfg, const char* name, double value) {
  if (!cfg || !name) return null_arg();
  int* int_field = nullptr;
  double* field = config_field(cfg->cfg, name, &int_field);
  if (int_field) {
    *int_field = static_cast<int>(std::llround(value));
    return DEFOG_OK;
  }
  if (!field)
    return set_error(DEFOG_ERR_PARAM, std::string("unknown config field '") + name + "'");
  *field = value;
  return DEFOG_OK;
}

defog_status defog_config_get(const defog_config* cfg, const char* name,
                              double* out) {
  if (!cfg || !name || !out) return null_arg();
  defog::SolverConfig& mutable_cfg = const_cast<defog_config*>(cfg)->cfg;
  int* int_field = nullptr;
  double* field = config_field(mutable_cfg, name, &int_field);
  if (int_field) {
    *out = static_cast<double>(*int_field);
    return DEFOG_OK;
  }
  if (!field)
    return set_error(DEFOG_ERR_PARAM, std::string("unknown config field '") + name + "'");
  *out = *field;
  return DEFOG_OK;
}

defog_status defog_config_load(const char* path, defog_config** out) {
  if (!path || !out) return null_arg();
  return guarded([&] {
    defog::PlanFile file = defog::load_config_file(path);
    *out = new defog_config{file.solver};
  });
}

defog_status defog_synthesize_fog(const defog_image* clean, double level,
                                  double airlight, int ramp, defog_image** out) {
  if (!clean || !out) return null_arg();
  return guarded([&] {
    defog::FogSpec spec;
    spec.level = level;
    spec.airlight = airlight;
    *out = new defog_image{ramp ? defog::synthesize_fog_ramp(clean->img, spec)
                                : defog::synthesize_fog(clean->img, spec)};
  });
}

defog_status defog_estimate(const defog_image* foggy, const defog_config* cfg,
                            defog_image** guidance, defog_image** transmission,
                            double* airlight) {
  if (!foggy || !cfg) return null_arg();
  return guarded([&] {
    defog::EstimateResult res = defog::estimate(foggy->img, cfg->cfg);
    if (guidance) *guidance = new defog_image{std::move(res.guidance)};
    if (transmission)
      *transmission = new defog_image{std::move(res.estimate.transmission)};
    if (airlight) *airlight = res.estimate.airlight;
  });
}

defog_status defog_solve(const defog_image* foggy, const defog_config* cfg,
                         defog_solution** out) {
  if (!foggy || !cfg || !out) return null_arg();
  return guarded([&] {
    *out = new defog_solution{defog::solve(foggy->img, cfg->cfg)};
  });
}

defog_status defog_solution_image(const defog_solution* sol, defog_image** out) {
  if (!sol || !out) return null_arg();
  return guarded([&] { *out = new defog_image{sol->result.restored}; });
}

defog_status defog_solution_guidance(const defog_solution* sol, defog_image** out) {
  if (!sol || !out) return null_arg();
  return guarded([&] { *out = new defog_image{sol->result.guidance}; });
}

defog_status defog_solution_transmission(const defog_solution* sol,
                                         defog_image** out) {
  if (!sol || !out) return null_arg();
  return guarded([&] { *out = new defog_image{sol->result.estimate.transmission}; });
}

int defog_solution_iterations(const defog_solution* sol) {
  return sol ? sol->result.state.iteration : 0;
}

int defog_solution_converged(const defog_solution* sol) {
  return sol && sol->result.state.converged ? 1 : 0;
}

int defog_solution_cfl_violations(const defog_solution* sol) {
  return sol ? sol->result.state.cfl_violations : 0;
}

double defog_solution_airlight(const defog_solution* sol) {
  return sol ? sol->result.estimate.airlight : 0.0;
}

double defog_solution_final_rel_err(const defog_solution* sol) {
  if (!sol || sol->result.state.rel_err_history.empty()) return 0.0;
  return sol->result.state.rel_err_history.back();
}

const char* defog_solution_warning(const defog_solution* sol, int index) {
  if (!sol || index < 0 ||
      index >= static_cast<int>(sol->result.state.warnings.size()))
    return nullptr;
  return sol->result.state.warnings[static_cast<std::size_t>(index)].c_str();
}

defog_status defog_solution_write_trace(const defog_solution* sol,
                                        const char* path) {
  if (!sol || !path) return null_arg();
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw defog::IoError(std::string("cannot write trace file: ") + path);
    defog::write_trace(sol->result.state, out);
  });
}

void defog_solution_free(defog_solution* sol) { delete sol; }

defog_status defog_mse(const defog_image* ref, const defog_image* test,
                       double* out) {
  if (!ref || !test || !out) return null_arg();
  return guarded([&] { *out = defog::mse(ref->img, test->img); });
}

defog_status defog_ssim(const defog_image* ref, const defog_image* test,
                        double* out) {
  if (!ref || !test || !out) return null_arg();
  return guarded([&] { *out = defog::ssim(ref->img, test->img); });
}

defog_status defog_fade(const defog_image* img, double* out) {
  if (!img || !out) return null_arg();
  return guarded([&] { *out = defog::fade_surrogate(img->img); });
}

defog_status defog_cri(const defog_image* foggy, const defog_image* restored,
                       double* out, int* degenerate) {
  if (!foggy || !restored || !out) return null_arg();
  return guarded([&] {
    bool flag = false;
    *out = defog::cri(foggy->img, restored->img, &flag);
    if (degenerate) *degenerate = flag ? 1 : 0;
  });
}

defog_status defog_entropy(const defog_image* img, double* out) {
  if (!img || !out) return null_arg();
  return guarded([&] { *out = defog::entropy(img->img); });
}

defog_status defog_ag(const defog_image* img, double* out) {
  if (!img || !out) return null_arg();
  return guarded([&] { *out = defog::ag(img->img); });
}

defog_status defog_plan_load(const char* path, defog_plan** out) {
  if (!path || !out) return null_arg();
  return guarded([&] {
    defog::PlanFile file = defog::load_config_file(path);
    *out = new defog_plan{defog::make_plan(file)};
  });
}

namespace {

defog_status run_plan(const defog_plan* plan, const char* report_dir,
                      int* n_records, int* n_failures, bool reference) {
  if (!plan) return null_arg();
  defog::ExperimentResult result;
  const defog_status st = guarded([&] {
    result = reference ? defog::run_reference_experiment(plan->plan)
                       : defog::run_noreference_experiment(plan->plan);
    if (!result.records.empty()) {
      const std::string dir = report_dir ? report_dir : plan->plan.output_dir;
      defog::emit_report(result, dir);
    }
  });
  if (n_records) *n_records = static_cast<int>(result.records.size());
  if (n_failures) *n_failures = static_cast<int>(result.failures.size());
  if (st != DEFOG_OK) return st;
  if (!result.failures.empty())
    return set_error(DEFOG_ERR_PARTIAL,
                     std::to_string(result.failures.size()) +
                         " of " +
                         std::to_string(result.records.size() +
                                        result.failures.size()) +
                         " entries failed");
  if (result.records.empty())
    return set_error(DEFOG_ERR_PLAN, "plan produced no records");
  return DEFOG_OK;
}

}  // namespace

defog_status defog_plan_run_reference(const defog_plan* plan,
                                      const char* report_dir, int* n_records,
                                      int* n_failures) {
  return run_plan(plan, report_dir, n_records, n_failures, true);
}

defog_status defog_plan_run_noreference(const defog_plan* plan,
                                        const char* report_dir, int* n_records,
                                        int* n_failures) {
  return run_plan(plan, report_dir, n_records, n_failures, false);
}

void defog_plan_free(defog_plan* plan) { delete plan; }

defog_status defog_corpus_write(const char* dir) {
  if (!dir) return null_arg();
  return guarded([&] { defog::write_corpus(dir); });
}

}  // extern "C"
