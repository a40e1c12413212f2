/* Single-image defogging library: dark-channel atmospheric estimation,
 * fourth-order edge-adaptive PDE restoration, quality metrics, and a batch
 * experiment runner.
 *
 * All functions returning defog_status report DEFOG_OK on success; on any
 * failure they leave output parameters untouched and record a human-readable
 * message retrievable with defog_last_error() (thread-local). Objects are
 * created through defog_*_create/load factories and released with the
 * matching defog_*_free; passing NULL to a free function is a no-op.
 *
 * Images hold double samples in [0, 1], stored plane by plane (all of
 * channel 0 row-major, then channel 1, ...). Dimensions must be at least
 * 3x3 with 1 or 3 channels.
 */

#ifndef DEFOG_H
#define DEFOG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum defog_status {
  DEFOG_OK = 0,
  DEFOG_ERR_PARAM = 1,     /* invalid argument or configuration value */
  DEFOG_ERR_IO = 2,        /* file unreadable/unwritable */
  DEFOG_ERR_FORMAT = 3,    /* unsupported or corrupt image file */
  DEFOG_ERR_DIMENSION = 4, /* image too small or shape mismatch */
  DEFOG_ERR_DIVERGED = 5,  /* non-finite iterate in the evolution */
  DEFOG_ERR_PLAN = 6,      /* invalid experiment plan */
  DEFOG_ERR_PARTIAL = 7,   /* batch finished but some entries failed */
  DEFOG_ERR_INTERNAL = 8   /* unexpected failure */
} defog_status;

typedef struct defog_image defog_image;
typedef struct defog_config defog_config;
typedef struct defog_solution defog_solution;
typedef struct defog_plan defog_plan;

/* Library version, e.g. "1.0.0". */
const char* defog_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* defog_last_error(void);

/* ---- images ---- */

/* Zero-filled image. */
defog_status defog_image_create(int height, int width, int channels,
                                defog_image** out);

/* Copies height*width*channels planar samples, clamping them to [0, 1]. */
defog_status defog_image_from_data(int height, int width, int channels,
                                   const double* samples, defog_image** out);

/* Loads a PNG (8/16-bit gray, palette, or color) or binary PPM file. */
defog_status defog_image_load(const char* path, defog_image** out);

/* Writes an 8-bit PNG (grayscale for 1 channel, RGB for 3). */
defog_status defog_image_save(const defog_image* img, const char* path);

void defog_image_free(defog_image* img);

int defog_image_height(const defog_image* img);
int defog_image_width(const defog_image* img);
int defog_image_channels(const defog_image* img);

/* Copies all samples (planar layout) into buffer; buffer_len must be at
 * least height*width*channels. */
defog_status defog_image_read(const defog_image* img, double* buffer,
                              size_t buffer_len);

/* ---- configuration ---- */

/* Stock parameter set: omega 0.95, patch_radius 7, airlight_fraction 0.001,
 * refine_sigma 8, t_floor 0.1, lambda_damp 1.5, lambda_fid 1.5, k 2,
 * alpha 2, xi 2, v 1, tau 0.05, toll 1e-4, max_iters 500, eps_rel 1e-12. */
defog_status defog_config_create(defog_config** out);

void defog_config_free(defog_config* cfg);

/* Field access by name (the names listed above). Integer fields accept
 * doubles and round to nearest. Unknown names yield DEFOG_ERR_PARAM. */
defog_status defog_config_set(defog_config* cfg, const char* name, double value);
defog_status defog_config_get(const defog_config* cfg, const char* name,
                              double* out);

/* Parses an INI-style config file ([prior]/[pde]/[stopping] sections); any
 * [plan] section in the file is ignored here. */
defog_status defog_config_load(const char* path, defog_config** out);

/* ---- pipeline ---- */

/* Applies the scattering model u = clean*(1-level) + airlight*level.
 * level in [0,1), airlight in (0,1]. With ramp nonzero the transmission
 * instead ramps linearly from (1-level)^2 at the top row to (1-level) at
 * the bottom row. */
defog_status defog_synthesize_fog(const defog_image* clean, double level,
                                  double airlight, int ramp, defog_image** out);

/* Dark-channel estimation chain on a 3-channel image. Any of the output
 * pointers may be NULL when that result is not needed. `guidance` is the
 * recovered radiance, `transmission` the refined 1-channel map. */
defog_status defog_estimate(const defog_image* foggy, const defog_config* cfg,
                            defog_image** guidance, defog_image** transmission,
                            double* airlight);

/* Full restoration: estimate, then evolve the fourth-order PDE until the
 * relative change per iteration drops below toll or max_iters is reached. */
defog_status defog_solve(const defog_image* foggy, const defog_config* cfg,
                         defog_solution** out);

/* ---- solution accessors ---- */

defog_status defog_solution_image(const defog_solution* sol, defog_image** out);
defog_status defog_solution_guidance(const defog_solution* sol, defog_image** out);
defog_status defog_solution_transmission(const defog_solution* sol,
                                         defog_image** out);
int defog_solution_iterations(const defog_solution* sol);
int defog_solution_converged(const defog_solution* sol);
int defog_solution_cfl_violations(const defog_solution* sol);
double defog_solution_airlight(const defog_solution* sol);

/* Last relative-change value (0 if no iterations ran). */
double defog_solution_final_rel_err(const defog_solution* sol);

/* Warning message at index, or NULL past the end. */
const char* defog_solution_warning(const defog_solution* sol, int index);

/* Per-iteration CSV: "iter,rel_err,g_max,clamped_fraction". */
defog_status defog_solution_write_trace(const defog_solution* sol,
                                        const char* path);

void defog_solution_free(defog_solution* sol);

/* ---- metrics ---- */

defog_status defog_mse(const defog_image* ref, const defog_image* test,
                       double* out);
defog_status defog_ssim(const defog_image* ref, const defog_image* test,
                        double* out);

/* Fog-density proxy "fade-s1"; higher = foggier. 3-channel input. */
defog_status defog_fade(const defog_image* img, double* out);

/* Contrast restoration index; *degenerate (optional) is set to 1 when the
 * foggy input has zero gray range and the sentinel 1.0 is returned. */
defog_status defog_cri(const defog_image* foggy, const defog_image* restored,
                       double* out, int* degenerate);

defog_status defog_entropy(const defog_image* img, double* out);
defog_status defog_ag(const defog_image* img, double* out);

/* ---- batch experiments ---- */

/* Loads a plan config file; requires [plan] input= and output_dir=. */
defog_status defog_plan_load(const char* path, defog_plan** out);

/* Runs the clean-reference protocol (fog synthesis sweep x methods) or the
 * no-reference protocol (foggy inputs x methods plus a baseline row) and
 * writes report.csv/report.json into report_dir (defaults to the plan's
 * output_dir when NULL). Out-counts are optional. Returns DEFOG_ERR_PARTIAL
 * when some entries failed but a report was still written. */
defog_status defog_plan_run_reference(const defog_plan* plan,
                                      const char* report_dir, int* n_records,
                                      int* n_failures);
defog_status defog_plan_run_noreference(const defog_plan* plan,
                                        const char* report_dir, int* n_records,
                                        int* n_failures);

void defog_plan_free(defog_plan* plan);

/* Writes the bundled procedural test scenes as PNGs into dir. */
defog_status defog_corpus_write(const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* DEFOG_H */
