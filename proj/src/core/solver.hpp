#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/haze.hpp"
#include "core/image.hpp"
#include "core/solver_config.hpp"

namespace defog {

// Rolling state of the damped second-order-in-time evolution. `current` is
// u^n and `previous` is u^{n-1}; the histories grow by one entry per step,
// so their length always equals `iteration`.
struct EvolutionState {
  PlanarImage current;
  PlanarImage previous;
  int iteration = 0;
  std::vector<double> rel_err_history;
  std::vector<double> g_max_history;
  std::vector<double> clamped_fraction_history;
  std::vector<std::string> warnings;
  int cfl_violations = 0;
  bool converged = false;
};

// Edge-adaptive diffusion coefficient evaluated on the pre-smoothed iterate:
//   g = [2|s|^alpha / (M^alpha + |s|^alpha)] * [1 / (1 + (|lap|/k)^2)]
// where s = u_smooth, lap = lap_smooth, and M is the maximum of |s| over
// every pixel and channel. M = 0 yields g = 0 everywhere. Values land in
// [0, 1] by construction.
PlanarImage diffusion_coefficient(const PlanarImage& u_smooth,
                                  const PlanarImage& lap_smooth, double k,
                                  double alpha);

// Largest stable time step h / g_max; +infinity when g_max <= 0. Assumes
// h > 0.
double cfl_bound(double g_max, double h);

// One explicit update
//   u^{n+1} = [(2 + lambda*tau) u^n - u^{n-1}
//              - tau^2 (lap(v g lap u^n) + lambda_f T^2 (u^n - J))]
//             / (1 + lambda*tau)
// followed by a clamp to [0, 1]. The relative change
// ||u^{n+1} - u^n||_2 / (||u^n||_2 + eps_rel) is measured after the clamp
// and appended to rel_err_history. Non-finite values before the clamp raise
// DivergenceError with the failing iteration; tau above cfl_bound(max g, 1)
// records a warning and bumps cfl_violations but does not stop the run.
// T is 1-channel and multiplies all channels identically.
void step(EvolutionState& state, const PlanarImage& guidance,
          const PlanarImage& T, const SolverConfig& cfg);

struct SolveResult {
  PlanarImage restored;
  EvolutionState state;
  HazeEstimate estimate;
  PlanarImage guidance;
};

// Full restoration: estimate atmospheric parameters, seed the evolution with
// the recovered radiance (zero initial velocity), and iterate step() until
// the relative change drops below cfg.toll or max_iters is hit. Hitting the
// cap is not an error; state.converged reports which way it ended.
SolveResult solve(const PlanarImage& foggy, const SolverConfig& cfg);

// CSV trace, one row per iteration: "iter,rel_err,g_max,clamped_fraction".
void write_trace(const EvolutionState& state, std::ostream& out);

// Throws ParamError on out-of-range fields (non-positive tau/toll/k/alpha/
// xi/v/max_iters, negative damping or fidelity weights, omega outside (0,1),
// t_floor outside (0,1), patch_radius < 1, airlight_fraction outside (0,1]).
void validate(const SolverConfig& cfg);

}  // namespace defog
