#pragma once

namespace defog {

// Every prior and PDE parameter in one place. Defaults reproduce the
// reference experiment settings; an empty config file yields exactly these.
struct SolverConfig {
  // Dark-channel prior.
  double omega = 0.95;             // haze retention factor, in (0, 1)
  int patch_radius = 7;            // dark-channel window radius (15x15)
  double airlight_fraction = 0.001;  // top fraction of dark pixels for A
  double refine_sigma = 8.0;       // Gaussian sigma for transmission refinement
  double t_floor = 0.1;            // lower bound T0 on transmission

  // Telegraph PDE.
  double lambda_damp = 1.5;  // damping weight (lambda)
  double lambda_fid = 1.5;   // fidelity weight (lambda_f)
  double k = 2.0;            // edge threshold in the diffusion coefficient
  double alpha = 2.0;        // intensity exponent in the diffusion coefficient
  double xi = 2.0;           // Gaussian pre-smoothing sigma
  double v = 1.0;            // scalar multiplier on the fourth-order flux
  double tau = 0.05;         // explicit time step

  // Stopping.
  double toll = 1e-4;     // relative-error tolerance
  int max_iters = 500;    // iteration cap
  double eps_rel = 1e-12;  // denominator guard in the relative error
};

}  // namespace defog
