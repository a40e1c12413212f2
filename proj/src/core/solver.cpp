#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "core/errors.hpp"
#include "core/format.hpp"

namespace defog {

void validate(const SolverConfig& cfg) {
  if (!(cfg.omega > 0.0) || !(cfg.omega < 1.0))
    throw ParamError("omega must be in (0, 1)");
  if (cfg.patch_radius < 1) throw ParamError("patch_radius must be >= 1");
  if (!(cfg.airlight_fraction > 0.0) || cfg.airlight_fraction > 1.0)
    throw ParamError("airlight_fraction must be in (0, 1]");
  if (!(cfg.refine_sigma > 0.0)) throw ParamError("refine_sigma must be positive");
  if (!(cfg.t_floor > 0.0) || !(cfg.t_floor < 1.0))
    throw ParamError("t_floor must be in (0, 1)");
  if (cfg.lambda_damp < 0.0) throw ParamError("lambda_damp must be non-negative");
  if (cfg.lambda_fid < 0.0) throw ParamError("lambda_fid must be non-negative");
  if (!(cfg.k > 0.0)) throw ParamError("k must be positive");
  if (!(cfg.alpha > 0.0)) throw ParamError("alpha must be positive");
  if (!(cfg.xi > 0.0)) throw ParamError("xi must be positive");
  if (!(cfg.v > 0.0)) throw ParamError("v must be positive");
  if (!(cfg.tau > 0.0)) throw ParamError("tau must be positive");
  if (!(cfg.toll > 0.0)) throw ParamError("toll must be positive");
  if (cfg.max_iters < 1) throw ParamError("max_iters must be >= 1");
  if (!(cfg.eps_rel > 0.0)) throw ParamError("eps_rel must be positive");
}

PlanarImage diffusion_coefficient(const PlanarImage& u_smooth,
                                  const PlanarImage& lap_smooth, double k,
                                  double alpha) {
  if (!(k > 0.0)) throw ParamError("k must be positive");
  if (!(alpha > 0.0)) throw ParamError("alpha must be positive");
  if (!u_smooth.same_shape(lap_smooth))
    throw DimensionError("smoothed image and its laplacian differ in shape");

  PlanarImage g(u_smooth.height(), u_smooth.width(), u_smooth.channels());
  double m = 0.0;
  for (double s : u_smooth.data()) m = std::max(m, std::abs(s));
  if (m == 0.0) return g;  // zero-filled

  const double m_pow = std::pow(m, alpha);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double s_pow = std::pow(std::abs(u_smooth.data()[p]), alpha);
    const double edge = std::abs(lap_smooth.data()[p]) / k;
    g.data()[p] = (2.0 * s_pow / (m_pow + s_pow)) * (1.0 / (1.0 + edge * edge));
  }
  return g;
}

double cfl_bound(double g_max, double h) {
  if (g_max <= 0.0) return std::numeric_limits<double>::infinity();
  return h / g_max;
}

void step(EvolutionState& state, const PlanarImage& guidance,
          const PlanarImage& T, const SolverConfig& cfg) {
  const PlanarImage& u = state.current;
  if (!u.same_shape(state.previous) || !u.same_shape(guidance))
    throw DimensionError("evolution state and guidance differ in shape");
  if (T.channels() != 1 || T.height() != u.height() || T.width() != u.width())
    throw DimensionError("transmission must be a 1-channel plane of the image size");

  const PlanarImage u_smooth = convolve(u, gaussian_kernel(cfg.xi));
  const PlanarImage lap_smooth = laplacian(u_smooth);
  const PlanarImage g = diffusion_coefficient(u_smooth, lap_smooth, cfg.k, cfg.alpha);

  double g_max = 0.0;
  for (double s : g.data()) g_max = std::max(g_max, s);

  PlanarImage weighted = laplacian(u);
  for (std::size_t p = 0; p < weighted.size(); ++p)
    weighted.data()[p] *= cfg.v * g.data()[p];
  const PlanarImage flux = laplacian(weighted);

  // Incremental form of the update: algebraically identical to dividing
  // (2 + lambda*tau) u^n - u^{n-1} - tau^2 F by (1 + lambda*tau), but the
  // zero-forcing fixed point stays bitwise exact.
  const double tau2 = cfg.tau * cfg.tau;
  const double inv_denom = 1.0 / (1.0 + cfg.lambda_damp * cfg.tau);
  const std::size_t pixels = u.pixels();
  PlanarImage next(u.height(), u.width(), u.channels());
  for (int c = 0; c < u.channels(); ++c) {
    const double* un = u.plane(c);
    const double* um = state.previous.plane(c);
    const double* j = guidance.plane(c);
    const double* fx = flux.plane(c);
    const double* t = T.plane(0);
    double* out = next.plane(c);
    for (std::size_t p = 0; p < pixels; ++p) {
      const double fidelity = cfg.lambda_fid * t[p] * t[p] * (un[p] - j[p]);
      const double force = tau2 * (fx[p] + fidelity);
      out[p] = un[p] + ((un[p] - um[p]) - force) * inv_denom;
    }
  }

  const int iter = state.iteration + 1;
  if (!next.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite value in iterate at iteration " << iter;
    throw DivergenceError(iter, msg.str());
  }
  const std::size_t clamped = next.clamp01();
  const double clamped_fraction =
      static_cast<double>(clamped) / static_cast<double>(next.size());

  double diff_sq = 0.0, norm_sq = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double d = next.data()[p] - u.data()[p];
    diff_sq += d * d;
    norm_sq += u.data()[p] * u.data()[p];
  }
  const double rel_err = std::sqrt(diff_sq) / (std::sqrt(norm_sq) + cfg.eps_rel);

  const double bound = cfl_bound(g_max, 1.0);
  if (cfg.tau > bound) {
    if (state.cfl_violations == 0) {
      std::ostringstream msg;
      msg << "cfl violation: tau " << num9(cfg.tau) << " exceeds bound h/max g = "
          << num9(bound) << " at iteration " << iter;
      state.warnings.push_back(msg.str());
    }
    ++state.cfl_violations;
  }
  if (clamped_fraction > 0.01 &&
      (state.clamped_fraction_history.empty() ||
       *std::max_element(state.clamped_fraction_history.begin(),
                         state.clamped_fraction_history.end()) <= 0.01)) {
    std::ostringstream msg;
    msg << "clamping active on " << num9(100.0 * clamped_fraction)
        << "% of samples at iteration " << iter;
    state.warnings.push_back(msg.str());
  }

  state.previous = std::move(state.current);
  state.current = std::move(next);
  state.iteration = iter;
  state.rel_err_history.push_back(rel_err);
  state.g_max_history.push_back(g_max);
  state.clamped_fraction_history.push_back(clamped_fraction);
}

SolveResult solve(const PlanarImage& foggy, const SolverConfig& cfg) {
  validate(cfg);
  EstimateResult est = estimate(foggy, cfg);

  EvolutionState state;
  state.current = est.guidance;
  state.previous = est.guidance;  // zero initial velocity

  while (state.iteration < cfg.max_iters) {
    step(state, est.guidance, est.estimate.transmission, cfg);
    if (state.rel_err_history.back() < cfg.toll) {
      state.converged = true;
      break;
    }
  }

  SolveResult result;
  result.restored = state.current;
  result.state = std::move(state);
  result.estimate = std::move(est.estimate);
  result.guidance = std::move(est.guidance);
  return result;
}

void write_trace(const EvolutionState& state, std::ostream& out) {
  out << "iter,rel_err,g_max,clamped_fraction\n";
  for (int i = 0; i < state.iteration; ++i) {
    out << (i + 1) << ',' << num9(state.rel_err_history[i]) << ','
        << num9(state.g_max_history[i]) << ','
        << num9(state.clamped_fraction_history[i]) << '\n';
  }
}

}  // namespace defog
