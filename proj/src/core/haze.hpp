#pragma once

#include "core/image.hpp"
#include "core/solver_config.hpp"

namespace defog {

// Atmospheric parameters estimated from one hazy input.
struct HazeEstimate {
  PlanarImage dark_channel;  // 1-channel, [0,1]
  double airlight = 0.0;     // scalar A, clamped to [0.05, 1]
  PlanarImage transmission;  // 1-channel, [0,1]
};

// Synthetic fog description: homogeneous transmission T = 1 - level.
struct FogSpec {
  double level = 0.0;     // fog strength in [0, 1)
  double airlight = 0.9;  // scalar A in (0, 1]
};

// Per-pixel channel minimum followed by a square min filter with the given
// patch radius (window truncated at the borders). Gray inputs skip the
// channel minimum.
PlanarImage dark_channel(const PlanarImage& img, int patch_radius);

// Picks the ceil(top_fraction * H * W) brightest dark-channel pixels (ties
// broken by row-major index) and returns the maximum gray-mean intensity of
// img at those coordinates, clamped to [0.05, 1].
double estimate_airlight(const PlanarImage& img, const PlanarImage& dark,
                         double top_fraction);

// t(x) = 1 - omega * dark(x) / A, clamped to [0, 1].
PlanarImage transmission(const PlanarImage& dark, double airlight, double omega);

// Gaussian smoothing of the rough transmission map, re-clamped to [0, 1].
PlanarImage refine_transmission(const PlanarImage& t_rough, double sigma);

// J(x) = (u(x) - A) / max(T(x), t_floor) + A per channel, clamped to [0, 1].
PlanarImage recover_radiance(const PlanarImage& img, const PlanarImage& transmission,
                             double airlight, double t_floor);

// Forward scattering model with homogeneous transmission:
// u = clean * (1 - level) + airlight * level.
PlanarImage synthesize_fog(const PlanarImage& clean, const FogSpec& spec);

// Depth-ramp variant: transmission interpolates linearly from (1-level)^2 at
// the top row to (1-level) at the bottom row.
PlanarImage synthesize_fog_ramp(const PlanarImage& clean, const FogSpec& spec);

// Full estimation chain: dark channel, airlight, rough + refined
// transmission, then radiance recovery. `guidance` is the recovered J that
// seeds the PDE evolution.
struct EstimateResult {
  HazeEstimate estimate;
  PlanarImage guidance;
};
EstimateResult estimate(const PlanarImage& img, const SolverConfig& cfg);

}  // namespace defog
