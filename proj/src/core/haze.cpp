#include "core/haze.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace defog {

namespace {

// Sliding min over a window of +-radius, truncated at the ends.
void window_min_1d(const double* src, double* dst, int n, int stride, int radius) {
  for (int p = 0; p < n; ++p) {
    const int lo = std::max(0, p - radius);
    const int hi = std::min(n - 1, p + radius);
    double m = src[lo * stride];
    for (int q = lo + 1; q <= hi; ++q) m = std::min(m, src[q * stride]);
    dst[p * stride] = m;
  }
}

}  // namespace

PlanarImage dark_channel(const PlanarImage& img, int patch_radius) {
  if (patch_radius < 1) throw ParamError("patch radius must be >= 1");
  const int h = img.height(), w = img.width();

  PlanarImage cmin(h, w, 1);
  if (img.channels() == 1) {
    cmin.data() = img.data();
  } else {
    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    double* o = cmin.plane(0);
    const std::size_t n = img.pixels();
    for (std::size_t p = 0; p < n; ++p) o[p] = std::min(r[p], std::min(g[p], b[p]));
  }

  // Square window min as two 1-D passes: rows then columns.
  PlanarImage rows(h, w, 1);
  parallel_blocks(h, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i)
      window_min_1d(cmin.plane(0) + static_cast<std::size_t>(i) * w,
                    rows.plane(0) + static_cast<std::size_t>(i) * w, w, 1, patch_radius);
  });
  PlanarImage out(h, w, 1);
  parallel_blocks(w, [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j)
      window_min_1d(rows.plane(0) + j, out.plane(0) + j, h, w, patch_radius);
  });
  return out;
}

double estimate_airlight(const PlanarImage& img, const PlanarImage& dark,
                         double top_fraction) {
  if (!(top_fraction > 0.0) || top_fraction > 1.0)
    throw ParamError("top_fraction must be in (0, 1]");
  if (dark.channels() != 1 || dark.height() != img.height() ||
      dark.width() != img.width())
    throw DimensionError("dark channel shape does not match image");

  const std::size_t n = img.pixels();
  std::size_t count = static_cast<std::size_t>(
      std::ceil(top_fraction * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, 1, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const double* d = dark.plane(0);
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [d](std::size_t a, std::size_t b) {
                      if (d[a] != d[b]) return d[a] > d[b];
                      return a < b;  // row-major tie break
                    });

  double a = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t p = order[s];
    double gray;
    if (img.channels() == 1) {
      gray = img.plane(0)[p];
    } else {
      gray = (img.plane(0)[p] + img.plane(1)[p] + img.plane(2)[p]) / 3.0;
    }
    a = std::max(a, gray);
  }
  return std::clamp(a, 0.05, 1.0);
}

PlanarImage transmission(const PlanarImage& dark, double airlight, double omega) {
  if (!(airlight > 0.0)) throw ParamError("airlight must be positive");
  if (!(omega > 0.0) || !(omega < 1.0)) throw ParamError("omega must be in (0, 1)");
  PlanarImage t(dark.height(), dark.width(), 1);
  const double* d = dark.plane(0);
  double* o = t.plane(0);
  for (std::size_t p = 0; p < dark.pixels(); ++p) o[p] = 1.0 - omega * d[p] / airlight;
  t.clamp01();
  return t;
}

PlanarImage refine_transmission(const PlanarImage& t_rough, double sigma) {
  PlanarImage t = convolve(t_rough, gaussian_kernel(sigma));
  t.clamp01();
  return t;
}

PlanarImage recover_radiance(const PlanarImage& img, const PlanarImage& transmission,
                             double airlight, double t_floor) {
  if (!(t_floor > 0.0) || !(t_floor < 1.0))
    throw ParamError("t_floor must be in (0, 1)");
  if (transmission.channels() != 1 || transmission.height() != img.height() ||
      transmission.width() != img.width())
    throw DimensionError("transmission shape does not match image");

  PlanarImage out(img.height(), img.width(), img.channels());
  const double* t = transmission.plane(0);
  for (int c = 0; c < img.channels(); ++c) {
    const double* u = img.plane(c);
    double* j = out.plane(c);
    for (std::size_t p = 0; p < img.pixels(); ++p)
      j[p] = (u[p] - airlight) / std::max(t[p], t_floor) + airlight;
  }
  out.clamp01();
  return out;
}

namespace {

void check_fog_spec(const FogSpec& spec) {
  if (spec.level < 0.0 || spec.level >= 1.0)
    throw ParamError("fog level must be in [0, 1)");
  if (!(spec.airlight > 0.0) || spec.airlight > 1.0)
    throw ParamError("fog airlight must be in (0, 1]");
}

}  // namespace

PlanarImage synthesize_fog(const PlanarImage& clean, const FogSpec& spec) {
  check_fog_spec(spec);
  const double t = 1.0 - spec.level;
  PlanarImage out(clean.height(), clean.width(), clean.channels());
  for (std::size_t s = 0; s < clean.size(); ++s)
    out.data()[s] = clean.data()[s] * t + spec.airlight * spec.level;
  out.clamp01();
  return out;
}

PlanarImage synthesize_fog_ramp(const PlanarImage& clean, const FogSpec& spec) {
  check_fog_spec(spec);
  const int h = clean.height(), w = clean.width();
  const double t_bottom = 1.0 - spec.level;
  const double t_top = t_bottom * t_bottom;
  PlanarImage out(h, w, clean.channels());
  for (int c = 0; c < clean.channels(); ++c) {
    const double* u = clean.plane(c);
    double* o = out.plane(c);
    for (int i = 0; i < h; ++i) {
      const double frac = h > 1 ? static_cast<double>(i) / (h - 1) : 1.0;
      const double t = t_top + (t_bottom - t_top) * frac;
      for (int j = 0; j < w; ++j)
        o[static_cast<std::size_t>(i) * w + j] =
            u[static_cast<std::size_t>(i) * w + j] * t + spec.airlight * (1.0 - t);
    }
  }
  out.clamp01();
  return out;
}

EstimateResult estimate(const PlanarImage& img, const SolverConfig& cfg) {
  if (img.channels() != 3) throw ParamError("estimate requires a 3-channel image");
  HazeEstimate est;
  est.dark_channel = dark_channel(img, cfg.patch_radius);
  est.airlight = estimate_airlight(img, est.dark_channel, cfg.airlight_fraction);
  PlanarImage rough = transmission(est.dark_channel, est.airlight, cfg.omega);
  est.transmission = refine_transmission(rough, cfg.refine_sigma);
  PlanarImage guidance =
      recover_radiance(img, est.transmission, est.airlight, cfg.t_floor);
  return {std::move(est), std::move(guidance)};
}

}  // namespace defog
