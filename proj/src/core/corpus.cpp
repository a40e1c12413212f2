#include "core/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "core/codec.hpp"
#include "core/haze.hpp"

namespace defog {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rgb {
  double r, g, b;
};

Rgb mix(const Rgb& a, const Rgb& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

void put(PlanarImage& img, int i, int j, const Rgb& c) {
  img.at(i, j, 0) = std::clamp(c.r, 0.02, 0.95);
  img.at(i, j, 1) = std::clamp(c.g, 0.02, 0.95);
  img.at(i, j, 2) = std::clamp(c.b, 0.02, 0.95);
}

Rgb get(const PlanarImage& img, int i, int j) {
  return {img.at(i, j, 0), img.at(i, j, 1), img.at(i, j, 2)};
}

// Soft-edged disc blended over the background; Gaussian falloff keeps the
// scene free of hard edges.
void paint_blob(PlanarImage& img, double ci, double cj, double radius,
                const Rgb& color, double strength) {
  const int h = img.height(), w = img.width();
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const double d2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
      const double wgt = strength * std::exp(-d2 / (radius * radius));
      if (wgt < 1e-3) continue;
      put(img, i, j, mix(get(img, i, j), color, wgt));
    }
}

// Bright strip flush against an image edge, carrying a fine interior
// texture behind a soft rim. Flush placement matters: border-truncated
// min-filter windows keep the strip's eroded dark-channel core wide, so
// even after the broad Gaussian refinement the transmission estimate stays
// near its floor inside the strip. The recovered guidance then amplifies
// the fine texture several times over, which is the high-frequency error
// the evolution is expected to remove. The strip also serves as the
// brightest region, anchoring the airlight estimate.
void paint_strip(PlanarImage& img, int i0, int i1, int j0, int j1,
                 double base, double tex_amp, double pi_, double pj_) {
  const int h = img.height(), w = img.width();
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double depth = 1e9;
      if (i0 > 0) depth = std::min(depth, double(i - i0));
      if (i1 < h - 1) depth = std::min(depth, double(i1 - i));
      if (j0 > 0) depth = std::min(depth, double(j - j0));
      if (j1 < w - 1) depth = std::min(depth, double(j1 - j));
      const double blend = 1.0 / (1.0 + std::exp(-(depth - 2.0) / 1.5));
      if (blend < 1e-3) continue;
      const double t = tex_amp * blend *
                       std::sin(2.0 * kPi * i / pi_) *
                       std::sin(2.0 * kPi * j / pj_);
      const Rgb wall{base + t, base + 0.005 + t, base - 0.012 + t};
      put(img, i, j, mix(get(img, i, j), wall, blend));
    }
}

// Saturated mid-bright band between the dark bulk and the bright strip. It
// keeps one channel near zero so the dark-channel estimate stays accurate,
// while its mid-gray level absorbs the transmission halo that the broad
// refinement smears outward from the strip.
void paint_apron(PlanarImage& img, int i0, int i1, int j0, int j1,
                 const Rgb& color, bool vertical) {
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) {
      const double depth = vertical ? double(j - j0) : double(i - i0);
      const double blend = 1.0 / (1.0 + std::exp(-(depth - 2.0) / 1.5));
      if (blend < 1e-3) continue;
      put(img, i, j, mix(get(img, i, j), color, blend));
    }
}

// Bottom portion of a square scene, graded in horizontal bands from the
// dark bulk into a bright textured floor. Channel levels are interpolated
// between row knots so that content near the low-transmission pocket stays
// close to the airlight level, where the amplification the pocket causes
// in the recovered guidance is harmless, while the dark-to-bright rise
// happens far enough above the pocket that the transmission estimate is
// accurate there. Texture appears only in the deep rows where the estimate
// bottoms out and the guidance magnifies it several times over.
void paint_floor(PlanarImage& img, int tex_row, double tex_amp, double pi_,
                 double pj_, const Rgb knots[4]) {
  const int h = img.height(), w = img.width();
  const int rows[4] = {30, 36, 40, 46};
  for (int i = 30; i < h; ++i) {
    Rgb c = knots[3];
    for (int s = 0; s < 3; ++s)
      if (i <= rows[s + 1]) {
        const double f = double(i - rows[s]) / (rows[s + 1] - rows[s]);
        c = mix(knots[s], knots[s + 1], f);
        break;
      }
    for (int j = 0; j < w; ++j) {
      double t = 0.0;
      if (i >= tex_row)
        t = tex_amp * std::sin(2.0 * kPi * i / pi_) *
            std::sin(2.0 * kPi * j / pj_);
      put(img, i, j, {c.r + t, c.g + t, c.b + t});
    }
  }
}

}  // namespace

// Every bulk color keeps one channel near the 0.02 floor so each
// dark-channel window finds a near-zero minimum; the scattering prior is
// then nearly exact outside the bright strip and the recovered guidance
// tracks the clean scene closely in the dark regions.
PlanarImage scene_blocks() {
  PlanarImage img(64, 64, 3);
  for (int i = 0; i < 64; ++i) {
    const double t = i / 29.0;
    const Rgb base = mix({0.04, 0.07, 0.20}, {0.13, 0.10, 0.04}, std::min(t, 1.0));
    for (int j = 0; j < 64; ++j) {
      const double m = 0.015 * std::sin(2.0 * kPi * i / 28.0) *
                       std::sin(2.0 * kPi * j / 26.0);
      put(img, i, j, {base.r + m, base.g + m, base.b + m});
    }
  }
  paint_blob(img, 18.0, 14.0, 7.0, {0.40, 0.08, 0.03}, 0.85);
  paint_blob(img, 10.0, 40.0, 6.0, {0.04, 0.26, 0.08}, 0.85);
  paint_blob(img, 22.0, 52.0, 5.0, {0.03, 0.08, 0.28}, 0.8);
  const Rgb knots[4] = {{0.13, 0.10, 0.04},
                        {0.86, 0.64, 0.05},
                        {0.87, 0.80, 0.30},
                        {0.88, 0.885, 0.868}};
  paint_floor(img, 52, 0.020, 3.5, 3.3, knots);
  return img;
}

PlanarImage scene_stripes() {
  PlanarImage img(64, 96, 3);
  const Rgb rust{0.34, 0.06, 0.03}, teal{0.03, 0.18, 0.26};
  for (int i = 0; i < 64; ++i) {
    const double shade = 0.85 + 0.15 * (i / 63.0);
    for (int j = 0; j < 96; ++j) {
      const double band = 0.5 + 0.5 * std::sin(2.0 * kPi * j / 26.0);
      Rgb c = mix(rust, teal, band);
      put(img, i, j, {c.r * shade, c.g * shade, c.b * shade});
    }
  }
  paint_blob(img, 44.0, 22.0, 8.0, {0.36, 0.22, 0.03}, 0.8);
  paint_blob(img, 16.0, 44.0, 7.0, {0.04, 0.24, 0.12}, 0.8);
  paint_apron(img, 0, 63, 64, 73, {0.55, 0.42, 0.03}, true);
  paint_strip(img, 0, 63, 74, 95, 0.87, 0.020, 3.8, 3.2);
  return img;
}

PlanarImage scene_checker() {
  PlanarImage img(64, 64, 3);
  const Rgb amber{0.30, 0.18, 0.03}, slate{0.03, 0.13, 0.24};
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double chk = 0.5 + 0.5 * std::sin(2.0 * kPi * i / 22.0) *
                                   std::sin(2.0 * kPi * j / 22.0);
      put(img, i, j, mix(amber, slate, chk));
    }
  paint_blob(img, 12.0, 46.0, 6.0, {0.40, 0.06, 0.08}, 0.8);
  paint_blob(img, 22.0, 10.0, 5.0, {0.05, 0.28, 0.08}, 0.75);
  const Rgb knots[4] = {{0.16, 0.14, 0.05},
                        {0.84, 0.66, 0.05},
                        {0.86, 0.78, 0.28},
                        {0.89, 0.895, 0.878}};
  paint_floor(img, 52, 0.020, 3.4, 3.6, knots);
  return img;
}

PlanarImage foggy_ramp_scene() {
  FogSpec spec;
  spec.level = 0.35;
  spec.airlight = 0.88;
  return synthesize_fog_ramp(scene_blocks(), spec);
}

PlanarImage foggy_dense_scene() {
  FogSpec spec;
  spec.level = 0.45;
  spec.airlight = 0.92;
  return synthesize_fog(scene_stripes(), spec);
}

std::vector<CorpusEntry> bundled_corpus() {
  std::vector<CorpusEntry> entries;
  entries.push_back({"clean_blocks", scene_blocks(), false});
  entries.push_back({"clean_stripes", scene_stripes(), false});
  entries.push_back({"clean_checker", scene_checker(), false});
  entries.push_back({"foggy_ramp", foggy_ramp_scene(), true});
  entries.push_back({"foggy_dense", foggy_dense_scene(), true});
  return entries;
}

CorpusPaths write_corpus(const std::string& dir) {
  std::filesystem::create_directories(dir);
  CorpusPaths paths;
  for (const CorpusEntry& e : bundled_corpus()) {
    const std::string path = (std::filesystem::path(dir) / (e.name + ".png")).string();
    save_image(e.image, path);
    (e.foggy ? paths.foggy : paths.clean).push_back(path);
  }
  return paths;
}

}  // namespace defog
