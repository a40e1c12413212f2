#pragma once

#include <optional>
#include <string>

#include "core/image.hpp"

#include <json.hpp>

namespace defog {

// One row of quality measures. mse/ssim are present only when a reference
// image was available; cri_degenerate marks a zero-range input where cri
// fell back to its sentinel value of 1.
struct MetricReport {
  std::optional<double> mse;
  std::optional<double> ssim;
  double fade = 0.0;
  double cri = 0.0;
  double entropy = 0.0;
  double ag = 0.0;
  bool cri_degenerate = false;
};

// Mean squared difference over every pixel and channel, intensities in [0,1].
double mse(const PlanarImage& ref, const PlanarImage& test);

// Mean structural similarity of the gray-mean planes. Gaussian window of
// side min(11, H, W) forced odd, sigma 1.5, stabilizers C1 = 1e-4 and
// C2 = 9e-4 on the unit dynamic range; the local map is evaluated only where
// the window fits entirely and averaged over that valid region.
double ssim(const PlanarImage& ref, const PlanarImage& test);

// Deterministic fog-density proxy, higher = foggier:
//   100 * mean(dark_channel(img, 7)) / (ag(img) + std(gray(img)) + 1e-3)
// where std is the population standard deviation. The formula is this
// artifact's own contract, versioned as "fade-s1".
double fade_surrogate(const PlanarImage& img);
inline constexpr const char* kFadeVersion = "fade-s1";

// Contrast restoration index: gray-plane dynamic range of the restored
// image over that of the foggy input. A zero input range yields 1 and sets
// *degenerate when supplied.
double cri(const PlanarImage& foggy, const PlanarImage& restored,
           bool* degenerate = nullptr);

// Shannon entropy in bits of the gray-mean plane quantized to 256 levels
// (bin = floor(v*255) clamped to [0,255]).
double entropy(const PlanarImage& img);

// Mean central-difference gradient magnitude of the gray-mean plane over
// interior pixels; boundary rows/columns are excluded so linear ramps score
// their exact slope.
double ag(const PlanarImage& img);

// Full- or no-reference bundle: mse/ssim are filled only when ref != null.
MetricReport evaluate(const PlanarImage* ref, const PlanarImage& foggy,
                      const PlanarImage& test);

// Flat JSON object; mse/ssim keys appear only when present.
nlohmann::ordered_json to_json(const MetricReport& r);

// CSV cells "mse,ssim,fade,cri,entropy,ag" (absent values -> empty cells).
std::string csv_cells(const MetricReport& r);

}  // namespace defog
