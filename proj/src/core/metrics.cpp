#include "core/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/format.hpp"
#include "core/haze.hpp"

namespace defog {

double mse(const PlanarImage& ref, const PlanarImage& test) {
  if (!ref.same_shape(test)) throw DimensionError("mse inputs differ in shape");
  double acc = 0.0;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    const double d = ref.data()[p] - test.data()[p];
    acc += d * d;
  }
  return acc / static_cast<double>(ref.size());
}

namespace {

// Normalized 2-D Gaussian window of the requested radius (the usual
// 3*sigma radius rule does not apply here; SSIM fixes the side length).
std::vector<double> ssim_window(int radius, double sigma) {
  const int side = 2 * radius + 1;
  std::vector<double> profile(side);
  for (int d = -radius; d <= radius; ++d)
    profile[d + radius] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  std::vector<double> w(static_cast<std::size_t>(side) * side);
  double total = 0.0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      w[static_cast<std::size_t>(y) * side + x] = profile[y] * profile[x];
      total += w[static_cast<std::size_t>(y) * side + x];
    }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

double ssim(const PlanarImage& ref, const PlanarImage& test) {
  if (!ref.same_shape(test)) throw DimensionError("ssim inputs differ in shape");
  const PlanarImage a = to_gray(ref);
  const PlanarImage b = to_gray(test);
  const int h = a.height(), w = a.width();

  int side = std::min({11, h, w});
  if (side % 2 == 0) --side;
  const int r = (side - 1) / 2;
  const std::vector<double> win = ssim_window(r, 1.5);

  constexpr double c1 = 1e-4;
  constexpr double c2 = 9e-4;

  double acc = 0.0;
  std::size_t count = 0;
  for (int i = r; i < h - r; ++i) {
    for (int j = r; j < w - r; ++j) {
      double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
      std::size_t s = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx, ++s) {
          const double x = a.at(i + dy, j + dx);
          const double y = b.at(i + dy, j + dx);
          mu_a += win[s] * x;
          mu_b += win[s] * y;
          aa += win[s] * x * x;
          bb += win[s] * y * y;
          ab += win[s] * x * y;
        }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
      const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
      acc += num / den;
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

double fade_surrogate(const PlanarImage& img) {
  if (img.channels() != 3)
    throw ParamError("fade surrogate requires a 3-channel image");
  const PlanarImage dark = dark_channel(img, 7);
  double dark_mean = 0.0;
  for (double v : dark.data()) dark_mean += v;
  dark_mean /= static_cast<double>(dark.size());

  const PlanarImage gray = to_gray(img);
  double mean = 0.0;
  for (double v : gray.data()) mean += v;
  mean /= static_cast<double>(gray.size());
  double var = 0.0;
  for (double v : gray.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(gray.size());

  return 100.0 * dark_mean / (ag(img) + std::sqrt(var) + 1e-3);
}

double cri(const PlanarImage& foggy, const PlanarImage& restored,
           bool* degenerate) {
  const auto [f_lo, f_hi] = to_gray(foggy).minmax();
  const auto [r_lo, r_hi] = to_gray(restored).minmax();
  if (degenerate) *degenerate = false;
  const double f_range = f_hi - f_lo;
  if (f_range <= 0.0) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  return (r_hi - r_lo) / f_range;
}

double entropy(const PlanarImage& img) {
  const PlanarImage gray = to_gray(img);
  std::array<std::size_t, 256> hist{};
  for (double v : gray.data()) {
    int bin = static_cast<int>(std::floor(v * 255.0));
    bin = std::clamp(bin, 0, 255);
    ++hist[static_cast<std::size_t>(bin)];
  }
  const double n = static_cast<double>(gray.size());
  double bits = 0.0;
  for (std::size_t c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    bits -= p * std::log2(p);
  }
  return bits;
}

double ag(const PlanarImage& img) {
  const PlanarImage gray = to_gray(img);
  const int h = gray.height(), w = gray.width();
  double acc = 0.0;
  for (int i = 1; i < h - 1; ++i)
    for (int j = 1; j < w - 1; ++j) {
      const double di = (gray.at(i + 1, j) - gray.at(i - 1, j)) / 2.0;
      const double dj = (gray.at(i, j + 1) - gray.at(i, j - 1)) / 2.0;
      acc += std::sqrt(di * di + dj * dj);
    }
  return acc / (static_cast<double>(h - 2) * static_cast<double>(w - 2));
}

MetricReport evaluate(const PlanarImage* ref, const PlanarImage& foggy,
                      const PlanarImage& test) {
  MetricReport r;
  if (ref) {
    r.mse = mse(*ref, test);
    r.ssim = ssim(*ref, test);
  }
  r.fade = fade_surrogate(test);
  r.cri = cri(foggy, test, &r.cri_degenerate);
  r.entropy = entropy(test);
  r.ag = ag(test);
  return r;
}

nlohmann::ordered_json to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  if (r.mse) j["mse"] = *r.mse;
  if (r.ssim) j["ssim"] = *r.ssim;
  j["fade"] = r.fade;
  j["cri"] = r.cri;
  j["entropy"] = r.entropy;
  j["ag"] = r.ag;
  j["cri_degenerate"] = r.cri_degenerate;
  return j;
}

std::string csv_cells(const MetricReport& r) {
  std::string row;
  row += r.mse ? num9(*r.mse) : "";
  row += ',';
  row += r.ssim ? num9(*r.ssim) : "";
  row += ',';
  row += num9(r.fade);
  row += ',';
  row += num9(r.cri);
  row += ',';
  row += num9(r.entropy);
  row += ',';
  row += num9(r.ag);
  return row;
}

}  // namespace defog
