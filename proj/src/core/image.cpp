#include "core/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace defog {

namespace {

void check_shape(int height, int width, int channels) {
  if (channels != 1 && channels != 3)
    throw ParamError("channel count must be 1 or 3, got " + std::to_string(channels));
  if (height < 3 || width < 3)
    throw DimensionError("image must be at least 3x3, got " + std::to_string(height) +
                         "x" + std::to_string(width));
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

}  // namespace

PlanarImage::PlanarImage(int height, int width, int channels)
    : h_(height), w_(width), c_(channels) {
  check_shape(height, width, channels);
  data_.assign(static_cast<std::size_t>(h_) * w_ * c_, 0.0);
}

PlanarImage PlanarImage::from_samples(int height, int width, int channels,
                                      std::vector<double> samples) {
  check_shape(height, width, channels);
  if (samples.size() != static_cast<std::size_t>(height) * width * channels)
    throw DimensionError("sample count does not match image shape");
  PlanarImage img;
  img.h_ = height;
  img.w_ = width;
  img.c_ = channels;
  img.data_ = std::move(samples);
  img.clamp01();
  return img;
}

std::size_t PlanarImage::clamp01() {
  std::size_t changed = 0;
  for (double& v : data_) {
    if (v < 0.0) {
      v = 0.0;
      ++changed;
    } else if (v > 1.0) {
      v = 1.0;
      ++changed;
    }
  }
  return changed;
}

std::pair<double, double> PlanarImage::minmax() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : data_) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

bool PlanarImage::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Kernel2D::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

PlanarImage to_gray(const PlanarImage& img) {
  if (img.channels() == 1) return img;
  PlanarImage out(img.height(), img.width(), 1);
  const double* r = img.plane(0);
  const double* g = img.plane(1);
  const double* b = img.plane(2);
  double* o = out.plane(0);
  const std::size_t n = img.pixels();
  for (std::size_t p = 0; p < n; ++p) o[p] = (r[p] + g[p] + b[p]) / 3.0;
  return out;
}

Kernel2D gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ParamError("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int side = 2 * radius + 1;

  std::vector<double> profile(side);
  double profile_sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    profile[d + radius] = std::exp(-(static_cast<double>(d) * d) / (2.0 * sigma * sigma));
    profile_sum += profile[d + radius];
  }

  Kernel2D k;
  k.radius = radius;
  k.weights.resize(static_cast<std::size_t>(side) * side);
  double total = 0.0;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const double w = profile[a] * profile[b];
      k.weights[static_cast<std::size_t>(a) * side + b] = w;
      total += w;
    }
  for (double& w : k.weights) w /= total;

  std::vector<double> factor(side);
  for (int d = 0; d < side; ++d) factor[d] = profile[d] / profile_sum;
  k.separable = std::move(factor);
  return k;
}

namespace {

void convolve_separable(const PlanarImage& img, const std::vector<double>& f, int radius,
                        PlanarImage& out) {
  const int h = img.height(), w = img.width();
  PlanarImage tmp(h, w, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    const double* src = img.plane(c);
    double* mid = tmp.plane(c);
    // Horizontal pass.
    parallel_blocks(h, [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i)
        for (int j = 0; j < w; ++j) {
          double acc = 0.0;
          for (int d = -radius; d <= radius; ++d)
            acc += f[d + radius] * src[i * w + clamp_index(j + d, w)];
          mid[i * w + j] = acc;
        }
    });
    double* dst = out.plane(c);
    // Vertical pass.
    parallel_blocks(h, [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i)
        for (int j = 0; j < w; ++j) {
          double acc = 0.0;
          for (int d = -radius; d <= radius; ++d)
            acc += f[d + radius] * mid[clamp_index(i + d, h) * w + j];
          dst[i * w + j] = acc;
        }
    });
  }
}

void convolve_direct(const PlanarImage& img, const Kernel2D& k, PlanarImage& out) {
  const int h = img.height(), w = img.width(), r = k.radius, side = k.side();
  for (int c = 0; c < img.channels(); ++c) {
    const double* src = img.plane(c);
    double* dst = out.plane(c);
    parallel_blocks(h, [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i)
        for (int j = 0; j < w; ++j) {
          double acc = 0.0;
          for (int a = 0; a < side; ++a) {
            const int ii = clamp_index(i + a - r, h);
            for (int b = 0; b < side; ++b)
              acc += k.weights[static_cast<std::size_t>(a) * side + b] *
                     src[ii * w + clamp_index(j + b - r, w)];
          }
          dst[i * w + j] = acc;
        }
    });
  }
}

}  // namespace

PlanarImage convolve(const PlanarImage& img, const Kernel2D& k) {
  if (k.radius < 0 || k.weights.size() !=
                          static_cast<std::size_t>(k.side()) * k.side())
    throw ParamError("malformed kernel");
  PlanarImage out(img.height(), img.width(), img.channels());
  if (k.separable)
    convolve_separable(img, *k.separable, k.radius, out);
  else
    convolve_direct(img, k, out);
  return out;
}

GradientPair gradient(const PlanarImage& img) {
  const int h = img.height(), w = img.width();
  GradientPair g{PlanarImage(h, w, img.channels()), PlanarImage(h, w, img.channels())};
  for (int c = 0; c < img.channels(); ++c) {
    const double* src = img.plane(c);
    double* di = g.di.plane(c);
    double* dj = g.dj.plane(c);
    parallel_blocks(h, [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i) {
        const int up = clamp_index(i - 1, h), down = clamp_index(i + 1, h);
        for (int j = 0; j < w; ++j) {
          const int left = clamp_index(j - 1, w), right = clamp_index(j + 1, w);
          di[i * w + j] = (src[down * w + j] - src[up * w + j]) / 2.0;
          dj[i * w + j] = (src[i * w + right] - src[i * w + left]) / 2.0;
        }
      }
    });
  }
  return g;
}

PlanarImage laplacian(const PlanarImage& img) {
  const int h = img.height(), w = img.width();
  PlanarImage out(h, w, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    const double* src = img.plane(c);
    double* dst = out.plane(c);
    parallel_blocks(h, [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i) {
        const int up = clamp_index(i - 1, h), down = clamp_index(i + 1, h);
        for (int j = 0; j < w; ++j) {
          const int left = clamp_index(j - 1, w), right = clamp_index(j + 1, w);
          const double center = src[i * w + j];
          const double along_i = src[down * w + j] + src[up * w + j] - 2.0 * center;
          const double along_j = src[i * w + right] + src[i * w + left] - 2.0 * center;
          dst[i * w + j] = along_i + along_j;
        }
      }
    });
  }
  return out;
}

}  // namespace defog
