#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace defog {

// H x W x C raster with channel-planar storage: plane c occupies
// data[c*H*W, (c+1)*H*W). Images coming out of the codecs or any clamping
// operation hold intensities in [0, 1]; derivative planes produced by the
// stencil operators may hold arbitrary finite reals.
class PlanarImage {
 public:
  PlanarImage() = default;

  // Zero-filled image. Requires height, width >= 3 and channels in {1, 3}.
  PlanarImage(int height, int width, int channels);

  // Builds an image from raw samples (row-major per plane) and clamps them
  // to [0, 1]. samples.size() must equal height*width*channels.
  static PlanarImage from_samples(int height, int width, int channels,
                                  std::vector<double> samples);

  int height() const { return h_; }
  int width() const { return w_; }
  int channels() const { return c_; }
  std::size_t pixels() const { return static_cast<std::size_t>(h_) * w_; }
  std::size_t size() const { return data_.size(); }

  double& at(int i, int j, int c = 0) {
    return data_[(static_cast<std::size_t>(c) * h_ + i) * w_ + j];
  }
  double at(int i, int j, int c = 0) const {
    return data_[(static_cast<std::size_t>(c) * h_ + i) * w_ + j];
  }

  double* plane(int c) { return data_.data() + static_cast<std::size_t>(c) * pixels(); }
  const double* plane(int c) const {
    return data_.data() + static_cast<std::size_t>(c) * pixels();
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const PlanarImage& o) const {
    return h_ == o.h_ && w_ == o.w_ && c_ == o.c_;
  }

  // Clamps every sample to [0, 1] in place; returns how many samples changed.
  std::size_t clamp01();

  std::pair<double, double> minmax() const;
  bool all_finite() const;

 private:
  int h_ = 0, w_ = 0, c_ = 0;
  std::vector<double> data_;
};

// Square (2*radius+1)^2 stencil of dimensionless weights, stored row-major.
// Kernels built by gaussian_kernel() additionally carry their separable 1-D
// factor so convolve() can run the two-pass form.
struct Kernel2D {
  int radius = 0;
  std::vector<double> weights;  // side*side values, side = 2*radius+1
  std::optional<std::vector<double>> separable;  // 1-D factor, length side

  int side() const { return 2 * radius + 1; }
  double at(int dy, int dx) const {
    return weights[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
  }
  double weight_sum() const;
};

// Channel mean (R+G+B)/3; 1-channel inputs pass through unchanged.
PlanarImage to_gray(const PlanarImage& img);

// Normalized Gaussian with radius ceil(3*sigma). Throws ParamError for
// sigma <= 0.
Kernel2D gaussian_kernel(double sigma);

// Per-channel 2-D convolution with replicate (clamp-to-edge) boundaries.
PlanarImage convolve(const PlanarImage& img, const Kernel2D& k);

// Central-difference gradient pair, unit grid spacing, replicate boundaries.
// di(i,j) = (u(i+1,j) - u(i-1,j)) / 2 runs down the rows,
// dj(i,j) = (u(i,j+1) - u(i,j-1)) / 2 across the columns.
struct GradientPair {
  PlanarImage di;
  PlanarImage dj;
};
GradientPair gradient(const PlanarImage& img);

// 5-point Laplacian, unit grid spacing, replicate boundaries. The two axis
// contributions are accumulated separately so constant inputs map to exact
// zeros.
PlanarImage laplacian(const PlanarImage& img);

}  // namespace defog
