#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include "core/errors.hpp"
#include "core/image.hpp"
#include "core/parallel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace defog;

TEST_SUITE("image") {
  TEST_CASE("constructor rejects degenerate shapes") {
    CHECK_THROWS_AS(PlanarImage(2, 5, 3), DimensionError);
    CHECK_THROWS_AS(PlanarImage(5, 2, 1), DimensionError);
    CHECK_THROWS_AS(PlanarImage(5, 5, 2), ParamError);
    CHECK_THROWS_AS(PlanarImage(5, 5, 0), ParamError);
    const PlanarImage img(3, 4, 3);
    CHECK(img.height() == 3);
    CHECK(img.width() == 4);
    CHECK(img.channels() == 3);
    CHECK(img.size() == 36);
    for (double v : img.data()) CHECK(v == 0.0);
  }

  TEST_CASE("from_samples clamps into [0, 1]") {
    std::vector<double> raw(9, 0.25);
    raw[0] = -0.5;
    raw[8] = 1.5;
    const PlanarImage img = PlanarImage::from_samples(3, 3, 1, raw);
    CHECK(img.at(0, 0) == 0.0);
    CHECK(img.at(2, 2) == 1.0);
    CHECK(img.at(1, 1) == 0.25);
    CHECK_THROWS_AS(PlanarImage::from_samples(3, 3, 1, std::vector<double>(8)),
                    DimensionError);
  }

  TEST_CASE("storage is channel planar") {
    PlanarImage img(3, 3, 3);
    img.at(1, 2, 2) = 0.7;
    CHECK(img.plane(2)[1 * 3 + 2] == 0.7);
    CHECK(img.data()[2 * 9 + 1 * 3 + 2] == 0.7);
    CHECK(img.plane(0)[5] == 0.0);
  }

  TEST_CASE("clamp01 counts changed samples") {
    PlanarImage img(3, 3, 1);
    img.data() = {-1.0, 0.0, 0.5, 2.0, 0.9, -0.1, 1.0, 0.3, 7.0};
    CHECK(img.clamp01() == 4);
    auto [lo, hi] = img.minmax();
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
    CHECK(img.all_finite());
    img.at(0, 0) = std::nan("");
    CHECK_FALSE(img.all_finite());
  }

  TEST_CASE("to_gray averages the three channels") {
    PlanarImage img(3, 3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        img.at(i, j, 0) = 0.3;
        img.at(i, j, 1) = 0.6;
        img.at(i, j, 2) = 0.9;
      }
    const PlanarImage gray = to_gray(img);
    CHECK(gray.channels() == 1);
    for (double v : gray.data()) CHECK(v == doctest::Approx(0.6).epsilon(1e-12));

    std::mt19937 rng(7);
    const PlanarImage mono = oracle::random_image(rng, 4, 5, 1);
    const PlanarImage same = to_gray(mono);
    CHECK(oracle::max_abs_diff(mono, same) == 0.0);
  }

  TEST_CASE("gaussian kernel radius, normalization and symmetry") {
    CHECK_THROWS_AS(gaussian_kernel(0.0), ParamError);
    CHECK_THROWS_AS(gaussian_kernel(-1.0), ParamError);

    const Kernel2D k15 = gaussian_kernel(1.5);
    CHECK(k15.radius == 5);
    const Kernel2D k2 = gaussian_kernel(2.0);
    CHECK(k2.radius == 6);
    CHECK(k2.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(k2.separable.has_value());
    CHECK(static_cast<int>(k2.separable->size()) == k2.side());

    // 2-D weights must be the outer product of the 1-D factor.
    for (int dy = -k2.radius; dy <= k2.radius; ++dy)
      for (int dx = -k2.radius; dx <= k2.radius; ++dx) {
        const double sep = (*k2.separable)[dy + k2.radius] *
                           (*k2.separable)[dx + k2.radius];
        CHECK(k2.at(dy, dx) == doctest::Approx(sep).epsilon(1e-12));
        CHECK(k2.at(dy, dx) == k2.at(-dy, -dx));
      }
    CHECK(k2.at(0, 0) > k2.at(0, 1));
  }

  TEST_CASE("convolution preserves constants and range") {
    PlanarImage img(6, 5, 3);
    for (double& v : img.data()) v = 0.37;
    const PlanarImage out = convolve(img, gaussian_kernel(1.2));
    for (double v : out.data()) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));

    std::mt19937 rng(11);
    const PlanarImage noise = oracle::random_image(rng, 10, 9, 3);
    auto [lo, hi] = noise.minmax();
    const PlanarImage blurred = convolve(noise, gaussian_kernel(2.0));
    for (double v : blurred.data()) {
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }

  TEST_CASE("separable convolution matches direct 2-D convolution") {
    std::mt19937 rng(23);
    for (double sigma : {0.8, 1.5, 2.0}) {
      const PlanarImage img = oracle::random_image(rng, 9, 7, 3);
      const PlanarImage fast = convolve(img, gaussian_kernel(sigma));
      const PlanarImage slow = oracle::gauss_direct(img, sigma);
      CHECK(oracle::max_abs_diff(fast, slow) <= 1e-12);
    }
  }

  TEST_CASE("gradient of a column ramp") {
    const int W = 10;
    PlanarImage img(5, W, 1);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < W; ++j) img.at(i, j) = static_cast<double>(j) / W;
    const GradientPair gp = gradient(img);
    for (int i = 0; i < 5; ++i) {
      for (int j = 1; j + 1 < W; ++j)
        CHECK(gp.dj.at(i, j) == doctest::Approx(1.0 / W).epsilon(1e-12));
      // Replicated boundary halves the one-sided difference.
      CHECK(gp.dj.at(i, 0) == doctest::Approx(0.5 / W).epsilon(1e-12));
      CHECK(gp.dj.at(i, W - 1) == doctest::Approx(0.5 / W).epsilon(1e-12));
      for (int j = 0; j < W; ++j) CHECK(gp.di.at(i, j) == 0.0);
    }
  }

  TEST_CASE("gradient matches the direct form") {
    std::mt19937 rng(31);
    const PlanarImage img = oracle::random_image(rng, 8, 11, 3);
    const GradientPair gp = gradient(img);
    PlanarImage di, dj;
    oracle::grad_direct(img, di, dj);
    CHECK(oracle::max_abs_diff(gp.di, di) <= 1e-15);
    CHECK(oracle::max_abs_diff(gp.dj, dj) <= 1e-15);
  }

  TEST_CASE("laplacian of a constant is exactly zero") {
    PlanarImage img(4, 6, 3);
    for (double& v : img.data()) v = 0.6180339887;
    const PlanarImage lap = laplacian(img);
    for (double v : lap.data()) CHECK(v == 0.0);
  }

  TEST_CASE("laplacian of a centered impulse") {
    PlanarImage img(5, 5, 1);
    img.at(2, 2) = 1.0;
    const PlanarImage lap = laplacian(img);
    CHECK(lap.at(2, 2) == -4.0);
    CHECK(lap.at(1, 2) == 1.0);
    CHECK(lap.at(3, 2) == 1.0);
    CHECK(lap.at(2, 1) == 1.0);
    CHECK(lap.at(2, 3) == 1.0);
    CHECK(lap.at(1, 1) == 0.0);
    CHECK(lap.at(0, 2) == 0.0);
  }

  TEST_CASE("laplacian of a linear ramp vanishes in the interior") {
    PlanarImage img(7, 9, 1);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 9; ++j) img.at(i, j) = (2.0 * i + 3.0 * j) / 100.0;
    const PlanarImage lap = laplacian(img);
    for (int i = 1; i < 6; ++i)
      for (int j = 1; j < 8; ++j)
        CHECK(std::abs(lap.at(i, j)) <= 1e-13);
  }

  TEST_CASE("laplacian matches the direct form") {
    std::mt19937 rng(41);
    const PlanarImage img = oracle::random_image(rng, 8, 11, 3);
    CHECK(oracle::max_abs_diff(laplacian(img), oracle::lap_direct(img)) <=
          1e-15);
  }

  TEST_CASE("parallel_blocks covers every index exactly once") {
    CHECK(max_threads() >= 1);
    for (int count : {1, 3, 64, 1000}) {
      std::vector<std::atomic<int>> hits(count);
      parallel_blocks(count, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) hits[i].fetch_add(1);
      });
      for (const auto& h : hits) CHECK(h.load() == 1);
    }
    bool called = false;
    parallel_blocks(0, [&](int, int) { called = true; });
    CHECK_FALSE(called);
  }
}
