#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "core/haze.hpp"
#include "core/image.hpp"
#include "core/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace defog;

namespace {

PlanarImage constant_gray3(int h, int w, double v) {
  PlanarImage img(h, w, 3);
  for (double& s : img.data()) s = v;
  return img;
}

PlanarImage checkerboard(int h, int w, double lo, double hi) {
  PlanarImage img(h, w, 3);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        img.at(i, j, c) = ((i + j) % 2 == 0) ? hi : lo;
  return img;
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(row);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!row.empty() && row.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("mean squared error identities and values") {
    const PlanarImage a = constant_gray3(3, 3, 0.5);
    const PlanarImage b = constant_gray3(3, 3, 0.25);
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(a, b) == 0.0625);
    CHECK(mse(a, b) == mse(b, a));
    const PlanarImage zeros = constant_gray3(4, 4, 0.0);
    const PlanarImage ones = constant_gray3(4, 4, 1.0);
    CHECK(mse(zeros, ones) == 1.0);
    CHECK_THROWS_AS(mse(a, PlanarImage(3, 4, 3)), DimensionError);
  }

  TEST_CASE("structural similarity identities") {
    std::mt19937 rng(83);
    const PlanarImage img = oracle::random_image(rng, 16, 16, 3);
    CHECK(ssim(img, img) == 1.0);
    const PlanarImage other = oracle::random_image(rng, 16, 16, 3);
    CHECK(ssim(img, other) == doctest::Approx(ssim(other, img)).epsilon(1e-12));
    CHECK(ssim(img, other) <= 1.0);
    CHECK_THROWS_AS(ssim(img, PlanarImage(16, 17, 3)), DimensionError);
  }

  TEST_CASE("inverting an image destroys structural similarity") {
    const PlanarImage pattern = checkerboard(16, 16, 0.2, 0.8);
    PlanarImage inverted = pattern;
    for (double& v : inverted.data()) v = 1.0 - v;
    CHECK(ssim(pattern, inverted) < 0.5);
  }

  TEST_CASE("blurring lowers structural similarity below one") {
    const PlanarImage sharp = checkerboard(16, 16, 0.2, 0.8);
    const PlanarImage soft = convolve(sharp, gaussian_kernel(1.0));
    const double s = ssim(sharp, soft);
    CHECK(s < 1.0);
    CHECK(s > -1.0);
  }

  TEST_CASE("structural similarity shrinks its window on small images") {
    std::mt19937 rng(89);
    const PlanarImage tiny = oracle::random_image(rng, 8, 6, 3);
    CHECK(ssim(tiny, tiny) == 1.0);
    const PlanarImage tiny2 = oracle::random_image(rng, 8, 6, 3);
    const double s = ssim(tiny, tiny2);
    CHECK(std::isfinite(s));
    CHECK(s <= 1.0);
  }

  TEST_CASE("fog density score grows with fog strength") {
    const PlanarImage clean = scene_checker();
    double prev = fade_surrogate(clean);
    for (double level : {0.1, 0.2, 0.3}) {
      const PlanarImage foggy = synthesize_fog(clean, FogSpec{level, 0.9});
      const double score = fade_surrogate(foggy);
      CHECK(score > prev);
      prev = score;
    }
    CHECK(kFadeVersion == std::string("fade-s1"));
    CHECK_THROWS_AS(fade_surrogate(PlanarImage(4, 4, 1)), ParamError);
  }

  TEST_CASE("fog density score is zero when every window touches black") {
    const PlanarImage bw = checkerboard(16, 16, 0.0, 1.0);
    CHECK(fade_surrogate(bw) == 0.0);
  }

  TEST_CASE("contrast restoration index compares gray ranges") {
    std::mt19937 rng(97);
    const PlanarImage foggy = oracle::random_image(rng, 8, 8, 3, 0.3, 0.7);
    CHECK(cri(foggy, foggy) == 1.0);

    PlanarImage narrow = constant_gray3(4, 4, 0.5);
    narrow.at(0, 0, 0) = narrow.at(0, 0, 1) = narrow.at(0, 0, 2) = 0.3;
    narrow.at(3, 3, 0) = narrow.at(3, 3, 1) = narrow.at(3, 3, 2) = 0.7;
    PlanarImage wide = constant_gray3(4, 4, 0.5);
    wide.at(0, 0, 0) = wide.at(0, 0, 1) = wide.at(0, 0, 2) = 0.1;
    wide.at(3, 3, 0) = wide.at(3, 3, 1) = wide.at(3, 3, 2) = 0.9;
    CHECK(cri(narrow, wide) == doctest::Approx(2.0).epsilon(1e-12));

    // Collapsing to a constant wipes out all contrast.
    CHECK(cri(narrow, constant_gray3(4, 4, 0.4)) == 0.0);
  }

  TEST_CASE("contrast index flags a flat input as degenerate") {
    const PlanarImage flat = constant_gray3(4, 4, 0.6);
    const PlanarImage other = checkerboard(4, 4, 0.1, 0.9);
    bool degenerate = false;
    CHECK(cri(flat, other, &degenerate) == 1.0);
    CHECK(degenerate);
    degenerate = true;
    CHECK(cri(other, flat, &degenerate) == 0.0);
    CHECK_FALSE(degenerate);
    CHECK(cri(flat, other) == 1.0);  // null flag pointer is allowed
  }

  TEST_CASE("entropy of flat, two-level and uniform images") {
    CHECK(entropy(constant_gray3(5, 5, 0.42)) == 0.0);

    PlanarImage two(16, 16, 1);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) two.at(i, j) = (j % 2 == 0) ? 0.2 : 0.8;
    CHECK(entropy(two) == doctest::Approx(1.0).epsilon(1e-12));

    // One sample centered in each of the 256 bins.
    PlanarImage uniform(16, 16, 1);
    for (int k = 0; k < 256; ++k)
      uniform.data()[static_cast<std::size_t>(k)] = (k + 0.5) / 255.0;
    CHECK(entropy(uniform) == doctest::Approx(8.0).epsilon(1e-9));
  }

  TEST_CASE("entropy ignores pixel arrangement") {
    std::mt19937 rng(101);
    PlanarImage img = oracle::random_image(rng, 12, 12, 1);
    const double before = entropy(img);
    std::shuffle(img.data().begin(), img.data().end(), rng);
    CHECK(entropy(img) == before);
  }

  TEST_CASE("average gradient of flat and ramp images") {
    CHECK(ag(constant_gray3(6, 6, 0.3)) == 0.0);

    const int W = 64;
    PlanarImage ramp(8, W, 1);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < W; ++j) ramp.at(i, j) = static_cast<double>(j) / W;
    CHECK(ag(ramp) == doctest::Approx(1.0 / W).epsilon(1e-12));
  }

  TEST_CASE("average gradient matches the straight-loop form") {
    std::mt19937 rng(103);
    const PlanarImage img = oracle::random_image(rng, 9, 13, 3);
    CHECK(ag(img) == doctest::Approx(oracle::ag_loop(img)).epsilon(1e-12));
  }

  TEST_CASE("average gradient is shift invariant") {
    std::mt19937 rng(107);
    PlanarImage img = oracle::random_image(rng, 10, 10, 1, 0.0, 0.7);
    PlanarImage shifted = img;
    for (double& v : shifted.data()) v += 0.25;
    CHECK(ag(shifted) == doctest::Approx(ag(img)).epsilon(1e-12));
  }

  TEST_CASE("report assembly with and without a reference") {
    std::mt19937 rng(109);
    const PlanarImage clean = oracle::random_image(rng, 12, 12, 3);
    const PlanarImage foggy = synthesize_fog(clean, FogSpec{0.2, 0.9});
    const PlanarImage test = oracle::random_image(rng, 12, 12, 3);

    const MetricReport with_ref = evaluate(&clean, foggy, test);
    REQUIRE(with_ref.mse.has_value());
    REQUIRE(with_ref.ssim.has_value());
    CHECK(*with_ref.mse == mse(clean, test));
    CHECK(with_ref.fade == fade_surrogate(test));
    CHECK(with_ref.cri == cri(foggy, test));
    CHECK(with_ref.entropy == entropy(test));
    CHECK(with_ref.ag == ag(test));
    CHECK_FALSE(with_ref.cri_degenerate);

    const MetricReport no_ref = evaluate(nullptr, foggy, test);
    CHECK_FALSE(no_ref.mse.has_value());
    CHECK_FALSE(no_ref.ssim.has_value());

    const auto j = to_json(with_ref);
    CHECK(j.contains("mse"));
    CHECK(j.contains("ssim"));
    CHECK(j.contains("cri_degenerate"));
    const auto j2 = to_json(no_ref);
    CHECK_FALSE(j2.contains("mse"));
    CHECK_FALSE(j2.contains("ssim"));
    CHECK(j2["fade"].get<double>() == no_ref.fade);

    const auto cells = split_csv(csv_cells(with_ref));
    REQUIRE(cells.size() == 6);
    for (const auto& c : cells) CHECK(!c.empty());
    const auto empty_cells = split_csv(csv_cells(no_ref));
    REQUIRE(empty_cells.size() == 6);
    CHECK(empty_cells[0].empty());
    CHECK(empty_cells[1].empty());
    CHECK(!empty_cells[2].empty());
  }
}
