#pragma once

#include <string>
#include <vector>

#include "core/image.hpp"

namespace defog {

// Procedural test scenes, fully deterministic. Each clean scene pairs a
// dark, strongly saturated bulk (every neighborhood keeps one channel near
// zero, so the scattering prior holds there almost exactly) with one bright
// finely textured strip flush against an image edge. The strip survives the
// dark-channel min filter, anchors airlight estimation, and drives the
// transmission estimate to its floor so the recovered guidance magnifies
// the fine texture; graded bands keep the content near the strip close to
// the airlight level where that magnification stays benign. Samples stay
// inside [0.02, 0.95].
PlanarImage scene_blocks();   // 64x64
PlanarImage scene_stripes();  // 64x96
PlanarImage scene_checker();  // 64x64

// Pre-fogged scenes for no-reference evaluation: a depth-ramp fog over
// scene_blocks and a dense homogeneous fog over scene_stripes.
PlanarImage foggy_ramp_scene();
PlanarImage foggy_dense_scene();

struct CorpusEntry {
  std::string name;
  PlanarImage image;
  bool foggy;
};
std::vector<CorpusEntry> bundled_corpus();

struct CorpusPaths {
  std::vector<std::string> clean;
  std::vector<std::string> foggy;
};

// Writes every corpus entry to <dir>/<name>.png, creating the directory if
// needed, and returns the file paths grouped by kind.
CorpusPaths write_corpus(const std::string& dir);

}  // namespace defog
