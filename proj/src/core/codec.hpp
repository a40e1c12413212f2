#pragma once

#include <string>

#include "core/image.hpp"

namespace defog {

// Reads a PNG (8- or 16-bit) or binary PPM (P6) file into a 3-channel image.
// 8-bit samples map to v/255, 16-bit to v/65535 (PPM: v/maxval). Grayscale
// and palette PNGs are expanded to RGB. Throws IoError for unreadable files,
// FormatError for unsupported content, DimensionError for images under 3x3.
PlanarImage load_image(const std::string& path);

// Writes an 8-bit PNG (RGB for 3-channel, grayscale for 1-channel images).
// Samples are round(255 * clamp(v, 0, 1)), ties away from zero.
void save_image(const PlanarImage& img, const std::string& path);

}  // namespace defog
