#include "core/codec.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "core/errors.hpp"

namespace defog {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

PlanarImage from_interleaved(int h, int w, const std::vector<double>& rgb) {
  if (h < 3 || w < 3)
    throw DimensionError("image must be at least 3x3, got " + std::to_string(h) + "x" +
                         std::to_string(w));
  std::vector<double> planar(static_cast<std::size_t>(h) * w * 3);
  const std::size_t n = static_cast<std::size_t>(h) * w;
  for (std::size_t p = 0; p < n; ++p)
    for (int c = 0; c < 3; ++c) planar[c * n + p] = rgb[p * 3 + c];
  return PlanarImage::from_samples(h, w, 3, std::move(planar));
}

PlanarImage load_png(std::FILE* fp, const std::string& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed for " + path);
  }
  std::vector<png_byte> raw;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int h = static_cast<int>(png_get_image_height(png, info));
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int depth = png_get_bit_depth(png, info);
  const int chans = png_get_channels(png, info);
  if (chans != 3 || (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG layout in " + path);
  }

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  raw.resize(row_bytes * h);
  row_ptrs.resize(h);
  for (int i = 0; i < h; ++i) row_ptrs[i] = raw.data() + row_bytes * i;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> rgb(static_cast<std::size_t>(h) * w * 3);
  if (depth == 8) {
    for (std::size_t s = 0; s < rgb.size(); ++s) rgb[s] = raw[s] / 255.0;
  } else {
    // PNG stores 16-bit samples big-endian.
    for (std::size_t s = 0; s < rgb.size(); ++s) {
      const unsigned v = (static_cast<unsigned>(raw[2 * s]) << 8) | raw[2 * s + 1];
      rgb[s] = v / 65535.0;
    }
  }
  return from_interleaved(h, w, rgb);
}

int ppm_next_token(std::FILE* fp, char* buf, int cap) {
  int c;
  do {
    c = std::fgetc(fp);
    if (c == '#') {
      while (c != '\n' && c != EOF) c = std::fgetc(fp);
    }
  } while (c != EOF && std::isspace(c));
  if (c == EOF) return 0;
  int n = 0;
  while (c != EOF && !std::isspace(c) && n < cap - 1) {
    buf[n++] = static_cast<char>(c);
    c = std::fgetc(fp);
  }
  buf[n] = '\0';
  return n;
}

PlanarImage load_ppm(std::FILE* fp, const std::string& path) {
  char tok[64];
  long dims[3];
  for (int t = 0; t < 3; ++t) {
    if (!ppm_next_token(fp, tok, sizeof tok))
      throw FormatError("truncated PPM header in " + path);
    char* end = nullptr;
    dims[t] = std::strtol(tok, &end, 10);
    if (end == tok || dims[t] <= 0) throw FormatError("bad PPM header in " + path);
  }
  const int w = static_cast<int>(dims[0]);
  const int h = static_cast<int>(dims[1]);
  const long maxval = dims[2];
  if (maxval > 65535) throw FormatError("PPM maxval out of range in " + path);

  const int bytes_per_sample = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(h) * w * 3;
  std::vector<unsigned char> raw(count * bytes_per_sample);
  if (std::fread(raw.data(), 1, raw.size(), fp) != raw.size())
    throw FormatError("truncated PPM pixel data in " + path);

  std::vector<double> rgb(count);
  if (bytes_per_sample == 1) {
    for (std::size_t s = 0; s < count; ++s)
      rgb[s] = raw[s] / static_cast<double>(maxval);
  } else {
    for (std::size_t s = 0; s < count; ++s) {
      const unsigned v = (static_cast<unsigned>(raw[2 * s]) << 8) | raw[2 * s + 1];
      rgb[s] = v / static_cast<double>(maxval);
    }
  }
  return from_interleaved(h, w, rgb);
}

}  // namespace

PlanarImage load_image(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path);

  unsigned char magic[8] = {0};
  const std::size_t got = std::fread(magic, 1, sizeof magic, fp.get());
  if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) {
    std::rewind(fp.get());
    return load_png(fp.get(), path);
  }
  if (got >= 2 && magic[0] == 'P' && magic[1] == '6') {
    std::fseek(fp.get(), 2, SEEK_SET);
    return load_ppm(fp.get(), path);
  }
  throw FormatError("unsupported raster format: " + path);
}

void save_image(const PlanarImage& img, const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed for " + path);
  }
  const int h = img.height(), w = img.width(), c = img.channels();
  std::vector<unsigned char> row(static_cast<std::size_t>(w) * c);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG write failed for " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8,
               c == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j)
      for (int ch = 0; ch < c; ++ch) {
        double v = img.at(i, j, ch);
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        row[static_cast<std::size_t>(j) * c + ch] =
            static_cast<unsigned char>(std::lround(255.0 * v));
      }
    png_write_row(png, row.data());
  }
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace defog
