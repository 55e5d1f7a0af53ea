#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/stb.hpp"
#include "geometry.hpp"

namespace docsynth {

enum class ImageFormat { PNG, JPEG };

struct Encoding {
  ImageFormat format = ImageFormat::PNG;
  int jpegQuality = 90;

  const char* extension() const { return format == ImageFormat::PNG ? ".png" : ".jpg"; }
};

/// RGB8, row-major, no padding.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  Encoding encoding;

  RasterImage() = default;
  RasterImage(int w, int h, Rgb fill = {255, 255, 255}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
      pixels[i] = fill.r;
      pixels[i + 1] = fill.g;
      pixels[i + 2] = fill.b;
    }
  }

  std::size_t offset(int x, int y) const { return (static_cast<std::size_t>(y) * width + x) * 3; }

  Rgb at(int x, int y) const {
    const auto o = offset(x, y);
    return {pixels[o], pixels[o + 1], pixels[o + 2]};
  }

  void set(int x, int y, Rgb c) {
    const auto o = offset(x, y);
    pixels[o] = c.r;
    pixels[o + 1] = c.g;
    pixels[o + 2] = c.b;
  }

  /// Alpha-blends `c` with 8-bit coverage over the existing pixel.
  void blend(int x, int y, Rgb c, std::uint8_t alpha) {
    const auto o = offset(x, y);
    const unsigned a = alpha;
    const unsigned ia = 255 - a;
    pixels[o] = static_cast<std::uint8_t>((pixels[o] * ia + c.r * a + 127) / 255);
    pixels[o + 1] = static_cast<std::uint8_t>((pixels[o + 1] * ia + c.g * a + 127) / 255);
    pixels[o + 2] = static_cast<std::uint8_t>((pixels[o + 2] * ia + c.b * a + 127) / 255);
  }

  void fill_rect(const Rect& r, Rgb c) {
    for (int y = std::max(0, r.y); y < std::min(height, r.bottom()); ++y)
      for (int x = std::max(0, r.x); x < std::min(width, r.right()); ++x) set(x, y, c);
  }

  /// 1-px outline drawn on the pixels just inside `r`.
  void stroke_rect(const Rect& r, Rgb c) {
    if (r.empty()) return;
    fill_rect({r.x, r.y, r.w, 1}, c);
    fill_rect({r.x, r.bottom() - 1, r.w, 1}, c);
    fill_rect({r.x, r.y, 1, r.h}, c);
    fill_rect({r.right() - 1, r.y, 1, r.h}, c);
  }
};

/// FNV-1a over the pixel buffer and dimensions.
inline std::uint64_t pixel_hash(const RasterImage& img) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001B3ULL;
  };
  for (int shift = 0; shift < 32; shift += 8) {
    feed(static_cast<std::uint8_t>(img.width >> shift));
    feed(static_cast<std::uint8_t>(img.height >> shift));
  }
  for (auto b : img.pixels) feed(b);
  return h;
}

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void append_bytes(void* ctx, void* data, int size) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(ctx);
  auto* p = static_cast<const std::uint8_t*>(data);
  out->insert(out->end(), p, p + size);
}
}  // namespace detail

inline std::vector<std::uint8_t> encode_image(const RasterImage& img, const Encoding& enc) {
  std::vector<std::uint8_t> out;
  int ok = 0;
  if (enc.format == ImageFormat::PNG) {
    ok = stbi_write_png_to_func(detail::append_bytes, &out, img.width, img.height, 3, img.pixels.data(), img.width * 3);
  } else {
    ok = stbi_write_jpg_to_func(detail::append_bytes, &out, img.width, img.height, 3, img.pixels.data(), enc.jpegQuality);
  }
  if (!ok) throw ImageIoError("image encoding failed");
  return out;
}

inline void write_image(const std::filesystem::path& path, const RasterImage& img, const Encoding& enc) {
  const auto bytes = encode_image(img, enc);
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw ImageIoError("cannot open " + path.string() + " for writing");
  const auto written = std::fwrite(bytes.data(), 1, bytes.size(), f);
  const bool closed = std::fclose(f) == 0;
  if (written != bytes.size() || !closed) throw ImageIoError("short write to " + path.string());
}

/// Decodes any stb-supported raster file to RGB8.
inline RasterImage read_image(const std::filesystem::path& path) {
  int w = 0, h = 0, channels = 0;
  std::uint8_t* data = stbi_load(path.string().c_str(), &w, &h, &channels, 3);
  if (!data) throw ImageIoError("cannot decode " + path.string() + ": " + stbi_failure_reason());
  RasterImage img;
  img.width = w;
  img.height = h;
  img.pixels.assign(data, data + static_cast<std::size_t>(w) * h * 3);
  stbi_image_free(data);
  return img;
}

}  // namespace docsynth
