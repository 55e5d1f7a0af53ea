#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "components.hpp"
#include "glyphs.hpp"
#include "image_pool.hpp"
#include "layout.hpp"
#include "raster.hpp"
#include "records.hpp"

namespace docsynth {

struct PageStyle {
  Rgb backgroundColor{255, 255, 255};
  /// Tiled under everything when set.
  std::shared_ptr<const RasterImage> backgroundTexture;
  Rgb rulingColor{60, 60, 60};
  Encoding encoding;
};

struct RenderOptions {
  /// Shadow mode: component i is painted entirely in flatColors[i] (ruling,
  /// image rect and every pixel of non-zero glyph coverage) so pixel ownership
  /// can be checked. Geometry is unchanged.
  std::optional<std::vector<Rgb>> flatColors;
};

inline void draw_glyph(RasterImage& img, const GlyphBitmap& bmp, const GlyphRef& ref, Rgb color, bool flat) {
  for (int y = 0; y < bmp.h; ++y) {
    const int py = ref.baseline + bmp.y0 + y;
    if (py < 0 || py >= img.height) continue;
    for (int x = 0; x < bmp.w; ++x) {
      const auto a = bmp.alpha[static_cast<std::size_t>(y) * bmp.w + x];
      if (a == 0) continue;
      const int px = ref.penX + bmp.x0 + x;
      if (px < 0 || px >= img.width) continue;
      if (flat) {
        img.set(px, py, color);
      } else {
        img.blend(px, py, color, a);
      }
    }
  }
}

/// Nearest-neighbour scale of `src` into `dst` on `img`.
inline void blit_scaled(RasterImage& img, const RasterImage& src, const Rect& dst) {
  for (int y = 0; y < dst.h; ++y) {
    const int py = dst.y + y;
    if (py < 0 || py >= img.height) continue;
    const int sy = static_cast<int>((std::int64_t{2} * y + 1) * src.height / (std::int64_t{2} * dst.h));
    for (int x = 0; x < dst.w; ++x) {
      const int px = dst.x + x;
      if (px < 0 || px >= img.width) continue;
      const int sx = static_cast<int>((std::int64_t{2} * x + 1) * src.width / (std::int64_t{2} * dst.w));
      img.set(px, py, src.at(sx, sy));
    }
  }
}

/// Background, then table ruling, then images, then glyphs; each pass in
/// component order. Output is a pure function of the inputs.
inline RasterImage render_page(const PageSpec& spec, const PageStyle& style, std::span<const ComponentInstance> components,
                               const FontSet* fonts, const ImagePool* pool, GlyphCache& cache,
                               const RenderOptions& options = {}) {
  RasterImage img(spec.width, spec.height, style.backgroundColor);
  img.encoding = style.encoding;
  const bool flat = options.flatColors.has_value();
  if (flat && options.flatColors->size() < components.size())
    throw std::invalid_argument("render_page: fewer flat colors than components");
  auto colorOf = [&](std::size_t i, Rgb natural) { return flat ? (*options.flatColors)[i] : natural; };

  if (style.backgroundTexture && !flat) {
    const auto& tex = *style.backgroundTexture;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) img.set(x, y, tex.at(x % tex.width, y % tex.height));
  }

  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (!c.table) continue;
    for (const Rect& cell : c.table->cells) img.stroke_rect(cell, colorOf(i, style.rulingColor));
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (!c.image) continue;
    if (flat) {
      img.fill_rect(c.image->rect, colorOf(i, {}));
    } else {
      if (!pool) throw std::invalid_argument("render_page: figure without image pool");
      blit_scaled(img, *pool->assets[c.image->assetIndex].pixels, c.image->rect);
    }
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const Rgb color = colorOf(i, c.style.color);
    for (const auto& line : c.lines)
      for (const auto& word : line.words)
        for (const auto& ch : word.chars) {
          if (!fonts) throw std::invalid_argument("render_page: text without fonts");
          const auto& bmp = cache.get(*fonts, ch.glyph.font, ch.glyph.glyph, ch.glyph.fontSize);
          draw_glyph(img, bmp, ch.glyph, color, flat);
        }
  }
  return img;
}

/// Copy of `image` with a 1-px outline per annotation of `level`.
inline RasterImage render_debug_overlay(const RasterImage& image, std::span<const AnnotationRecord> annotations,
                                        AnnotationLevel level) {
  RasterImage out = image;
  for (const auto& a : annotations)
    if (a.level == level) out.stroke_rect(a.bbox, category_color(a.categoryName));
  return out;
}

}  // namespace docsynth
