#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fonts.hpp"
#include "geometry.hpp"
#include "utf8.hpp"

namespace docsynth {

class MissingGlyph : public std::runtime_error {
 public:
  explicit MissingGlyph(char32_t cp)
      : std::runtime_error("no font covers U+" + hex(cp)), codepoint_(cp) {}
  char32_t codepoint() const { return codepoint_; }

 private:
  static std::string hex(char32_t cp) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04X", static_cast<unsigned>(cp));
    return buf;
  }
  char32_t codepoint_;
};

/// Rasterized glyph. Offsets are relative to the pen position on the baseline.
struct GlyphBitmap {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> alpha;
  /// Tight box of non-zero coverage, relative to the pen; nullopt for blank glyphs.
  std::optional<Rect> ink;
  float advance = 0.0f;
};

/// Memo of glyph rasterizations. Results are a pure function of
/// (font, glyph, size), so a cache never changes output. Not thread-safe:
/// use one per worker.
class GlyphCache {
 public:
  const GlyphBitmap& get(const FontSet& fonts, std::size_t fontIndex, int glyph, int fontSize) {
    const std::uint64_t key = (std::uint64_t{fontIndex} << 48) | (std::uint64_t(static_cast<std::uint32_t>(glyph)) << 16) |
                              static_cast<std::uint16_t>(fontSize);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, rasterize(fonts.fonts[fontIndex], glyph, fontSize)).first->second;
  }

  std::size_t size() const { return cache_.size(); }

  static GlyphBitmap rasterize(const Font& font, int glyph, int fontSize) {
    const auto& info = font.info();
    const float scale = font.scale(fontSize);
    GlyphBitmap g;
    int advance = 0, lsb = 0;
    stbtt_GetGlyphHMetrics(&info, glyph, &advance, &lsb);
    g.advance = static_cast<float>(advance) * scale;
    int x1 = 0, y1 = 0;
    stbtt_GetGlyphBitmapBox(&info, glyph, scale, scale, &g.x0, &g.y0, &x1, &y1);
    g.w = x1 - g.x0;
    g.h = y1 - g.y0;
    if (g.w <= 0 || g.h <= 0) {
      g.w = g.h = 0;
      return g;
    }
    g.alpha.assign(static_cast<std::size_t>(g.w) * g.h, 0);
    stbtt_MakeGlyphBitmap(&info, g.alpha.data(), g.w, g.h, g.w, scale, scale, glyph);
    int minX = g.w, minY = g.h, maxX = -1, maxY = -1;
    for (int y = 0; y < g.h; ++y) {
      for (int x = 0; x < g.w; ++x) {
        if (g.alpha[static_cast<std::size_t>(y) * g.w + x] == 0) continue;
        minX = std::min(minX, x);
        maxX = std::max(maxX, x);
        minY = std::min(minY, y);
        maxY = std::max(maxY, y);
      }
    }
    if (maxX >= 0) g.ink = Rect{g.x0 + minX, g.y0 + minY, maxX - minX + 1, maxY - minY + 1};
    return g;
  }

 private:
  std::unordered_map<std::uint64_t, GlyphBitmap> cache_;
};

/// Vertical metrics in pixels for one face at one size.
struct LineMetrics {
  int ascent = 0;   // above baseline, positive
  int descent = 0;  // below baseline, positive
  int lineGap = 0;
  int height() const { return ascent + descent + lineGap; }
};

inline LineMetrics line_metrics(const Font& font, int fontSize) {
  const float s = font.scale(fontSize);
  LineMetrics m;
  m.ascent = static_cast<int>(std::ceil(static_cast<float>(font.ascent_units()) * s));
  m.descent = static_cast<int>(std::ceil(static_cast<float>(-font.descent_units()) * s));
  m.lineGap = static_cast<int>(std::lround(static_cast<float>(font.line_gap_units()) * s));
  return m;
}

/// Everything needed to redraw a measured glyph exactly.
struct GlyphRef {
  std::uint16_t font = 0;
  int glyph = 0;
  int fontSize = 0;
  int penX = 0;
  int baseline = 0;
};

struct PlacedGlyph {
  char32_t codepoint = 0;
  GlyphRef ref;
  std::optional<Rect> ink;  // absolute page coordinates
};

struct ShapeStats {
  std::size_t fallbackGlyphs = 0;
};

/// Resolves a codepoint to (font, glyph) with the preferred face first and
/// then a covering face of the same style.
inline std::pair<std::size_t, int> resolve_glyph(const FontSet& fonts, std::size_t preferred, char32_t cp, ShapeStats* stats) {
  if (fonts.fonts[preferred].covers(cp))
    return {preferred, stbtt_FindGlyphIndex(&fonts.fonts[preferred].info(), static_cast<int>(cp))};
  auto other = fonts.fallback_for(preferred, cp);
  if (!other) throw MissingGlyph(cp);
  if (stats) ++stats->fallbackGlyphs;
  return {*other, stbtt_FindGlyphIndex(&fonts.fonts[*other].info(), static_cast<int>(cp))};
}

/// Lays a run on one baseline starting at penX. Advances and kerning are
/// accumulated in floating point; each glyph is drawn at the rounded pen.
/// This is the only positioning path: measurement and drawing both use it.
inline std::vector<PlacedGlyph> shape_run(std::u32string_view text, const FontSet& fonts, std::size_t fontIndex,
                                          int fontSize, int penX, int baseline, GlyphCache& cache,
                                          ShapeStats* stats = nullptr, double* endPen = nullptr) {
  std::vector<PlacedGlyph> out;
  out.reserve(text.size());
  double pen = penX;
  std::size_t prevFont = SIZE_MAX;
  int prevGlyph = 0;
  for (char32_t cp : text) {
    const auto [fi, glyph] = resolve_glyph(fonts, fontIndex, cp, stats);
    const auto& font = fonts.fonts[fi];
    if (prevFont == fi)
      pen += static_cast<double>(stbtt_GetGlyphKernAdvance(&font.info(), prevGlyph, glyph)) * font.scale(fontSize);
    const auto& bmp = cache.get(fonts, fi, glyph, fontSize);
    PlacedGlyph pg;
    pg.codepoint = cp;
    pg.ref = {static_cast<std::uint16_t>(fi), glyph, fontSize, static_cast<int>(std::floor(pen + 0.5)), baseline};
    if (bmp.ink) pg.ink = Rect{pg.ref.penX + bmp.ink->x, baseline + bmp.ink->y, bmp.ink->w, bmp.ink->h};
    out.push_back(pg);
    pen += bmp.advance;
    prevFont = fi;
    prevGlyph = glyph;
  }
  if (endPen) *endPen = pen;
  return out;
}

struct CharBox {
  char32_t codepoint = 0;
  Rect bbox;
  GlyphRef glyph;
};

/// Ink-tight boxes of the inked glyphs of `text` (UTF-8) drawn from `origin`
/// (pen x, baseline y). Blank glyphs such as spaces produce no box.
inline std::vector<CharBox> measure_glyph_boxes(std::string_view text, const FontSet& fonts, std::size_t fontIndex,
                                                int fontSize, int originX, int baselineY, GlyphCache& cache,
                                                ShapeStats* stats = nullptr) {
  auto cps = utf8::decode(text);
  if (!cps) throw std::invalid_argument("measure_glyph_boxes: invalid UTF-8");
  std::vector<CharBox> out;
  for (const auto& g : shape_run(*cps, fonts, fontIndex, fontSize, originX, baselineY, cache, stats))
    if (g.ink) out.push_back({g.codepoint, *g.ink, g.ref});
  return out;
}

}  // namespace docsynth
