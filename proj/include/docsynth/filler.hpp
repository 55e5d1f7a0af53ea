#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "components.hpp"
#include "corpus.hpp"
#include "formula.hpp"
#include "glyphs.hpp"
#include "image_pool.hpp"
#include "random.hpp"

namespace docsynth {

/// Probability per kind, indexed by ComponentKind.
using ComponentMix = std::array<double, 5>;

inline constexpr ComponentMix kDefaultMix{0.12, 0.55, 0.12, 0.13, 0.08};

struct Size {
  int w = 0;
  int h = 0;
};

struct KindAssignment {
  Size minTableSize{240, 120};
  double titleBoost = 0.5;
};

inline bool mix_valid(const ComponentMix& mix) {
  double sum = 0.0;
  for (double p : mix) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= 1e-9;
}

/// Draws a kind per region from `mix`. Regions below minTableSize redraw among
/// the other kinds; the first region becomes a Title with probability
/// titleBoost before the mix is consulted.
inline std::vector<std::pair<Rect, ComponentKind>> assign_component_kinds(const std::vector<Rect>& regions,
                                                                          const ComponentMix& mix, Rng& rng,
                                                                          const KindAssignment& opts = {}) {
  if (!mix_valid(mix)) throw std::invalid_argument("component mix must be non-negative and sum to 1");
  if (regions.empty()) throw std::invalid_argument("assign_component_kinds: no regions");
  ComponentMix noTable = mix;
  noTable[static_cast<std::size_t>(ComponentKind::Table)] = 0.0;
  const bool noTableUsable = std::any_of(noTable.begin(), noTable.end(), [](double p) { return p > 0.0; });

  std::vector<std::pair<Rect, ComponentKind>> out;
  out.reserve(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Rect& r = regions[i];
    if (i == 0 && rng.bernoulli(opts.titleBoost)) {
      out.emplace_back(r, ComponentKind::Title);
      continue;
    }
    auto kind = static_cast<ComponentKind>(rng.weighted(mix));
    if (kind == ComponentKind::Table && (r.w < opts.minTableSize.w || r.h < opts.minTableSize.h))
      kind = noTableUsable ? static_cast<ComponentKind>(rng.weighted(noTable)) : ComponentKind::Paragraph;
    out.emplace_back(r, kind);
  }
  return out;
}

struct TextStyleParams {
  std::pair<int, int> fontSizeRange{18, 31};
  int colorJitterMax = 40;
  double lineSpacing = 1.0;
  double titleScale = 1.4;
  int titleMaxLines = 2;
  std::pair<int, int> tableRows{2, 6};
  std::pair<int, int> tableCols{2, 4};
  Size minCell{60, 28};
  int cellPadding = 4;
  int maxTextAttempts = 8;
};

/// Shared, read-only inputs of every fill operation plus the caller's glyph
/// cache.
struct FillContext {
  const FontSet& fonts;
  GlyphCache& cache;
  TextStyleParams style;
};

/// Removes codepoints that no font covers and collapses the spaces left
/// behind. Returns the number removed.
inline std::size_t strip_uncovered(std::string& text, const FontSet& fonts) {
  auto cps = utf8::decode(text);
  if (!cps) return 0;
  std::size_t removed = 0;
  std::u32string kept;
  kept.reserve(cps->size());
  for (char32_t cp : *cps) {
    if (cp == U' ' || fonts.first_covering(cp)) {
      kept.push_back(cp);
    } else {
      ++removed;
    }
  }
  if (removed) text = normalize_sentence(kept);
  return removed;
}

namespace detail {

inline void translate(WordBox& w, int dx, int dy) {
  w.bbox.x += dx;
  w.bbox.y += dy;
  for (auto& c : w.chars) {
    c.bbox.x += dx;
    c.bbox.y += dy;
    c.glyph.penX += dx;
    c.glyph.baseline += dy;
  }
}

inline void translate(LineLayout& l, int dx, int dy) {
  l.bbox.x += dx;
  l.bbox.y += dy;
  l.baseline += dy;
  for (auto& w : l.words) translate(w, dx, dy);
}

// Shapes one word at `pen`; returns nullopt if it has no ink at all.
inline std::optional<WordBox> shape_word(const std::u32string& word, const FillContext& ctx, std::size_t font, int fontSize,
                                         int pen, int baseline, ShapeStats& stats, double& endPen) {
  WordBox box;
  for (const auto& g : shape_run(word, ctx.fonts, font, fontSize, pen, baseline, ctx.cache, &stats, &endPen)) {
    if (!g.ink) continue;
    box.chars.push_back({g.codepoint, *g.ink, g.ref});
    utf8::append(box.text, g.codepoint);
  }
  if (box.chars.empty()) return std::nullopt;
  box.bbox = *union_over(box.chars, [](const CharBox& c) { return c.bbox; });
  return box;
}

inline double space_advance(const FillContext& ctx, std::size_t font, int fontSize) {
  const auto [fi, glyph] = resolve_glyph(ctx.fonts, font, U' ', nullptr);
  return ctx.cache.get(ctx.fonts, fi, glyph, fontSize).advance;
}

}  // namespace detail

struct TextLayoutStats {
  std::size_t truncatedWords = 0;
  std::size_t fallbackGlyphs = 0;
};

/// Greedy first-fit word wrap into `region`. Words go left to right until the
/// next would cross the right edge; lines stop before crossing the bottom
/// edge and the remaining words are discarded. No hyphenation or
/// justification. Every box is ink-tight and lies inside `region`.
inline std::vector<LineLayout> layout_text_lines(std::string_view text, const Rect& region, const FillContext& ctx,
                                                 std::size_t font, int fontSize, double lineSpacing = 1.0,
                                                 TextLayoutStats* statsOut = nullptr, int maxLines = 0) {
  const auto words = utf8::split_words(text);
  const LineMetrics m = line_metrics(ctx.fonts.fonts[font], fontSize);
  const int lineAdvance = std::max(1, static_cast<int>(std::lround(m.height() * lineSpacing)));
  const double spaceAdv = detail::space_advance(ctx, font, fontSize);
  ShapeStats shapeStats;

  std::vector<std::u32string> cps;
  cps.reserve(words.size());
  for (const auto& w : words) {
    auto d = utf8::decode(w);
    if (!d) throw std::invalid_argument("layout_text_lines: invalid UTF-8");
    cps.push_back(std::move(*d));
  }

  std::vector<LineLayout> lines;
  std::size_t next = 0;
  std::size_t consumed = 0;
  int baseline = region.y + m.ascent;
  while (next < cps.size() && (maxLines <= 0 || static_cast<int>(lines.size()) < maxLines)) {
    LineLayout line;
    line.baseline = baseline;
    double pen = region.x;
    std::size_t cursor = next;
    while (cursor < cps.size()) {
      double endPen = 0.0;
      auto word = detail::shape_word(cps[cursor], ctx, font, fontSize, static_cast<int>(std::floor(pen + 0.5)), baseline,
                                     shapeStats, endPen);
      if (!word) {
        ++cursor;
        continue;
      }
      const int minX = line.words.empty() ? region.x : line.words.back().bbox.right();
      const int dx = std::max(0, minX - word->bbox.x);
      if (word->bbox.right() + dx > region.right()) break;
      detail::translate(*word, dx, 0);
      line.words.push_back(std::move(*word));
      pen = endPen + dx + spaceAdv;
      ++cursor;
    }
    if (line.words.empty()) {
      if (lines.empty()) throw RegionTooSmall("word wider than region");
      break;
    }
    line.bbox = *union_over(line.words, [](const WordBox& w) { return w.bbox; });
    if (lines.empty() && line.bbox.y < region.y) detail::translate(line, 0, region.y - line.bbox.y);
    if (line.bbox.bottom() > region.bottom()) {
      if (lines.empty()) throw RegionTooSmall("line taller than region");
      break;
    }
    baseline = line.baseline + lineAdvance;
    consumed = cursor;
    next = cursor;
    lines.push_back(std::move(line));
  }
  if (statsOut) {
    statsOut->truncatedWords += cps.size() - consumed;
    statsOut->fallbackGlyphs += shapeStats.fallbackGlyphs;
  }
  return lines;
}

namespace detail {

inline Rgb text_color(Rng& rng, int jitterMax) {
  auto ch = [&] { return static_cast<std::uint8_t>(rng.uniform_int(0, std::clamp(jitterMax, 0, 255))); };
  const auto r = ch();
  const auto g = ch();
  const auto b = ch();
  return {r, g, b};
}

inline ComponentStyle draw_style(const FillContext& ctx, Rng& rng) {
  ComponentStyle s;
  const auto body = ctx.fonts.body_fonts();
  s.font = body[rng.index(body.size())];
  s.fontSize = rng.uniform_int(ctx.style.fontSizeRange.first, ctx.style.fontSizeRange.second);
  s.color = text_color(rng, ctx.style.colorJitterMax);
  return s;
}

inline void finish_style(ComponentStyle& s, const FillContext& ctx) { s.fontFamily = ctx.fonts.fonts[s.font].family(); }

inline std::string join_lines(const std::vector<LineLayout>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out.push_back('\n');
    out += l.text();
  }
  return out;
}

// Rough number of characters that fill `r` at `fontSize`.
inline std::size_t capacity_chars(const Rect& r, int fontSize, int lineHeight) {
  const double perLine = r.w / (0.55 * fontSize);
  const double lines = std::max(1, r.h / std::max(1, lineHeight));
  return static_cast<std::size_t>(std::max(1.0, perLine * lines * 1.1));
}

}  // namespace detail

inline ComponentInstance fill_paragraph(const Rect& region, const TextCorpus& corpus, const FillContext& ctx, Rng& rng) {
  ComponentInstance c;
  c.kind = ComponentKind::Paragraph;
  c.region = region;
  c.style = detail::draw_style(ctx, rng);
  detail::finish_style(c.style, ctx);
  const LineMetrics m = line_metrics(ctx.fonts.fonts[c.style.font], c.style.fontSize);
  const auto target = detail::capacity_chars(region, c.style.fontSize, m.height());
  for (int attempt = 0;; ++attempt) {
    auto text = sample_text(corpus, rng, target);
    FillStats stats;
    stats.missingGlyphs = strip_uncovered(text, ctx.fonts);
    TextLayoutStats ls;
    try {
      c.lines = layout_text_lines(text, region, ctx, c.style.font, c.style.fontSize, ctx.style.lineSpacing, &ls);
    } catch (const RegionTooSmall&) {
      if (attempt + 1 >= ctx.style.maxTextAttempts) throw;
      continue;
    }
    stats.truncatedWords = ls.truncatedWords;
    stats.fallbackGlyphs = ls.fallbackGlyphs;
    c.stats = stats;
    break;
  }
  c.bbox = *union_over(c.lines, [](const LineLayout& l) { return l.bbox; });
  c.text = detail::join_lines(c.lines);
  return c;
}

/// Title: scaled font size (clamped to the configured range), bold face when
/// the family has one, at most titleMaxLines lines.
inline ComponentInstance fill_title(const Rect& region, const TextCorpus& corpus, const FillContext& ctx, Rng& rng) {
  ComponentInstance c;
  c.kind = ComponentKind::Title;
  c.region = region;
  c.style = detail::draw_style(ctx, rng);
  const auto [lo, hi] = ctx.style.fontSizeRange;
  c.style.fontSize = std::clamp(static_cast<int>(std::lround(c.style.fontSize * ctx.style.titleScale)), lo, hi);
  c.style.font = ctx.fonts.bold_variant(c.style.font);
  detail::finish_style(c.style, ctx);
  for (int attempt = 0;; ++attempt) {
    auto text = sample_text(corpus, rng, static_cast<std::size_t>(rng.uniform_int(12, 60)));
    FillStats stats;
    stats.missingGlyphs = strip_uncovered(text, ctx.fonts);
    TextLayoutStats ls;
    try {
      c.lines = layout_text_lines(text, region, ctx, c.style.font, c.style.fontSize, ctx.style.lineSpacing, &ls,
                                  ctx.style.titleMaxLines);
    } catch (const RegionTooSmall&) {
      if (attempt + 1 >= ctx.style.maxTextAttempts) throw;
      continue;
    }
    stats.truncatedWords = ls.truncatedWords;
    stats.fallbackGlyphs = ls.fallbackGlyphs;
    c.stats = stats;
    break;
  }
  c.bbox = *union_over(c.lines, [](const LineLayout& l) { return l.bbox; });
  c.text = detail::join_lines(c.lines);
  return c;
}

/// rows x cols grid across the region width. Cell text is laid out per cell
/// inside the ruling; a cell whose words do not fit stays empty, a table
/// with no text at all is rejected.
inline ComponentInstance fill_table(const Rect& region, const TextCorpus& corpus, const FillContext& ctx, Rng& rng) {
  const auto& st = ctx.style;
  ComponentInstance c;
  c.kind = ComponentKind::Table;
  c.region = region;
  c.style = detail::draw_style(ctx, rng);
  detail::finish_style(c.style, ctx);
  const LineMetrics m = line_metrics(ctx.fonts.fonts[c.style.font], c.style.fontSize);
  const int inner = 1 + st.cellPadding;
  const int minCellH = std::max(st.minCell.h, m.ascent + m.descent + 2 * inner);
  const int minCellW = st.minCell.w;

  int rows = rng.uniform_int(st.tableRows.first, st.tableRows.second);
  int cols = rng.uniform_int(st.tableCols.first, st.tableCols.second);
  rows = std::min(rows, region.h / minCellH);
  cols = std::min(cols, region.w / minCellW);
  if (rows < st.tableRows.first || cols < st.tableCols.first || rows < 1 || cols < 1)
    throw RegionTooSmall("region cannot hold the minimum table grid");

  const int cellH = std::min(region.h / rows, 2 * minCellH);
  TableSpec t;
  t.rows = rows;
  t.cols = cols;
  const int baseW = region.w / cols;
  const int extra = region.w % cols;
  for (int r = 0; r < rows; ++r) {
    int x = region.x;
    for (int col = 0; col < cols; ++col) {
      const int w = baseW + (col < extra ? 1 : 0);
      t.cells.push_back({x, region.y + r * cellH, w, cellH});
      x += w;
    }
  }

  for (const Rect& cell : t.cells) {
    const Rect box = inset(cell, inner);
    std::string cellText;
    std::vector<LineLayout> cellLines;
    const auto capacity = detail::capacity_chars(box, c.style.fontSize, m.height());
    for (int attempt = 0; attempt < 3 && cellLines.empty(); ++attempt) {
      const std::size_t target = attempt == 2 ? 1 : std::max<std::size_t>(1, capacity / 2 >> attempt);
      auto text = sample_text(corpus, rng, target);
      const auto missing = strip_uncovered(text, ctx.fonts);
      TextLayoutStats ls;
      try {
        cellLines = layout_text_lines(text, box, ctx, c.style.font, c.style.fontSize, st.lineSpacing, &ls);
        c.stats.missingGlyphs += missing;
        c.stats.truncatedWords += ls.truncatedWords;
        c.stats.fallbackGlyphs += ls.fallbackGlyphs;
      } catch (const RegionTooSmall&) {
      }
    }
    cellText = detail::join_lines(cellLines);
    t.cellTexts.push_back(std::move(cellText));
    for (auto& l : cellLines) c.lines.push_back(std::move(l));
  }
  if (c.lines.empty()) throw RegionTooSmall("no table cell holds text");
  c.bbox = {region.x, region.y, region.w, rows * cellH};
  std::string all;
  for (const auto& s : t.cellTexts) {
    if (!all.empty()) all.push_back('\t');
    all += s;
  }
  c.text = std::move(all);
  c.table = std::move(t);
  return c;
}

inline ComponentInstance fill_figure(const Rect& region, const ImagePool& pool, Rng& rng) {
  ComponentInstance c;
  c.kind = ComponentKind::Figure;
  c.region = region;
  c.image = sample_image(pool, rng, region);
  c.bbox = c.image->rect;
  c.text = pool.assets[c.image->assetIndex].path.filename().string();
  return c;
}

/// One formula line centered in the region. Retries with shallower grammars
/// until the ink fits.
inline ComponentInstance fill_formula(const Rect& region, const FormulaGrammar& grammar, const FillContext& ctx, Rng& rng) {
  ComponentInstance c;
  c.kind = ComponentKind::Formula;
  c.region = region;
  c.style = detail::draw_style(ctx, rng);
  detail::finish_style(c.style, ctx);
  const auto& font = ctx.fonts.fonts[c.style.font];
  FormulaGrammar g = grammar;
  g.unicodeSuperscripts = grammar.unicodeSuperscripts && font.covers(U'⁰') && font.covers(U'²') && font.covers(U'⁹');

  for (int depth = g.maxDepth; depth >= 1; --depth) {
    g.maxDepth = depth;
    for (int attempt = 0; attempt < 3; ++attempt) {
      auto text = generate_formula(g, rng);
      FillStats stats;
      stats.missingGlyphs = strip_uncovered(text, ctx.fonts);
      if (text.empty()) continue;
      const Rect wide{0, 0, 1 << 20, 1 << 20};
      TextLayoutStats ls;
      std::vector<LineLayout> lines;
      try {
        lines = layout_text_lines(text, wide, ctx, c.style.font, c.style.fontSize, 1.0, &ls, 1);
      } catch (const RegionTooSmall&) {
        continue;
      }
      if (lines.empty() || ls.truncatedWords) continue;
      auto& line = lines.front();
      if (line.bbox.w > region.w || line.bbox.h > region.h) continue;
      const int dx = region.x + (region.w - line.bbox.w) / 2 - line.bbox.x;
      const int dy = region.y + (region.h - line.bbox.h) / 2 - line.bbox.y;
      detail::translate(line, dx, dy);
      stats.fallbackGlyphs = ls.fallbackGlyphs;
      c.stats = stats;
      c.text = text;
      c.bbox = line.bbox;
      c.lines = std::move(lines);
      return c;
    }
  }
  throw RegionTooSmall("no formula fits the region");
}

}  // namespace docsynth
