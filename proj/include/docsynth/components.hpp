#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "glyphs.hpp"
#include "image_pool.hpp"

namespace docsynth {

enum class ComponentKind { Title, Paragraph, Table, Figure, Formula };

inline constexpr std::array<ComponentKind, 5> kAllKinds{ComponentKind::Title, ComponentKind::Paragraph,
                                                        ComponentKind::Table, ComponentKind::Figure,
                                                        ComponentKind::Formula};

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Title: return "Title";
    case ComponentKind::Paragraph: return "Paragraph";
    case ComponentKind::Table: return "Table";
    case ComponentKind::Figure: return "Figure";
    case ComponentKind::Formula: return "Formula";
  }
  return "?";
}

/// Accepts "Image" as an alias of Figure.
inline std::optional<ComponentKind> kind_from_string(std::string_view s) {
  for (auto k : kAllKinds)
    if (s == to_string(k)) return k;
  if (s == "Image") return ComponentKind::Figure;
  return std::nullopt;
}

/// COCO category id, 1-based in declaration order.
constexpr int category_id(ComponentKind k) { return static_cast<int>(k) + 1; }

/// Kinds annotated below component level.
constexpr bool has_text_levels(ComponentKind k) {
  return k == ComponentKind::Title || k == ComponentKind::Paragraph || k == ComponentKind::Table;
}

struct WordBox {
  std::string text;
  Rect bbox;
  std::vector<CharBox> chars;
};

struct LineLayout {
  Rect bbox;
  std::vector<WordBox> words;
  int baseline = 0;

  std::string text() const {
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out.push_back(' ');
      out += w.text;
    }
    return out;
  }
};

struct TableSpec {
  int rows = 0;
  int cols = 0;
  std::vector<std::string> cellTexts;  // row-major
  std::vector<Rect> cells;             // row-major; outlines are the ruling
};

struct ComponentStyle {
  std::size_t font = 0;
  std::string fontFamily;
  int fontSize = 0;
  Rgb color;
};

struct FillStats {
  std::size_t truncatedWords = 0;
  std::size_t fallbackGlyphs = 0;
  std::size_t missingGlyphs = 0;
};

struct ComponentInstance {
  ComponentKind kind = ComponentKind::Paragraph;
  Rect region;
  Rect bbox;
  std::vector<LineLayout> lines;
  std::optional<TableSpec> table;
  std::optional<PlacedImage> image;
  /// Formula source, or the component's text joined line by line.
  std::string text;
  ComponentStyle style;
  FillStats stats;
};

class RegionTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace docsynth
