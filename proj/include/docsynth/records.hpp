#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "geometry.hpp"

namespace docsynth {

enum class AnnotationLevel { Component, Line, Word, Character };

inline constexpr std::array<AnnotationLevel, 4> kAllLevels{AnnotationLevel::Component, AnnotationLevel::Line,
                                                           AnnotationLevel::Word, AnnotationLevel::Character};

inline const char* to_string(AnnotationLevel l) {
  switch (l) {
    case AnnotationLevel::Component: return "component";
    case AnnotationLevel::Line: return "line";
    case AnnotationLevel::Word: return "word";
    case AnnotationLevel::Character: return "character";
  }
  return "?";
}

inline std::optional<AnnotationLevel> level_from_string(std::string_view s) {
  for (auto l : kAllLevels)
    if (s == to_string(l)) return l;
  return std::nullopt;
}

/// One labeled box. categoryName is a component kind at component level and
/// the level name below it.
struct AnnotationRecord {
  std::int64_t id = 0;
  std::int64_t imageId = 0;
  AnnotationLevel level = AnnotationLevel::Component;
  std::string categoryName;
  Rect bbox;
  std::optional<std::string> text;
  std::optional<std::int64_t> parentId;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

inline Rgb category_color(std::string_view category) {
  if (category == "Title") return {220, 40, 40};
  if (category == "Paragraph") return {40, 90, 220};
  if (category == "Table") return {30, 160, 60};
  if (category == "Figure") return {200, 120, 20};
  if (category == "Formula") return {150, 40, 190};
  if (category == "line") return {0, 170, 170};
  if (category == "word") return {230, 30, 160};
  return {250, 150, 0};
}

}  // namespace docsynth
