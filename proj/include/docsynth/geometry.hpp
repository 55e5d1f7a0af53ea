#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>

namespace docsynth {

/// Axis-aligned integer rectangle, top-left origin. Covers pixels
/// [x, x + w) x [y, y + h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  constexpr int right() const { return x + w; }
  constexpr int bottom() const { return y + h; }
  constexpr std::int64_t area() const { return std::int64_t{w} * h; }
  constexpr bool empty() const { return w <= 0 || h <= 0; }

  constexpr bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  constexpr bool contains_point(int px, int py) const {
    return px >= x && py >= y && px < right() && py < bottom();
  }

  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rect& r) {
  return os << '[' << r.x << ',' << r.y << ',' << r.w << ',' << r.h << ']';
}

/// True if the open interiors of the two rectangles intersect.
constexpr bool interiors_overlap(const Rect& a, const Rect& b) {
  return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

constexpr Rect union_of(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

/// Union over a range of rectangles; nullopt for an empty range.
template <typename Range, typename Proj>
std::optional<Rect> union_over(const Range& items, Proj proj) {
  std::optional<Rect> acc;
  for (const auto& item : items) {
    const Rect r = proj(item);
    acc = acc ? union_of(*acc, r) : r;
  }
  return acc;
}

inline std::optional<Rect> union_over(std::span<const Rect> rects) {
  return union_over(rects, [](const Rect& r) { return r; });
}

constexpr Rect dilate(const Rect& r, int by) {
  return {r.x - by, r.y - by, r.w + 2 * by, r.h + 2 * by};
}

constexpr Rect inset(const Rect& r, int by) {
  return {r.x + by, r.y + by, r.w - 2 * by, r.h - 2 * by};
}

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

}  // namespace docsynth
