#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "random.hpp"

namespace docsynth {

class InfeasibleLayout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PageSpec {
  int width = 0;
  int height = 0;
  int margin = 72;
  int gutter = 16;

  Rect content_area() const { return {margin, margin, width - 2 * margin, height - 2 * margin}; }

  bool valid() const {
    return width > 0 && height > 0 && margin >= 0 && gutter >= 0 &&
           margin * 2 + gutter < std::min(width, height);
  }
};

/// Horizontal: the cut line is horizontal and children are stacked top to
/// bottom. Vertical: the cut line is vertical and children sit left to right.
enum class SplitAxis { Horizontal, Vertical };

enum class LayoutMode { FixedColumn, Flexible };

inline const char* to_string(SplitAxis a) { return a == SplitAxis::Horizontal ? "Horizontal" : "Vertical"; }
inline const char* to_string(LayoutMode m) { return m == LayoutMode::FixedColumn ? "FixedColumn" : "Flexible"; }

struct RegionNode {
  Rect rect;
  std::vector<RegionNode> children;
  std::optional<SplitAxis> split;

  bool is_leaf() const { return children.empty(); }
};

struct LayoutTree {
  LayoutMode mode = LayoutMode::Flexible;
  RegionNode root;
  std::uint64_t seed = 0;
};

struct FixedColumnParams {
  int numColumns = 3;
  int maxBreaks = 4;
  int minRegionHeight = 100;
  int maxResamples = 100;
};

struct FlexibleParams {
  std::int64_t minArea = 160000;
  int minSide = 150;
  double splitLow = 0.35;
  double splitHigh = 0.65;
};

namespace detail {

// Splits `extent` minus gutters into `sizes.size()` segments and returns the
// child rects along `axis`.
inline std::vector<RegionNode> tile(const Rect& parent, SplitAxis axis, const std::vector<int>& sizes, int gutter) {
  std::vector<RegionNode> out;
  out.reserve(sizes.size());
  int pos = axis == SplitAxis::Horizontal ? parent.y : parent.x;
  for (int s : sizes) {
    RegionNode node;
    node.rect = axis == SplitAxis::Horizontal ? Rect{parent.x, pos, parent.w, s} : Rect{pos, parent.y, s, parent.h};
    out.push_back(std::move(node));
    pos += s + gutter;
  }
  return out;
}

inline std::vector<int> draw_column_breaks(int height, const FixedColumnParams& params, int gutter, Rng& rng) {
  int breaks = rng.uniform_int(0, std::max(0, params.maxBreaks));
  while (breaks > 0) {
    const int usable = height - breaks * gutter;
    if (usable >= (breaks + 1) * params.minRegionHeight) {
      for (int attempt = 0; attempt < params.maxResamples; ++attempt) {
        std::vector<int> cuts(static_cast<std::size_t>(breaks));
        for (int& c : cuts) c = rng.uniform_int(0, usable);
        std::sort(cuts.begin(), cuts.end());
        std::vector<int> sizes;
        int prev = 0;
        bool ok = true;
        for (int c : cuts) {
          sizes.push_back(c - prev);
          ok = ok && c - prev >= params.minRegionHeight;
          prev = c;
        }
        sizes.push_back(usable - prev);
        ok = ok && usable - prev >= params.minRegionHeight;
        if (ok) return sizes;
      }
    }
    --breaks;
  }
  return {height};
}

}  // namespace detail

/// Page split into n equal-width columns (n uniform in [1, numColumns]), each
/// column cut into vertically stacked regions at random break positions.
inline LayoutTree generate_fixed_column_layout(const PageSpec& spec, const FixedColumnParams& params, Rng& rng) {
  if (!spec.valid()) throw InfeasibleLayout("invalid page spec");
  if (params.numColumns < 1) throw InfeasibleLayout("numColumns must be >= 1");
  if (params.minRegionHeight < 1) throw InfeasibleLayout("minRegionHeight must be >= 1");
  const Rect content = spec.content_area();
  if (content.h < params.minRegionHeight) {
    std::ostringstream msg;
    msg << "content height " << content.h << " is below minRegionHeight " << params.minRegionHeight;
    throw InfeasibleLayout(msg.str());
  }

  LayoutTree tree{LayoutMode::FixedColumn, RegionNode{content, {}, {}}, rng.seed()};
  int columns = rng.uniform_int(1, params.numColumns);
  // Columns narrower than one pixel cannot exist.
  while (columns > 1 && content.w - (columns - 1) * spec.gutter < columns) --columns;

  auto split_column = [&](RegionNode& column) {
    const auto sizes = detail::draw_column_breaks(column.rect.h, params, spec.gutter, rng);
    if (sizes.size() > 1) {
      column.children = detail::tile(column.rect, SplitAxis::Horizontal, sizes, spec.gutter);
      column.split = SplitAxis::Horizontal;
    }
  };

  if (columns == 1) {
    split_column(tree.root);
    return tree;
  }

  const int usable = content.w - (columns - 1) * spec.gutter;
  std::vector<int> widths(static_cast<std::size_t>(columns), usable / columns);
  for (int i = 0; i < usable % columns; ++i) ++widths[static_cast<std::size_t>(i)];
  tree.root.children = detail::tile(content, SplitAxis::Vertical, widths, spec.gutter);
  tree.root.split = SplitAxis::Vertical;
  for (auto& column : tree.root.children) split_column(column);
  return tree;
}

/// Smallest extent the first child can get along `axis` when a node is
/// split at the lowest allowed fraction.
inline int flexible_min_child_extent(const Rect& r, SplitAxis axis, int gutter, const FlexibleParams& params) {
  const int extent = axis == SplitAxis::Horizontal ? r.h : r.w;
  const int usable = extent - gutter;
  if (usable <= 0) return 0;
  const int low = static_cast<int>(params.splitLow * usable);
  const int high = usable - static_cast<int>(params.splitHigh * usable);
  return std::min(low, high);
}

/// A node may be split along `axis` only if every split position in the
/// allowed fraction range leaves both children with area >= minArea and both
/// sides >= minSide.
inline bool flexible_axis_feasible(const Rect& r, SplitAxis axis, int gutter, const FlexibleParams& params) {
  const int child = flexible_min_child_extent(r, axis, gutter, params);
  const int other = axis == SplitAxis::Horizontal ? r.w : r.h;
  return child >= params.minSide && other >= params.minSide &&
         std::int64_t{child} * other >= params.minArea;
}

namespace detail {

inline void flexible_split(RegionNode& node, int gutter, const FlexibleParams& params, Rng& rng) {
  const bool hOk = flexible_axis_feasible(node.rect, SplitAxis::Horizontal, gutter, params);
  const bool vOk = flexible_axis_feasible(node.rect, SplitAxis::Vertical, gutter, params);
  if (!hOk && !vOk) return;
  SplitAxis axis;
  const bool coin = rng.bernoulli(0.5);
  if (hOk && vOk) {
    axis = coin ? SplitAxis::Horizontal : SplitAxis::Vertical;
  } else {
    axis = hOk ? SplitAxis::Horizontal : SplitAxis::Vertical;
  }
  const int usable = (axis == SplitAxis::Horizontal ? node.rect.h : node.rect.w) - gutter;
  const int lo = static_cast<int>(params.splitLow * usable);
  const int hi = static_cast<int>(params.splitHigh * usable);
  const int first = rng.uniform_int(lo, hi);
  node.children = tile(node.rect, axis, {first, usable - first}, gutter);
  node.split = axis;
  for (auto& child : node.children) flexible_split(child, gutter, params, rng);
}

}  // namespace detail

/// Recursive binary partition of the content area. Each region splits in two
/// along a random axis until no axis admits two children of at least
/// minArea / minSide.
inline LayoutTree generate_flexible_layout(const PageSpec& spec, const FlexibleParams& params, Rng& rng) {
  if (!spec.valid()) throw InfeasibleLayout("invalid page spec");
  if (params.minArea <= 0) throw InfeasibleLayout("minArea must be > 0");
  if (!(params.splitLow > 0.0 && params.splitLow <= params.splitHigh && params.splitHigh < 1.0))
    throw InfeasibleLayout("split fraction range must satisfy 0 < low <= high < 1");
  const Rect content = spec.content_area();
  if (content.area() < params.minArea) {
    std::ostringstream msg;
    msg << "content area " << content.area() << " is below minArea " << params.minArea;
    throw InfeasibleLayout(msg.str());
  }
  LayoutTree tree{LayoutMode::Flexible, RegionNode{content, {}, {}}, rng.seed()};
  detail::flexible_split(tree.root, spec.gutter, params, rng);
  return tree;
}

namespace detail {
inline void collect_leaves(const RegionNode& node, std::vector<Rect>& out) {
  if (node.is_leaf()) {
    out.push_back(node.rect);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}
}  // namespace detail

/// Leaves in depth-first, left-to-right order.
inline std::vector<Rect> leaf_regions(const LayoutTree& tree) {
  std::vector<Rect> out;
  detail::collect_leaves(tree.root, out);
  return out;
}

struct LayoutViolation {
  enum class Kind { BadRect, OutsideContent, RootMismatch, SplitMismatch, NotContained, Overlap, TilingGap, CrossAxisSpan };
  Kind kind;
  std::string path;  // child indices from the root, e.g. "0/2/1"
  std::string message;
};

using LayoutReport = std::vector<LayoutViolation>;

namespace detail {

inline void validate_node(const RegionNode& node, const std::string& path, const PageSpec& spec, LayoutReport& report) {
  using K = LayoutViolation::Kind;
  auto add = [&](K kind, std::string msg) { report.push_back({kind, path, std::move(msg)}); };
  std::ostringstream rs;
  rs << node.rect;
  if (node.rect.w <= 0 || node.rect.h <= 0 || node.rect.x < 0 || node.rect.y < 0) add(K::BadRect, "degenerate rect " + rs.str());
  if (node.is_leaf()) {
    if (node.split) add(K::SplitMismatch, "leaf carries a split axis");
    if (!spec.content_area().contains(node.rect)) add(K::OutsideContent, "leaf " + rs.str() + " outside content area");
    return;
  }
  if (!node.split) {
    add(K::SplitMismatch, "internal node without split axis");
    return;
  }
  if (node.children.size() < 2) add(K::SplitMismatch, "internal node with a single child");

  const auto& kids = node.children;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!node.rect.contains(kids[i].rect)) add(K::NotContained, "child " + std::to_string(i) + " not inside parent");
    for (std::size_t j = i + 1; j < kids.size(); ++j) {
      if (interiors_overlap(kids[i].rect, kids[j].rect))
        add(K::Overlap, "children " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }

  const bool horiz = *node.split == SplitAxis::Horizontal;
  int expected = horiz ? node.rect.y : node.rect.x;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    const Rect& r = kids[i].rect;
    const int start = horiz ? r.y : r.x;
    const int len = horiz ? r.h : r.w;
    if (start != expected)
      add(K::TilingGap, "child " + std::to_string(i) + " starts at " + std::to_string(start) + ", expected " + std::to_string(expected));
    expected = start + len + spec.gutter;
    const bool spans = horiz ? (r.x == node.rect.x && r.w == node.rect.w) : (r.y == node.rect.y && r.h == node.rect.h);
    if (!spans) add(K::CrossAxisSpan, "child " + std::to_string(i) + " does not span the parent across the split axis");
  }
  const int end = horiz ? node.rect.bottom() : node.rect.right();
  if (expected - spec.gutter != end) add(K::TilingGap, "children do not reach the parent's far edge");

  for (std::size_t i = 0; i < kids.size(); ++i)
    validate_node(kids[i], path.empty() ? std::to_string(i) : path + "/" + std::to_string(i), spec, report);
}

}  // namespace detail

/// Checks the partition, tiling and bounds properties. Empty report iff valid.
inline LayoutReport validate_layout(const LayoutTree& tree, const PageSpec& spec) {
  LayoutReport report;
  if (tree.root.rect != spec.content_area())
    report.push_back({LayoutViolation::Kind::RootMismatch, "", "root rect differs from content area"});
  detail::validate_node(tree.root, "", spec, report);
  return report;
}

}  // namespace docsynth
