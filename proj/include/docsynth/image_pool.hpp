#pragma once

#include <algorithm>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "random.hpp"
#include "raster.hpp"

namespace docsynth {

class EmptyPool : public std::runtime_error {
 public:
  EmptyPool() : std::runtime_error("image pool is empty") {}
};

struct ImageAsset {
  std::filesystem::path path;
  int width = 0;
  int height = 0;
  std::shared_ptr<const RasterImage> pixels;
};

struct ImagePool {
  std::vector<ImageAsset> assets;

  bool empty() const { return assets.empty(); }
};

/// Loads every decodable image file in `dir` (sorted by file name). Files
/// that fail to decode are reported through `skipped`.
inline ImagePool load_image_pool(const std::filesystem::path& dir, std::vector<std::string>* skipped = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ImageIoError("image pool directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  ImagePool pool;
  for (const auto& file : files) {
    try {
      auto img = std::make_shared<RasterImage>(read_image(file));
      if (img->width <= 0 || img->height <= 0) continue;
      pool.assets.push_back({file, img->width, img->height, std::move(img)});
    } catch (const ImageIoError& e) {
      if (skipped) skipped->push_back(e.what());
    }
  }
  return pool;
}

struct PlacedImage {
  std::size_t assetIndex = 0;
  Rect rect;
};

/// Largest aspect-preserving rect of an aw x ah image inside `target`,
/// centered.
inline Rect fit_centered(int aw, int ah, const Rect& target) {
  int w, h;
  if (std::int64_t{aw} * target.h >= std::int64_t{ah} * target.w) {
    w = target.w;
    h = static_cast<int>((std::int64_t{ah} * target.w * 2 + aw) / (2 * std::int64_t{aw}));
  } else {
    h = target.h;
    w = static_cast<int>((std::int64_t{aw} * target.h * 2 + ah) / (2 * std::int64_t{ah}));
  }
  w = std::clamp(w, 1, target.w);
  h = std::clamp(h, 1, target.h);
  return {target.x + (target.w - w) / 2, target.y + (target.h - h) / 2, w, h};
}

inline PlacedImage sample_image(const ImagePool& pool, Rng& rng, const Rect& target) {
  if (pool.empty()) throw EmptyPool();
  const auto idx = rng.index(pool.assets.size());
  const auto& a = pool.assets[idx];
  return {idx, fit_centered(a.width, a.height, target)};
}

}  // namespace docsynth
