#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/stb.hpp"

namespace docsynth {

class FontError : public std::runtime_error {
 public:
  FontError(const std::string& what, std::vector<std::string> failed = {})
      : std::runtime_error(what), failed_(std::move(failed)) {}
  const std::vector<std::string>& failed_files() const { return failed_; }

 private:
  std::vector<std::string> failed_;
};

inline constexpr char32_t kMaxCodepoint = 0x10FFFF;

/// A parsed TrueType/OpenType face. Immutable after loading and safe to share
/// across threads.
class Font {
 public:
  static std::optional<Font> parse(std::filesystem::path path, std::shared_ptr<const std::vector<unsigned char>> data) {
    Font f;
    f.path_ = std::move(path);
    f.data_ = std::move(data);
    const int offset = stbtt_GetFontOffsetForIndex(f.data_->data(), 0);
    if (offset < 0 || !stbtt_InitFont(&f.info_, f.data_->data(), offset)) return std::nullopt;
    f.family_ = f.name_string(1);
    f.subfamily_ = f.name_string(2);
    if (f.family_.empty()) f.family_ = f.path_.stem().string();
    f.coverage_.assign(kMaxCodepoint + 1, false);
    bool any = false;
    for (char32_t cp = 0x20; cp <= kMaxCodepoint; ++cp) {
      if (cp == 0xD800) cp = 0xE000;
      if (stbtt_FindGlyphIndex(&f.info_, static_cast<int>(cp)) != 0) {
        f.coverage_[cp] = true;
        any = true;
      }
    }
    if (!any) return std::nullopt;
    stbtt_GetFontVMetrics(&f.info_, &f.ascent_, &f.descent_, &f.lineGap_);
    return f;
  }

  const std::filesystem::path& path() const { return path_; }
  const std::string& family() const { return family_; }
  const std::string& subfamily() const { return subfamily_; }
  const stbtt_fontinfo& info() const { return info_; }

  bool covers(char32_t cp) const { return cp <= kMaxCodepoint && coverage_[cp]; }
  std::size_t coverage_size() const { return static_cast<std::size_t>(std::count(coverage_.begin(), coverage_.end(), true)); }

  bool is_bold() const { return subfamily_.find("Bold") != std::string::npos; }
  bool is_italic() const {
    return subfamily_.find("Italic") != std::string::npos || subfamily_.find("Oblique") != std::string::npos;
  }

  /// Pixels per font unit for an em of `fontSize` pixels.
  float scale(int fontSize) const { return stbtt_ScaleForMappingEmToPixels(&info_, static_cast<float>(fontSize)); }

  int ascent_units() const { return ascent_; }
  int descent_units() const { return descent_; }
  int line_gap_units() const { return lineGap_; }

 private:
  Font() = default;

  std::string name_string(int nameId) const {
    int len = 0;
    // Microsoft / Unicode BMP / en-US, UTF-16BE.
    const char* s = stbtt_GetFontNameString(&info_, &len, STBTT_PLATFORM_ID_MICROSOFT, STBTT_MS_EID_UNICODE_BMP,
                                            STBTT_MS_LANG_ENGLISH, nameId);
    std::string out;
    if (s) {
      for (int i = 0; i + 1 < len; i += 2) {
        const unsigned cu = (static_cast<unsigned char>(s[i]) << 8) | static_cast<unsigned char>(s[i + 1]);
        if (cu < 0x80) out.push_back(static_cast<char>(cu));
      }
      return out;
    }
    s = stbtt_GetFontNameString(&info_, &len, STBTT_PLATFORM_ID_MAC, STBTT_MAC_EID_ROMAN, STBTT_MAC_LANG_ENGLISH, nameId);
    if (s) out.assign(s, static_cast<std::size_t>(len));
    return out;
  }

  std::filesystem::path path_;
  std::shared_ptr<const std::vector<unsigned char>> data_;
  stbtt_fontinfo info_{};
  std::string family_;
  std::string subfamily_;
  std::vector<bool> coverage_;
  int ascent_ = 0;
  int descent_ = 0;
  int lineGap_ = 0;
};

struct FontSet {
  std::vector<Font> fonts;
  /// Files that were present but failed to parse.
  std::vector<std::string> skipped;

  std::size_t size() const { return fonts.size(); }

  /// First font covering `cp`, in load order.
  std::optional<std::size_t> first_covering(char32_t cp) const {
    for (std::size_t i = 0; i < fonts.size(); ++i)
      if (fonts[i].covers(cp)) return i;
    return std::nullopt;
  }

  /// First covering face with the same weight and slant as `preferred`,
  /// else the first covering face.
  std::optional<std::size_t> fallback_for(std::size_t preferred, char32_t cp) const {
    const auto& p = fonts[preferred];
    for (std::size_t i = 0; i < fonts.size(); ++i)
      if (fonts[i].covers(cp) && fonts[i].is_bold() == p.is_bold() && fonts[i].is_italic() == p.is_italic()) return i;
    return first_covering(cp);
  }

  /// Upright, non-bold faces; all faces if none qualify.
  std::vector<std::size_t> body_fonts() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fonts.size(); ++i)
      if (!fonts[i].is_bold() && !fonts[i].is_italic()) out.push_back(i);
    if (out.empty())
      for (std::size_t i = 0; i < fonts.size(); ++i) out.push_back(i);
    return out;
  }

  /// Upright bold face of the same family, or `index` itself.
  std::size_t bold_variant(std::size_t index) const {
    const auto& base = fonts[index];
    if (base.is_bold()) return index;
    for (std::size_t i = 0; i < fonts.size(); ++i)
      if (fonts[i].family() == base.family() && fonts[i].is_bold() && !fonts[i].is_italic()) return i;
    return index;
  }
};

inline std::optional<Font> load_font_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  auto data = std::make_shared<std::vector<unsigned char>>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (data->size() < 12) return std::nullopt;
  return Font::parse(file, std::move(data));
}

/// Loads every font file in `dir`, sorted by file name.
inline FontSet load_fonts(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw FontError("font directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".ttf" || ext == ".otf" || ext == ".ttc") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  FontSet set;
  for (const auto& f : files) {
    if (auto font = load_font_file(f)) {
      set.fonts.push_back(std::move(*font));
    } else {
      set.skipped.push_back(f.string());
    }
  }
  if (set.fonts.empty()) {
    std::string msg = "no usable fonts in " + dir.string();
    for (const auto& s : set.skipped) msg += "\n  unparseable: " + s;
    throw FontError(msg, set.skipped);
  }
  return set;
}

}  // namespace docsynth
