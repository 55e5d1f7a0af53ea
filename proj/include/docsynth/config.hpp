#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include <json.hpp>

#include "filler.hpp"
#include "formula.hpp"
#include "layout.hpp"
#include "raster.hpp"

namespace docsynth {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& constraint)
      : std::runtime_error(field + ": " + constraint), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ModeChoice { FixedColumn, Flexible, Mixed };

struct AssetPaths {
  std::filesystem::path corpus;
  std::filesystem::path fonts;
  std::filesystem::path imagePool;
  std::filesystem::path outputDir{"out"};
};

struct GenerationConfig {
  int count = 100;
  ModeChoice mode = ModeChoice::Mixed;
  /// Probability of FixedColumn in Mixed mode.
  double mixedRatio = 0.5;
  std::uint64_t masterSeed = 0;
  std::pair<int, int> pageWidthRange{1500, 2500};
  std::pair<int, int> pageHeightRange{1500, 2500};
  int margin = 72;
  int gutter = 16;
  TextStyleParams text;
  ComponentMix componentMix = kDefaultMix;
  KindAssignment kinds;
  FixedColumnParams fixedColumnParams;
  FlexibleParams flexibleParams;
  FormulaGrammar formula;
  AssetPaths paths;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  Encoding encoding;
  int ioRetries = 2;
};

inline const char* to_string(ModeChoice m) {
  switch (m) {
    case ModeChoice::FixedColumn: return "FixedColumn";
    case ModeChoice::Flexible: return "Flexible";
    case ModeChoice::Mixed: return "Mixed";
  }
  return "?";
}

namespace detail {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

inline std::pair<int, int> get_range(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(field, "must be a [low, high] pair");
  std::pair<int, int> r{get_field<int>(j[0], field), get_field<int>(j[1], field)};
  if (r.first > r.second) throw ConfigError(field, "low must be <= high");
  return r;
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& prefix) {
  if (!j.is_object()) throw ConfigError(prefix.empty() ? "config" : prefix, "must be an object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown field");
}

inline std::filesystem::path resolve_path(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace detail

/// Checks every invariant of a config. Throws ConfigError naming the field.
inline void validate_config(const GenerationConfig& c) {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(c.count >= 1, "count", "must be >= 1");
  require(c.workers >= 1, "workers", "must be >= 1");
  require(c.mixedRatio >= 0.0 && c.mixedRatio <= 1.0, "mixedRatio", "must be in [0, 1]");
  require(c.pageWidthRange.first <= c.pageWidthRange.second, "pageWidthRange", "low must be <= high");
  require(c.pageHeightRange.first <= c.pageHeightRange.second, "pageHeightRange", "low must be <= high");
  require(c.text.fontSizeRange.first <= c.text.fontSizeRange.second, "fontSizeRange", "low must be <= high");
  require(c.text.fontSizeRange.first >= 1, "fontSizeRange", "sizes must be >= 1");
  require(c.text.fontSizeRange.second <= 1000, "fontSizeRange", "sizes must be <= 1000");
  require(c.margin >= 0, "margin", "must be >= 0");
  require(c.gutter >= 0, "gutter", "must be >= 0");
  const int minDim = std::min(c.pageWidthRange.first, c.pageHeightRange.first);
  require(minDim > 0 && c.margin * 2 + c.gutter < minDim, "margin",
          "2*margin + gutter must be smaller than the smallest page dimension");
  require(c.text.colorJitterMax >= 0 && c.text.colorJitterMax <= 255, "colorJitterMax", "must be in [0, 255]");
  require(c.text.lineSpacing > 0.0, "lineSpacing", "must be > 0");
  require(c.text.titleScale > 0.0, "titleScale", "must be > 0");
  require(mix_valid(c.componentMix), "componentMix", "probabilities must be non-negative and sum to 1");
  require(c.kinds.titleBoost >= 0.0 && c.kinds.titleBoost <= 1.0, "titleBoost", "must be in [0, 1]");
  require(c.fixedColumnParams.numColumns >= 1, "fixedColumnParams.numColumns", "must be >= 1");
  require(c.fixedColumnParams.maxBreaks >= 0, "fixedColumnParams.maxBreaks", "must be >= 0");
  require(c.fixedColumnParams.minRegionHeight >= 1, "fixedColumnParams.minRegionHeight", "must be >= 1");
  require(c.flexibleParams.minArea > 0, "flexibleParams.minArea", "must be > 0");
  require(c.flexibleParams.minSide >= 1, "flexibleParams.minSide", "must be >= 1");
  const int minContentH = c.pageHeightRange.first - 2 * c.margin;
  const int minContentW = c.pageWidthRange.first - 2 * c.margin;
  require(c.fixedColumnParams.minRegionHeight <= minContentH, "fixedColumnParams.minRegionHeight",
          "exceeds the content height of the smallest page");
  require(c.flexibleParams.minArea <= std::int64_t{minContentH} * minContentW, "flexibleParams.minArea",
          "exceeds the content area of the smallest page");
  require(c.text.tableRows.first >= 1 && c.text.tableRows.first <= c.text.tableRows.second, "table.rows",
          "must be a [low, high] pair with low >= 1");
  require(c.text.tableCols.first >= 1 && c.text.tableCols.first <= c.text.tableCols.second, "table.cols",
          "must be a [low, high] pair with low >= 1");
  require(c.formula.valid(), "formula", "maxDepth >= 1, non-empty operators and variables, valid digit range");
  require(c.encoding.jpegQuality >= 1 && c.encoding.jpegQuality <= 100, "encoding.quality", "must be in [1, 100]");
  require(c.ioRetries >= 0, "ioRetries", "must be >= 0");
}

/// Builds a config from JSON. Missing fields keep their defaults; unknown
/// fields are errors. Relative paths resolve against `baseDir`.
inline GenerationConfig parse_config(const nlohmann::json& j, const std::filesystem::path& baseDir = {}) {
  using detail::get_field;
  using detail::get_range;
  GenerationConfig c;
  if (j.is_null()) {
    validate_config(c);
    return c;
  }
  detail::reject_unknown(j,
                         {"count", "mode", "mixedRatio", "masterSeed", "pageWidthRange", "pageHeightRange", "margin",
                          "gutter", "fontSizeRange", "colorJitterMax", "lineSpacing", "titleScale", "titleMaxLines",
                          "titleBoost", "componentMix", "minTableSize", "table", "fixedColumnParams", "flexibleParams",
                          "formula", "paths", "workers", "encoding", "ioRetries"},
                         "");
  if (j.contains("count")) c.count = get_field<int>(j["count"], "count");
  if (j.contains("mode")) {
    const auto m = get_field<std::string>(j["mode"], "mode");
    if (m == "FixedColumn") c.mode = ModeChoice::FixedColumn;
    else if (m == "Flexible") c.mode = ModeChoice::Flexible;
    else if (m == "Mixed") c.mode = ModeChoice::Mixed;
    else throw ConfigError("mode", "must be FixedColumn, Flexible or Mixed");
  }
  if (j.contains("mixedRatio")) c.mixedRatio = get_field<double>(j["mixedRatio"], "mixedRatio");
  if (j.contains("masterSeed")) c.masterSeed = get_field<std::uint64_t>(j["masterSeed"], "masterSeed");
  if (j.contains("pageWidthRange")) c.pageWidthRange = get_range(j["pageWidthRange"], "pageWidthRange");
  if (j.contains("pageHeightRange")) c.pageHeightRange = get_range(j["pageHeightRange"], "pageHeightRange");
  if (j.contains("margin")) c.margin = get_field<int>(j["margin"], "margin");
  if (j.contains("gutter")) c.gutter = get_field<int>(j["gutter"], "gutter");
  if (j.contains("fontSizeRange")) c.text.fontSizeRange = get_range(j["fontSizeRange"], "fontSizeRange");
  if (j.contains("colorJitterMax")) c.text.colorJitterMax = get_field<int>(j["colorJitterMax"], "colorJitterMax");
  if (j.contains("lineSpacing")) c.text.lineSpacing = get_field<double>(j["lineSpacing"], "lineSpacing");
  if (j.contains("titleScale")) c.text.titleScale = get_field<double>(j["titleScale"], "titleScale");
  if (j.contains("titleMaxLines")) c.text.titleMaxLines = get_field<int>(j["titleMaxLines"], "titleMaxLines");
  if (j.contains("titleBoost")) c.kinds.titleBoost = get_field<double>(j["titleBoost"], "titleBoost");
  if (j.contains("componentMix")) {
    const auto& m = j["componentMix"];
    detail::reject_unknown(m, {"Title", "Paragraph", "Table", "Figure", "Image", "Formula"}, "componentMix.");
    ComponentMix mix{};
    for (const auto& [key, value] : m.items())
      mix[static_cast<std::size_t>(*kind_from_string(key))] += get_field<double>(value, "componentMix." + key);
    c.componentMix = mix;
  }
  if (j.contains("minTableSize")) {
    auto r = j["minTableSize"];
    if (!r.is_array() || r.size() != 2) throw ConfigError("minTableSize", "must be [width, height]");
    c.kinds.minTableSize = {get_field<int>(r[0], "minTableSize"), get_field<int>(r[1], "minTableSize")};
  }
  if (j.contains("table")) {
    const auto& t = j["table"];
    detail::reject_unknown(t, {"rows", "cols", "minCellWidth", "minCellHeight", "cellPadding"}, "table.");
    if (t.contains("rows")) c.text.tableRows = get_range(t["rows"], "table.rows");
    if (t.contains("cols")) c.text.tableCols = get_range(t["cols"], "table.cols");
    if (t.contains("minCellWidth")) c.text.minCell.w = get_field<int>(t["minCellWidth"], "table.minCellWidth");
    if (t.contains("minCellHeight")) c.text.minCell.h = get_field<int>(t["minCellHeight"], "table.minCellHeight");
    if (t.contains("cellPadding")) c.text.cellPadding = get_field<int>(t["cellPadding"], "table.cellPadding");
  }
  if (j.contains("fixedColumnParams")) {
    const auto& f = j["fixedColumnParams"];
    detail::reject_unknown(f, {"numColumns", "maxBreaks", "minRegionHeight"}, "fixedColumnParams.");
    if (f.contains("numColumns")) c.fixedColumnParams.numColumns = get_field<int>(f["numColumns"], "fixedColumnParams.numColumns");
    if (f.contains("maxBreaks")) c.fixedColumnParams.maxBreaks = get_field<int>(f["maxBreaks"], "fixedColumnParams.maxBreaks");
    if (f.contains("minRegionHeight"))
      c.fixedColumnParams.minRegionHeight = get_field<int>(f["minRegionHeight"], "fixedColumnParams.minRegionHeight");
  }
  if (j.contains("flexibleParams")) {
    const auto& f = j["flexibleParams"];
    detail::reject_unknown(f, {"minArea", "minSide"}, "flexibleParams.");
    if (f.contains("minArea")) c.flexibleParams.minArea = get_field<std::int64_t>(f["minArea"], "flexibleParams.minArea");
    if (f.contains("minSide")) c.flexibleParams.minSide = get_field<int>(f["minSide"], "flexibleParams.minSide");
  }
  if (j.contains("formula")) {
    const auto& f = j["formula"];
    detail::reject_unknown(f, {"maxDepth", "operators", "variableSymbols", "digitRange", "unicodeSuperscripts"}, "formula.");
    if (f.contains("maxDepth")) c.formula.maxDepth = get_field<int>(f["maxDepth"], "formula.maxDepth");
    if (f.contains("operators")) c.formula.operators = get_field<std::vector<std::string>>(f["operators"], "formula.operators");
    if (f.contains("variableSymbols"))
      c.formula.variableSymbols = get_field<std::vector<std::string>>(f["variableSymbols"], "formula.variableSymbols");
    if (f.contains("digitRange")) c.formula.digitRange = get_range(f["digitRange"], "formula.digitRange");
    if (f.contains("unicodeSuperscripts"))
      c.formula.unicodeSuperscripts = get_field<bool>(f["unicodeSuperscripts"], "formula.unicodeSuperscripts");
  }
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    detail::reject_unknown(p, {"corpus", "fonts", "imagePool", "outputDir"}, "paths.");
    auto path_of = [&](const char* key) {
      return detail::resolve_path(get_field<std::string>(p[key], std::string("paths.") + key), baseDir);
    };
    if (p.contains("corpus")) c.paths.corpus = path_of("corpus");
    if (p.contains("fonts")) c.paths.fonts = path_of("fonts");
    if (p.contains("imagePool")) c.paths.imagePool = path_of("imagePool");
    if (p.contains("outputDir")) c.paths.outputDir = path_of("outputDir");
  }
  if (j.contains("workers")) c.workers = get_field<int>(j["workers"], "workers");
  if (j.contains("ioRetries")) c.ioRetries = get_field<int>(j["ioRetries"], "ioRetries");
  if (j.contains("encoding")) {
    const auto& e = j["encoding"];
    detail::reject_unknown(e, {"format", "quality"}, "encoding.");
    if (e.contains("format")) {
      const auto f = get_field<std::string>(e["format"], "encoding.format");
      if (f == "PNG") c.encoding.format = ImageFormat::PNG;
      else if (f == "JPEG") c.encoding.format = ImageFormat::JPEG;
      else throw ConfigError("encoding.format", "must be PNG or JPEG");
    }
    if (e.contains("quality")) c.encoding.jpegQuality = get_field<int>(e["quality"], "encoding.quality");
  }
  validate_config(c);
  return c;
}

inline GenerationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, path.parent_path());
}

/// Resolved config as JSON, with the same field names parse_config accepts.
inline nlohmann::ordered_json config_to_json(const GenerationConfig& c) {
  nlohmann::ordered_json j;
  j["count"] = c.count;
  j["mode"] = to_string(c.mode);
  j["mixedRatio"] = c.mixedRatio;
  j["masterSeed"] = c.masterSeed;
  j["pageWidthRange"] = {c.pageWidthRange.first, c.pageWidthRange.second};
  j["pageHeightRange"] = {c.pageHeightRange.first, c.pageHeightRange.second};
  j["margin"] = c.margin;
  j["gutter"] = c.gutter;
  j["fontSizeRange"] = {c.text.fontSizeRange.first, c.text.fontSizeRange.second};
  j["colorJitterMax"] = c.text.colorJitterMax;
  j["lineSpacing"] = c.text.lineSpacing;
  j["titleScale"] = c.text.titleScale;
  j["titleMaxLines"] = c.text.titleMaxLines;
  j["titleBoost"] = c.kinds.titleBoost;
  for (auto k : kAllKinds) j["componentMix"][to_string(k)] = c.componentMix[static_cast<std::size_t>(k)];
  j["minTableSize"] = {c.kinds.minTableSize.w, c.kinds.minTableSize.h};
  j["table"] = {{"rows", {c.text.tableRows.first, c.text.tableRows.second}},
                {"cols", {c.text.tableCols.first, c.text.tableCols.second}},
                {"minCellWidth", c.text.minCell.w},
                {"minCellHeight", c.text.minCell.h},
                {"cellPadding", c.text.cellPadding}};
  j["fixedColumnParams"] = {{"numColumns", c.fixedColumnParams.numColumns},
                            {"maxBreaks", c.fixedColumnParams.maxBreaks},
                            {"minRegionHeight", c.fixedColumnParams.minRegionHeight}};
  j["flexibleParams"] = {{"minArea", c.flexibleParams.minArea}, {"minSide", c.flexibleParams.minSide}};
  j["formula"] = {{"maxDepth", c.formula.maxDepth},
                  {"operators", c.formula.operators},
                  {"variableSymbols", c.formula.variableSymbols},
                  {"digitRange", {c.formula.digitRange.first, c.formula.digitRange.second}},
                  {"unicodeSuperscripts", c.formula.unicodeSuperscripts}};
  j["paths"] = {{"corpus", c.paths.corpus.string()},
                {"fonts", c.paths.fonts.string()},
                {"imagePool", c.paths.imagePool.string()},
                {"outputDir", c.paths.outputDir.string()}};
  j["workers"] = c.workers;
  j["ioRetries"] = c.ioRetries;
  j["encoding"] = {{"format", c.encoding.format == ImageFormat::PNG ? "PNG" : "JPEG"}, {"quality", c.encoding.jpegQuality}};
  return j;
}

}  // namespace docsynth
