#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace docsynth;
namespace dt = docsynth::testing;
using nlohmann::json;

namespace {

std::string field_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  const auto c = parse_config(json::object());
  EXPECT_EQ(c.text.fontSizeRange, (std::pair{18, 31}));
  EXPECT_EQ(c.pageWidthRange, (std::pair{1500, 2500}));
  EXPECT_EQ(c.pageHeightRange, (std::pair{1500, 2500}));
  EXPECT_EQ(c.mode, ModeChoice::Mixed);
  EXPECT_DOUBLE_EQ(c.mixedRatio, 0.5);
  EXPECT_EQ(c.componentMix, kDefaultMix);
  EXPECT_EQ(c.fixedColumnParams.numColumns, 3);
  EXPECT_GE(c.workers, 1);
  EXPECT_EQ(c.encoding.format, ImageFormat::PNG);
}

TEST(Config, ReversedRangesAreRejected) {
  EXPECT_EQ(field_of({{"fontSizeRange", {31, 18}}}), "fontSizeRange");
  EXPECT_EQ(field_of({{"pageWidthRange", {2500, 1500}}}), "pageWidthRange");
  EXPECT_EQ(field_of({{"table", {{"rows", {5, 2}}}}}), "table.rows");
}

TEST(Config, InvalidValuesNameTheirField) {
  EXPECT_EQ(field_of({{"count", 0}}), "count");
  EXPECT_EQ(field_of({{"count", "ten"}}), "count");
  EXPECT_EQ(field_of({{"mode", "Grid"}}), "mode");
  EXPECT_EQ(field_of({{"mixedRatio", 1.5}}), "mixedRatio");
  EXPECT_EQ(field_of({{"componentMix", {{"Title", 0.5}, {"Paragraph", 0.6}}}}), "componentMix");
  EXPECT_EQ(field_of({{"componentMix", {{"Sidebar", 1.0}}}}), "componentMix.Sidebar");
  EXPECT_EQ(field_of({{"colours", 3}}), "colours");
  EXPECT_EQ(field_of({{"margin", 800}}), "margin");
  EXPECT_EQ(field_of({{"flexibleParams", {{"minArea", 0}}}}), "flexibleParams.minArea");
  EXPECT_EQ(field_of({{"encoding", {{"format", "GIF"}}}}), "encoding.format");
  EXPECT_EQ(field_of(json::array()), "config");
}

TEST(Config, ImageIsAnAliasForFigure) {
  const auto c = parse_config({{"componentMix", {{"Paragraph", 0.5}, {"Image", 0.5}}}});
  EXPECT_DOUBLE_EQ(c.componentMix[static_cast<std::size_t>(ComponentKind::Figure)], 0.5);
}

TEST(Config, RelativePathsResolveAgainstTheConfigFile) {
  dt::TempDir dir("config");
  dt::write_file(dir.path() / "c.json", R"({"paths": {"corpus": "text/vi.txt", "fonts": "/abs/fonts"}})");
  const auto c = load_config(dir.path() / "c.json");
  EXPECT_EQ(c.paths.corpus, dir.path() / "text/vi.txt");
  EXPECT_EQ(c.paths.fonts, "/abs/fonts");
}

TEST(Config, BadJsonIsAConfigError) {
  dt::TempDir dir("config");
  dt::write_file(dir.path() / "c.json", "{ count: 3 ");
  EXPECT_THROW(load_config(dir.path() / "c.json"), ConfigError);
  EXPECT_THROW(load_config(dir.path() / "missing.json"), ConfigError);
}

TEST(Config, ResolvedConfigRoundTrips) {
  auto c = parse_config({{"count", 7},
                         {"mode", "FixedColumn"},
                         {"masterSeed", 99},
                         {"fontSizeRange", {20, 24}},
                         {"componentMix", {{"Title", 0.2}, {"Paragraph", 0.8}}},
                         {"table", {{"cols", {2, 3}}}},
                         {"encoding", {{"format", "JPEG"}, {"quality", 80}}}});
  const auto again = parse_config(json::parse(config_to_json(c).dump()));
  EXPECT_EQ(config_to_json(again).dump(), config_to_json(c).dump());
  EXPECT_EQ(again.count, 7);
  EXPECT_EQ(again.encoding.format, ImageFormat::JPEG);
}

TEST(Config, BundledDefaultConfigLoads) {
  const auto c = load_config(dt::asset_dir().parent_path() / "configs" / "default.json");
  EXPECT_TRUE(std::filesystem::exists(c.paths.corpus));
  EXPECT_TRUE(std::filesystem::is_directory(c.paths.imagePool));
}
