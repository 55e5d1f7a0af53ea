// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance [--work-dir DIR] [--scale-pages N]
//                                    [--only N[,N...]] [--keep]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "test_support.hpp"

using namespace docsynth;
namespace dt = docsynth::testing;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr int kLayoutsPerMode = 1000;
constexpr double kLayoutSeconds = 10.0;
constexpr int kBatchPages = 200;
constexpr double kBatchSeconds = 300.0;
constexpr int kShadowPages = 20;
constexpr std::size_t kMaxOwnershipViolations = 0;
constexpr int kFontMin = 18, kFontMax = 31;
constexpr int kDimMin = 1500, kDimMax = 2500;
constexpr int kDeterminismWorkers = 8;
constexpr int kScalePages = 2000;
constexpr double kDatasetPages = 320000.0;

// ---------------------------------------------------------------------------
// Minimal JSON reader, written separately from the library's loader so the
// COCO files are checked by a second implementation.

struct JValue;
using JObject = std::map<std::string, JValue>;
using JArray = std::vector<JValue>;

struct JValue {
  std::variant<std::nullptr_t, bool, double, std::string, JArray, JObject> v;

  bool is_obj() const { return std::holds_alternative<JObject>(v); }
  bool is_arr() const { return std::holds_alternative<JArray>(v); }
  bool is_num() const { return std::holds_alternative<double>(v); }
  bool is_str() const { return std::holds_alternative<std::string>(v); }
  const JObject& obj() const { return std::get<JObject>(v); }
  const JArray& arr() const { return std::get<JArray>(v); }
  double num() const { return std::get<double>(v); }
  const std::string& str() const { return std::get<std::string>(v); }
  bool has(const std::string& k) const { return is_obj() && obj().count(k); }
  const JValue& at(const std::string& k) const { return obj().at(k); }
};

class JsonReader {
 public:
  explicit JsonReader(const std::string& text) : s_(text) {}

  JValue parse() {
    JValue v = value();
    ws();
    if (p_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("json: " + what + " at byte " + std::to_string(p_));
  }
  void ws() {
    while (p_ < s_.size() && (s_[p_] == ' ' || s_[p_] == '\n' || s_[p_] == '\r' || s_[p_] == '\t')) ++p_;
  }
  char peek() {
    ws();
    if (p_ >= s_.size()) fail("unexpected end");
    return s_[p_];
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++p_;
  }
  bool literal(const char* lit) {
    const std::size_t n = std::strlen(lit);
    if (s_.compare(p_, n, lit) != 0) return false;
    p_ += n;
    return true;
  }

  JValue value() {
    const char c = peek();
    if (c == '{') return {object()};
    if (c == '[') return {array()};
    if (c == '"') return {string()};
    if (literal("true")) return {true};
    if (literal("false")) return {false};
    if (literal("null")) return {nullptr};
    return {number()};
  }

  JObject object() {
    expect('{');
    JObject o;
    if (peek() == '}') {
      ++p_;
      return o;
    }
    for (;;) {
      if (peek() != '"') fail("expected key");
      std::string k = string();
      expect(':');
      if (!o.emplace(k, value()).second) fail("duplicate key " + k);
      if (peek() == ',') {
        ++p_;
        continue;
      }
      expect('}');
      return o;
    }
  }

  JArray array() {
    expect('[');
    JArray a;
    if (peek() == ']') {
      ++p_;
      return a;
    }
    for (;;) {
      a.push_back(value());
      if (peek() == ',') {
        ++p_;
        continue;
      }
      expect(']');
      return a;
    }
  }

  static void put_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  unsigned hex4() {
    if (p_ + 4 > s_.size()) fail("short \\u escape");
    unsigned v = 0;
    for (int i = 0; i < 4; ++i) {
      const char h = s_[p_++];
      v <<= 4;
      if (h >= '0' && h <= '9') v |= static_cast<unsigned>(h - '0');
      else if (h >= 'a' && h <= 'f') v |= static_cast<unsigned>(h - 'a' + 10);
      else if (h >= 'A' && h <= 'F') v |= static_cast<unsigned>(h - 'A' + 10);
      else fail("bad hex digit");
    }
    return v;
  }

  std::string string() {
    expect('"');
    std::string out;
    while (p_ < s_.size()) {
      const char c = s_[p_++];
      if (c == '"') return out;
      if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
      if (c != '\\') {
        out += c;
        continue;
      }
      if (p_ >= s_.size()) break;
      const char e = s_[p_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          unsigned cp = hex4();
          if (cp >= 0xD800 && cp < 0xDC00 && literal("\\u")) cp = 0x10000 + ((cp - 0xD800) << 10) + (hex4() - 0xDC00);
          put_utf8(out, cp);
          break;
        }
        default: fail("bad escape");
      }
    }
    fail("unterminated string");
  }

  double number() {
    const std::size_t start = p_;
    if (p_ < s_.size() && s_[p_] == '-') ++p_;
    while (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.' || s_[p_] == 'e' ||
                              s_[p_] == 'E' || s_[p_] == '+' || s_[p_] == '-'))
      ++p_;
    if (p_ == start) fail("expected value");
    return std::stod(s_.substr(start, p_ - start));
  }

  const std::string& s_;
  std::size_t p_ = 0;
};

JValue read_json(const fs::path& p) {
  const auto text = dt::read_file(p);
  return JsonReader(text).parse();
}

bool is_int(const JValue& v) { return v.is_num() && std::floor(v.num()) == v.num(); }

// Width and height from a PNG's IHDR chunk.
std::pair<int, int> png_size(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  unsigned char h[24] = {};
  in.read(reinterpret_cast<char*>(h), 24);
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (!in || std::memcmp(h, sig, 8) != 0 || std::memcmp(h + 12, "IHDR", 4) != 0) return {-1, -1};
  auto be = [&](int o) { return (h[o] << 24) | (h[o + 1] << 16) | (h[o + 2] << 8) | h[o + 3]; };
  return {be(16), be(20)};
}

// ---------------------------------------------------------------------------

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Rectangle {
  long x, y, w, h;
  bool contains(const Rectangle& o) const { return o.x >= x && o.y >= y && o.x + o.w <= x + w && o.y + o.h <= y + h; }
  bool operator==(const Rectangle&) const = default;
};

Rectangle rect_of(const nlohmann::json& j) { return {j[0].get<long>(), j[1].get<long>(), j[2].get<long>(), j[3].get<long>()}; }

Rectangle rect_of(const JValue& j) {
  const auto& a = j.arr();
  return {static_cast<long>(a.at(0).num()), static_cast<long>(a.at(1).num()), static_cast<long>(a.at(2).num()),
          static_cast<long>(a.at(3).num())};
}

Rectangle hull(const std::vector<Rectangle>& rs) {
  long x0 = LONG_MAX, y0 = LONG_MAX, x1 = LONG_MIN, y1 = LONG_MIN;
  for (const auto& r : rs) {
    x0 = std::min(x0, r.x);
    y0 = std::min(y0, r.y);
    x1 = std::max(x1, r.x + r.w);
    y1 = std::max(y1, r.y + r.h);
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

std::vector<fs::path> label_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir / "labels")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GenerationConfig batch_config(const fs::path& out, int count, int workers) {
  auto c = dt::default_config(out);
  c.count = count;
  c.workers = workers;
  c.mode = ModeChoice::Mixed;
  c.masterSeed = 2024;
  return c;
}

// 1. Layout correctness.
Outcome layout_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t bad = 0, leaves = 0;
  const GenerationConfig defaults;
  for (auto mode : {LayoutMode::FixedColumn, LayoutMode::Flexible}) {
    for (int s = 0; s < kLayoutsPerMode; ++s) {
      Rng rng(derive_seed(static_cast<std::uint64_t>(mode) + 1, static_cast<std::uint64_t>(s)));
      const PageSpec spec{rng.uniform_int(kDimMin, kDimMax), rng.uniform_int(kDimMin, kDimMax), defaults.margin,
                          defaults.gutter};
      const auto tree = mode == LayoutMode::FixedColumn ? generate_fixed_column_layout(spec, defaults.fixedColumnParams, rng)
                                                        : generate_flexible_layout(spec, defaults.flexibleParams, rng);
      bad += !validate_layout(tree, spec).empty();
      const auto ls = leaf_regions(tree);
      leaves += ls.size();
      // Independent pairwise check of leaf interiors.
      for (std::size_t i = 0; i < ls.size(); ++i)
        for (std::size_t j = i + 1; j < ls.size(); ++j) bad += interiors_overlap(ls[i], ls[j]);
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << 2 * kLayoutsPerMode << " layouts, " << leaves << " leaves, " << bad << " invalid, " << secs << " s (limit "
    << kLayoutSeconds << " s)";
  return {bad == 0 && secs < kLayoutSeconds, d.str()};
}

// 2. Containment chain and union equalities, checked from the label files.
Outcome containment_chain(const fs::path& dir, double batchSeconds) {
  std::size_t violations = 0, checked = 0;
  std::string first;
  auto flag = [&](const std::string& what) {
    if (!violations) first = what;
    ++violations;
  };
  for (const auto& path : label_files(dir)) {
    const auto doc = nlohmann::json::parse(dt::read_file(path));
    const Rectangle page{0, 0, doc["width"].get<long>(), doc["height"].get<long>()};
    for (const auto& c : doc["components"]) {
      const auto cat = c["category"].get<std::string>();
      const Rectangle cb = rect_of(c["bbox"]), region = rect_of(c["region"]);
      ++checked;
      if (!region.contains(cb) || !page.contains(region)) flag(path.filename().string() + ": component outside region");
      std::vector<Rectangle> lineBoxes;
      for (const auto& l : c["lines"]) {
        const Rectangle lb = rect_of(l["bbox"]);
        lineBoxes.push_back(lb);
        ++checked;
        if (!cb.contains(lb)) flag(path.filename().string() + ": line outside component");
        std::vector<Rectangle> wordBoxes;
        for (const auto& w : l["words"]) {
          const Rectangle wb = rect_of(w["bbox"]);
          wordBoxes.push_back(wb);
          ++checked;
          if (!lb.contains(wb)) flag(path.filename().string() + ": word outside line");
          std::vector<Rectangle> charBoxes;
          for (const auto& ch : w["chars"]) {
            const Rectangle chb = rect_of(ch["bbox"]);
            charBoxes.push_back(chb);
            ++checked;
            if (!wb.contains(chb) || chb.w <= 0 || chb.h <= 0) flag(path.filename().string() + ": char outside word");
          }
          if (charBoxes.empty() || !(hull(charBoxes) == wb)) flag(path.filename().string() + ": word is not the union of chars");
        }
        if (wordBoxes.empty() || !(hull(wordBoxes) == lb)) flag(path.filename().string() + ": line is not the union of words");
      }
      if ((cat == "Paragraph" || cat == "Title") && (lineBoxes.empty() || !(hull(lineBoxes) == cb)))
        flag(path.filename().string() + ": " + cat + " is not the union of its lines");
    }
  }
  std::ostringstream d;
  d << checked << " boxes, " << violations << " violations, batch " << batchSeconds << " s (limit " << kBatchSeconds << " s)";
  if (violations) d << "; first: " << first;
  return {violations == 0 && checked > 0 && batchSeconds < kBatchSeconds, d.str()};
}

// 3. Pixel ownership through a flat-colour shadow render.
Outcome pixel_ownership() {
  auto config = batch_config("unused", kShadowPages, 1);
  GlyphCache cache;
  std::size_t violations = 0, inked = 0, realStray = 0;
  for (int index = 0; index < kShadowPages; ++index) {
    const auto page = generate_page(make_job(config, static_cast<std::size_t>(index)), config, dt::assets(), cache);
    std::vector<Rgb> colors;
    for (std::size_t i = 0; i < page.components.size(); ++i)
      colors.push_back({static_cast<std::uint8_t>((i + 1) & 0xFF), static_cast<std::uint8_t>((i + 1) >> 8), 1});
    RenderOptions opts;
    opts.flatColors = colors;
    const auto shadow = render_page(page.job.spec, PageStyle{}, page.components, &dt::fonts(), &dt::pool(), cache, opts);
    for (int y = 0; y < shadow.height; ++y)
      for (int x = 0; x < shadow.width; ++x) {
        const Rgb p = shadow.at(x, y);
        const bool realInk = page.image.at(x, y) != Rgb{255, 255, 255};
        if (p == Rgb{255, 255, 255}) {
          // The real render may only leave the background where the shadow inks.
          realStray += realInk;
          continue;
        }
        ++inked;
        const std::size_t owner = p.r + (std::size_t{p.g} << 8);
        if (p.b != 1 || owner == 0 || owner > page.components.size() ||
            !dilate(page.components[owner - 1].bbox, 1).contains_point(x, y))
          ++violations;
      }
  }
  std::ostringstream d;
  d << kShadowPages << " pages, " << inked << " inked pixels, " << violations << " violating (limit "
    << kMaxOwnershipViolations << "), " << realStray << " real-render pixels outside shadow ink";
  return {violations <= kMaxOwnershipViolations && realStray == 0 && inked > 0, d.str()};
}

// 4. Font sizes and page dimensions.
Outcome parameter_conformance(const fs::path& dir) {
  std::size_t textComponents = 0, badSize = 0, pages = 0, badDim = 0;
  int lo = INT32_MAX, hi = 0;
  for (const auto& path : label_files(dir)) {
    const auto doc = nlohmann::json::parse(dt::read_file(path));
    ++pages;
    for (const char* k : {"width", "height"}) {
      const int v = doc[k].get<int>();
      badDim += v < kDimMin || v > kDimMax;
    }
    for (const auto& c : doc["components"]) {
      if (!c.contains("style")) continue;
      const int fs = c["style"]["font_size"].get<int>();
      ++textComponents;
      lo = std::min(lo, fs);
      hi = std::max(hi, fs);
      badSize += fs < kFontMin || fs > kFontMax;
    }
  }
  const auto coco = read_json(dir / "coco_component.json");
  for (const auto& im : coco.at("images").arr()) {
    const auto [w, h] = png_size(dir / im.at("file_name").str());
    badDim += w < kDimMin || w > kDimMax || h < kDimMin || h > kDimMax;
  }
  std::ostringstream d;
  d << textComponents << " text components, sizes in [" << lo << ", " << hi << "], " << badSize << " outside ["
    << kFontMin << ", " << kFontMax << "]; " << pages << " pages, " << badDim << " dimensions outside [" << kDimMin << ", "
    << kDimMax << "]";
  return {badSize == 0 && badDim == 0 && textComponents > 0 && pages == kBatchPages, d.str()};
}

// 5. Category and level coverage.
Outcome category_coverage(const fs::path& dir, const BatchStats& stats) {
  std::map<std::string, std::size_t> perCategory;
  std::map<std::string, std::array<std::size_t, 3>> subLevels;  // components with >=1 line/word/char
  std::size_t textKindsMissingLevels = 0;
  for (const auto& path : label_files(dir)) {
    const auto doc = nlohmann::json::parse(dt::read_file(path));
    for (const auto& c : doc["components"]) {
      const auto cat = c["category"].get<std::string>();
      ++perCategory[cat];
      if (cat != "Paragraph" && cat != "Title" && cat != "Table") continue;
      bool line = false, word = false, ch = false;
      for (const auto& l : c["lines"]) {
        line = true;
        for (const auto& w : l["words"]) {
          word = true;
          ch = ch || !w["chars"].empty();
        }
      }
      auto& s = subLevels[cat];
      s[0] += line;
      s[1] += word;
      s[2] += ch;
      textKindsMissingLevels += !(line && word && ch);
    }
  }
  bool ok = true;
  std::ostringstream d;
  for (auto k : kAllKinds) {
    const std::size_t n = perCategory[to_string(k)];
    ok = ok && n >= 1 && stats.counters.categoryCounts[static_cast<std::size_t>(k)] == n;
    d << to_string(k) << "=" << n << " ";
  }
  const auto coco = read_json(dir / "coco_component.json");
  std::set<std::string> cocoNames;
  for (const auto& c : coco.at("categories").arr()) cocoNames.insert(c.at("name").str());
  ok = ok && cocoNames == std::set<std::string>{"Title", "Paragraph", "Table", "Figure", "Formula"};
  for (auto level : kAllLevels) ok = ok && stats.annotationCounts[static_cast<std::size_t>(level)] > 0;
  ok = ok && textKindsMissingLevels == 0;
  d << "; Paragraph/Title/Table components lacking a level: " << textKindsMissingLevels;
  return {ok, d.str()};
}

// 6. Worker-count determinism.
Outcome determinism(const fs::path& dirA, const BatchStats& statsA, const fs::path& work) {
  const fs::path dirB = work / "determinism_w8";
  fs::remove_all(dirB);
  const auto config = batch_config(dirB, kBatchPages, kDeterminismWorkers);
  const auto statsB = run_batch(plan_jobs(config), config, dt::assets());
  std::size_t compared = 0, differing = 0;
  std::string first;
  std::vector<fs::path> files;
  for (auto level : kAllLevels) files.push_back(coco_file_name(level));
  for (const auto& p : label_files(dirA)) files.push_back(fs::path("labels") / p.filename());
  for (const auto& rel : files) {
    ++compared;
    if (dt::read_file(dirA / rel) != dt::read_file(dirB / rel)) {
      if (!differing) first = rel.string();
      ++differing;
    }
  }
  const bool pixelsSame = statsA.pixelHashes == statsB.pixelHashes && statsA.pixelHashes.size() == kBatchPages;
  std::ostringstream d;
  d << "workers 1 vs " << kDeterminismWorkers << ": " << compared << " label/COCO files compared, " << differing
    << " differ; pre-encoding pixel hashes " << (pixelsSame ? "identical" : "DIFFER") << " over " << statsA.pixelHashes.size()
    << " pages";
  if (differing) d << "; first: " << first;
  fs::remove_all(dirB);
  return {differing == 0 && pixelsSame && compared > 4, d.str()};
}

// 7. COCO format validity: library validator plus an independent reading.
Outcome format_validity(const fs::path& dir) {
  std::size_t libraryProblems = 0, schemaProblems = 0, annotations = 0;
  std::string first;
  auto problem = [&](const std::string& what) {
    if (!schemaProblems) first = what;
    ++schemaProblems;
  };
  std::map<std::string, std::set<long>> idsByLevel;
  std::map<std::string, std::map<long, long>> parentsByLevel;
  std::set<long> imageIds0;
  for (auto level : kAllLevels) {
    const auto name = coco_file_name(level);
    libraryProblems += validate_annotations(load_coco(dir / name)).size();

    const auto doc = read_json(dir / name);
    for (const char* k : {"images", "annotations", "categories"})
      if (!doc.has(k) || !doc.at(k).is_arr()) problem(name + ": missing array " + k);
    if (schemaProblems) continue;
    std::map<long, std::pair<long, long>> images;
    for (const auto& im : doc.at("images").arr()) {
      if (!im.has("id") || !is_int(im.at("id")) || !im.has("file_name") || !im.at("file_name").is_str() ||
          !im.has("width") || !is_int(im.at("width")) || !im.has("height") || !is_int(im.at("height"))) {
        problem(name + ": malformed image entry");
        continue;
      }
      const long id = static_cast<long>(im.at("id").num());
      images[id] = {static_cast<long>(im.at("width").num()), static_cast<long>(im.at("height").num())};
      if (level == AnnotationLevel::Component) {
        imageIds0.insert(id);
        const auto [w, h] = png_size(dir / im.at("file_name").str());
        if (w != images[id].first || h != images[id].second) problem(name + ": image size differs from file");
      } else if (!imageIds0.count(id)) {
        problem(name + ": image not in component file");
      }
    }
    std::set<long> cats;
    for (const auto& c : doc.at("categories").arr()) {
      if (!c.has("id") || !is_int(c.at("id")) || !c.has("name") || !c.at("name").is_str()) problem(name + ": bad category");
      else cats.insert(static_cast<long>(c.at("id").num()));
    }
    auto& ids = idsByLevel[to_string(level)];
    auto& parents = parentsByLevel[to_string(level)];
    for (const auto& a : doc.at("annotations").arr()) {
      ++annotations;
      bool shaped = a.is_obj();
      for (const char* k : {"id", "image_id", "category_id", "area", "iscrowd"}) shaped = shaped && a.has(k) && is_int(a.at(k));
      shaped = shaped && a.has("bbox") && a.at("bbox").is_arr() && a.at("bbox").arr().size() == 4;
      if (!shaped) {
        problem(name + ": malformed annotation");
        continue;
      }
      for (const auto& v : a.at("bbox").arr())
        if (!is_int(v)) problem(name + ": non-integer bbox");
      const long id = static_cast<long>(a.at("id").num());
      if (!ids.insert(id).second) problem(name + ": duplicate id");
      const auto b = rect_of(a.at("bbox"));
      const auto im = images.find(static_cast<long>(a.at("image_id").num()));
      if (im == images.end()) problem(name + ": unknown image_id");
      else if (!Rectangle{0, 0, im->second.first, im->second.second}.contains(b) || b.w <= 0 || b.h <= 0)
        problem(name + ": bbox outside image");
      if (static_cast<long>(a.at("area").num()) != b.w * b.h) problem(name + ": area != w*h");
      if (a.at("iscrowd").num() != 0) problem(name + ": iscrowd != 0");
      if (!cats.count(static_cast<long>(a.at("category_id").num()))) problem(name + ": unknown category_id");
      if (level != AnnotationLevel::Component) {
        if (!a.has("parent_id") || !is_int(a.at("parent_id"))) problem(name + ": missing parent_id");
        else parents[id] = static_cast<long>(a.at("parent_id").num());
      }
    }
  }
  for (std::size_t li = 1; li < kAllLevels.size(); ++li) {
    const auto& parentIds = idsByLevel[to_string(kAllLevels[li - 1])];
    for (const auto& [id, parent] : parentsByLevel[to_string(kAllLevels[li])])
      if (!parentIds.count(parent)) problem(std::string(to_string(kAllLevels[li])) + ": dangling parent_id");
  }
  std::ostringstream d;
  d << annotations << " annotations in 4 files; validate_annotations: " << libraryProblems
    << " problems; independent reader: " << schemaProblems << " problems";
  if (schemaProblems) d << "; first: " << first;
  return {libraryProblems == 0 && schemaProblems == 0 && annotations > 0, d.str()};
}

// 8. Scale sanity.
Outcome scale_sanity(const fs::path& work, int pages, bool keep) {
  const fs::path dir = work / "scale";
  fs::remove_all(dir);
  auto config = batch_config(dir, pages, GenerationConfig{}.workers);
  BatchStats stats;
  try {
    stats = run_batch(plan_jobs(config), config, dt::assets());
  } catch (const std::exception& e) {
    return {false, std::string("batch failed: ") + e.what()};
  }
  const double eta = stats.extrapolate_seconds(kDatasetPages);
  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(2);
  d << stats.pagesDone << " pages in " << stats.wallSeconds << " s with " << config.workers << " worker(s), "
    << stats.pagesPerSecond << " pages/s; extrapolated 320,000 pages: " << eta << " s (" << eta / 3600.0 << " h)";
  if (!keep) fs::remove_all(dir);
  return {stats.pagesDone == static_cast<std::size_t>(pages) && stats.pagesFailed == 0 && stats.pagesPerSecond > 0.0 &&
              eta > 0.0,
          d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "docsynth_acceptance";
  int scalePages = kScalePages;
  bool keep = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--scale-pages" && i + 1 < argc) {
      scalePages = std::stoi(argv[++i]);
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string t; std::getline(ss, t, ',');) only.insert(std::stoi(t));
    } else if (a == "--keep") {
      keep = true;
    } else {
      std::fprintf(stderr, "usage: acceptance [--work-dir DIR] [--scale-pages N] [--only N,...] [--keep]\n");
      return 2;
    }
  }
  fs::create_directories(work);
  auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  std::map<int, Outcome> results;
  auto run = [&](int n, const char* name, const std::function<Outcome()>& f) {
    if (!wanted(n)) return;
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results[n] = o;
    std::printf("criterion %d %s: %s: %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };

  run(1, "layout correctness", layout_correctness);

  const fs::path batchDir = work / "batch_w1";
  BatchStats batchStats;
  double batchSeconds = 0.0;
  std::string batchError;
  if (wanted(2) || wanted(4) || wanted(5) || wanted(6) || wanted(7)) {
    fs::remove_all(batchDir);
    const auto config = batch_config(batchDir, kBatchPages, 1);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      batchStats = run_batch(plan_jobs(config), config, dt::assets());
    } catch (const std::exception& e) {
      batchError = e.what();
    }
    batchSeconds = seconds_since(t0);
  }
  auto needs_batch = [&](const std::function<Outcome()>& f) {
    return [&, f] { return batchError.empty() ? f() : Outcome{false, "200-page batch failed: " + batchError}; };
  };

  run(2, "containment chain", needs_batch([&] { return containment_chain(batchDir, batchSeconds); }));
  run(3, "pixel ownership", pixel_ownership);
  run(4, "parameter conformance", needs_batch([&] { return parameter_conformance(batchDir); }));
  run(5, "category coverage", needs_batch([&] { return category_coverage(batchDir, batchStats); }));
  run(6, "determinism", needs_batch([&] { return determinism(batchDir, batchStats, work); }));
  run(7, "format validity", needs_batch([&] { return format_validity(batchDir); }));
  run(8, "scale sanity", [&] { return scale_sanity(work, scalePages, keep); });

  if (!keep) fs::remove_all(batchDir);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& kv) { return !kv.second.pass; });
  std::printf("%zu/%zu criteria passed\n", results.size() - static_cast<std::size_t>(failed), results.size());
  return failed ? 1 : 0;
}
