#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "components.hpp"
#include "layout.hpp"
#include "records.hpp"

namespace docsynth {

using ojson = nlohmann::ordered_json;

/// Annotation ids are imageId * kIdStride + (1-based position within the
/// page), which keeps them unique per batch and independent of scheduling.
inline constexpr std::int64_t kIdStride = 10'000'000;

class WriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ojson to_json(const Rect& r) { return ojson::array({r.x, r.y, r.w, r.h}); }

template <typename Json>
Rect rect_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("bbox must be [x, y, w, h]");
  return {j[0].template get<int>(), j[1].template get<int>(), j[2].template get<int>(), j[3].template get<int>()};
}

/// Flat records for one page in reading order: each component followed by
/// its lines, each line by its words, each word by its characters.
/// Figure and Formula contribute a component record only.
inline std::vector<AnnotationRecord> collect_records(std::int64_t imageId, std::span<const ComponentInstance> components) {
  std::vector<AnnotationRecord> out;
  std::int64_t local = 0;
  auto next_id = [&] { return imageId * kIdStride + ++local; };
  for (const auto& c : components) {
    AnnotationRecord comp{next_id(), imageId, AnnotationLevel::Component, to_string(c.kind), c.bbox, {}, {}};
    if (!c.text.empty()) comp.text = c.text;
    out.push_back(comp);
    if (!has_text_levels(c.kind)) continue;
    for (const auto& line : c.lines) {
      AnnotationRecord lr{next_id(), imageId, AnnotationLevel::Line, "line", line.bbox, line.text(), comp.id};
      out.push_back(lr);
      for (const auto& word : line.words) {
        AnnotationRecord wr{next_id(), imageId, AnnotationLevel::Word, "word", word.bbox, word.text, lr.id};
        out.push_back(wr);
        for (const auto& ch : word.chars)
          out.push_back({next_id(), imageId, AnnotationLevel::Character, "character", ch.bbox, utf8::encode(ch.codepoint), wr.id});
      }
    }
  }
  return out;
}

inline ojson layout_to_json(const RegionNode& node) {
  ojson j;
  j["rect"] = to_json(node.rect);
  if (node.split) j["split"] = to_string(*node.split);
  if (!node.children.empty()) {
    j["children"] = ojson::array();
    for (const auto& c : node.children) j["children"].push_back(layout_to_json(c));
  }
  return j;
}

template <typename Json>
RegionNode layout_node_from_json(const Json& j) {
  RegionNode n;
  n.rect = rect_from_json(j.at("rect"));
  if (j.contains("split")) n.split = j.at("split").template get<std::string>() == "Horizontal" ? SplitAxis::Horizontal : SplitAxis::Vertical;
  if (j.contains("children"))
    for (const auto& c : j.at("children")) n.children.push_back(layout_node_from_json(c));
  return n;
}

struct PageInfo {
  std::int64_t imageId = 0;
  std::string fileName;
  int width = 0;
  int height = 0;
};

/// Per-page hierarchical label document:
/// page -> components -> lines -> words -> characters.
inline ojson emit_hierarchy(const PageInfo& page, std::span<const ComponentInstance> components,
                            const LayoutTree* layout = nullptr, const PageSpec* spec = nullptr) {
  const auto records = collect_records(page.imageId, components);
  ojson doc;
  doc["image_id"] = page.imageId;
  doc["file_name"] = page.fileName;
  doc["width"] = page.width;
  doc["height"] = page.height;
  if (layout && spec) {
    ojson l;
    l["mode"] = to_string(layout->mode);
    l["seed"] = layout->seed;
    l["margin"] = spec->margin;
    l["gutter"] = spec->gutter;
    l["root"] = layout_to_json(layout->root);
    doc["layout"] = std::move(l);
  }
  doc["components"] = ojson::array();
  std::size_t r = 0;
  for (const auto& c : components) {
    const auto& rec = records[r++];
    ojson cj;
    cj["id"] = rec.id;
    cj["category"] = rec.categoryName;
    cj["bbox"] = to_json(rec.bbox);
    cj["region"] = to_json(c.region);
    if (rec.text) cj["text"] = *rec.text;
    if (c.kind != ComponentKind::Figure) {
      cj["style"] = {{"font", c.style.fontFamily},
                     {"font_size", c.style.fontSize},
                     {"color", {c.style.color.r, c.style.color.g, c.style.color.b}}};
    }
    if (c.table) cj["table"] = {{"rows", c.table->rows}, {"cols", c.table->cols}};
    cj["lines"] = ojson::array();
    if (has_text_levels(c.kind)) {
      for (const auto& line : c.lines) {
        const auto& lr = records[r++];
        ojson lj{{"id", lr.id}, {"bbox", to_json(lr.bbox)}, {"baseline", line.baseline}, {"text", *lr.text}};
        lj["words"] = ojson::array();
        for (const auto& word : line.words) {
          const auto& wr = records[r++];
          ojson wj{{"id", wr.id}, {"bbox", to_json(wr.bbox)}, {"text", *wr.text}};
          wj["chars"] = ojson::array();
          for (std::size_t k = 0; k < word.chars.size(); ++k) {
            const auto& cr = records[r++];
            wj["chars"].push_back({{"id", cr.id}, {"bbox", to_json(cr.bbox)}, {"text", *cr.text}});
          }
          lj["words"].push_back(std::move(wj));
        }
        cj["lines"].push_back(std::move(lj));
      }
    }
    doc["components"].push_back(std::move(cj));
  }
  return doc;
}

/// Flattens a hierarchy document back into records, in the same order as
/// collect_records.
template <typename Json>
std::vector<AnnotationRecord> hierarchy_to_records(const Json& doc) {
  std::vector<AnnotationRecord> out;
  const std::int64_t imageId = doc.at("image_id").template get<std::int64_t>();
  auto text_of = [](const Json& j) -> std::optional<std::string> {
    if (j.contains("text")) return j.at("text").template get<std::string>();
    return std::nullopt;
  };
  for (const auto& cj : doc.at("components")) {
    const auto cid = cj.at("id").template get<std::int64_t>();
    out.push_back({cid, imageId, AnnotationLevel::Component, cj.at("category").template get<std::string>(),
                   rect_from_json(cj.at("bbox")), text_of(cj), std::nullopt});
    for (const auto& lj : cj.at("lines")) {
      const auto lid = lj.at("id").template get<std::int64_t>();
      out.push_back({lid, imageId, AnnotationLevel::Line, "line", rect_from_json(lj.at("bbox")), text_of(lj), cid});
      for (const auto& wj : lj.at("words")) {
        const auto wid = wj.at("id").template get<std::int64_t>();
        out.push_back({wid, imageId, AnnotationLevel::Word, "word", rect_from_json(wj.at("bbox")), text_of(wj), lid});
        for (const auto& chj : wj.at("chars"))
          out.push_back({chj.at("id").template get<std::int64_t>(), imageId, AnnotationLevel::Character, "character",
                         rect_from_json(chj.at("bbox")), text_of(chj), wid});
      }
    }
  }
  return out;
}

/// Checks the containment chain (char in word in line in component in
/// region), the union equalities and the per-kind level policy of one
/// hierarchy document. Empty result iff consistent.
template <typename Json>
std::vector<std::string> validate_hierarchy(const Json& doc) {
  std::vector<std::string> errs;
  const Rect image{0, 0, doc.at("width").template get<int>(), doc.at("height").template get<int>()};
  auto fail = [&](std::int64_t id, const std::string& what) { errs.push_back("id " + std::to_string(id) + ": " + what); };
  for (const auto& cj : doc.at("components")) {
    const auto cid = cj.at("id").template get<std::int64_t>();
    const Rect cb = rect_from_json(cj.at("bbox"));
    const Rect region = rect_from_json(cj.at("region"));
    const auto kind = kind_from_string(cj.at("category").template get<std::string>());
    if (!kind) fail(cid, "unknown category");
    if (cb.empty()) fail(cid, "empty component bbox");
    if (!region.contains(cb)) fail(cid, "component bbox outside its region");
    if (!image.contains(cb)) fail(cid, "component bbox outside image");
    const auto& lines = cj.at("lines");
    if (kind && !has_text_levels(*kind) && !lines.empty()) fail(cid, "sub-level annotations on a component-only kind");
    std::optional<Rect> linesUnion;
    for (const auto& lj : lines) {
      const auto lid = lj.at("id").template get<std::int64_t>();
      const Rect lb = rect_from_json(lj.at("bbox"));
      if (!cb.contains(lb)) fail(lid, "line outside component");
      linesUnion = linesUnion ? union_of(*linesUnion, lb) : lb;
      std::optional<Rect> wordsUnion;
      int prevRight = INT32_MIN;
      for (const auto& wj : lj.at("words")) {
        const auto wid = wj.at("id").template get<std::int64_t>();
        const Rect wb = rect_from_json(wj.at("bbox"));
        if (!lb.contains(wb)) fail(wid, "word outside line");
        if (wb.x < prevRight) fail(wid, "word overlaps its left neighbour");
        prevRight = wb.right();
        wordsUnion = wordsUnion ? union_of(*wordsUnion, wb) : wb;
        std::optional<Rect> charsUnion;
        for (const auto& chj : wj.at("chars")) {
          const Rect chb = rect_from_json(chj.at("bbox"));
          if (chb.empty()) fail(chj.at("id").template get<std::int64_t>(), "empty char bbox");
          if (!wb.contains(chb)) fail(chj.at("id").template get<std::int64_t>(), "char outside word");
          charsUnion = charsUnion ? union_of(*charsUnion, chb) : chb;
        }
        if (!charsUnion || *charsUnion != wb) fail(wid, "word bbox is not the union of its chars");
      }
      if (!wordsUnion || *wordsUnion != lb) fail(lid, "line bbox is not the union of its words");
    }
    if (kind && (*kind == ComponentKind::Paragraph || *kind == ComponentKind::Title) && (!linesUnion || *linesUnion != cb))
      fail(cid, "component bbox is not the union of its lines");
  }
  return errs;
}

/// COCO detection document restricted to one annotation level.
struct CocoDocument {
  struct Image {
    std::int64_t id = 0;
    std::string fileName;
    int width = 0;
    int height = 0;
  };
  struct Category {
    int id = 0;
    std::string name;
  };
  struct Annotation {
    std::int64_t id = 0;
    std::int64_t imageId = 0;
    int categoryId = 0;
    Rect bbox;
    std::int64_t area = 0;
    int iscrowd = 0;
    std::optional<std::int64_t> parentId;
    std::optional<std::string> text;
  };
  AnnotationLevel level = AnnotationLevel::Component;
  std::vector<Image> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;
};

inline std::vector<CocoDocument::Category> coco_categories(AnnotationLevel level) {
  std::vector<CocoDocument::Category> out;
  if (level == AnnotationLevel::Component) {
    for (auto k : kAllKinds) out.push_back({category_id(k), to_string(k)});
  } else {
    out.push_back({1, to_string(level)});
  }
  return out;
}

inline int coco_category_id(AnnotationLevel level, const std::string& name) {
  if (level != AnnotationLevel::Component) return 1;
  auto k = kind_from_string(name);
  if (!k) throw std::invalid_argument("unknown category " + name);
  return category_id(*k);
}

inline ojson coco_annotation_json(const AnnotationRecord& r) {
  ojson j;
  j["id"] = r.id;
  j["image_id"] = r.imageId;
  j["category_id"] = coco_category_id(r.level, r.categoryName);
  j["bbox"] = to_json(r.bbox);
  j["area"] = r.bbox.area();
  j["iscrowd"] = 0;
  j["level"] = to_string(r.level);
  if (r.parentId) j["parent_id"] = *r.parentId;
  if (r.text) j["text"] = *r.text;
  return j;
}

inline ojson coco_image_json(const PageInfo& p) {
  return ojson{{"id", p.imageId}, {"file_name", p.fileName}, {"width", p.width}, {"height", p.height}};
}

inline std::string coco_file_name(AnnotationLevel level) { return std::string("coco_") + to_string(level) + ".json"; }

/// Streams one COCO file: categories first, annotations page by page, the
/// image table last. One annotation per line. Callers must append pages in
/// image-id order to get reproducible bytes.
class CocoStreamWriter {
 public:
  CocoStreamWriter(const std::filesystem::path& path, AnnotationLevel level) : level_(level), path_(path) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw WriteError("cannot open " + path.string());
    ojson cats = ojson::array();
    for (const auto& c : coco_categories(level)) cats.push_back({{"id", c.id}, {"name", c.name}, {"supercategory", "document"}});
    out_ << "{\"info\":{\"description\":\"synthetic document images\",\"annotation_level\":\"" << to_string(level)
         << "\"},\n\"categories\":" << cats.dump() << ",\n\"annotations\":[";
  }

  void add_page(const PageInfo& page, std::span<const AnnotationRecord> records) {
    images_.push_back(page);
    for (const auto& r : records) {
      if (r.level != level_) continue;
      out_ << (first_ ? "\n" : ",\n") << coco_annotation_json(r).dump();
      first_ = false;
      ++count_;
    }
  }

  void finish() {
    out_ << (first_ ? "" : "\n") << "],\n\"images\":[";
    for (std::size_t i = 0; i < images_.size(); ++i) out_ << (i ? ",\n" : "\n") << coco_image_json(images_[i]).dump();
    out_ << (images_.empty() ? "" : "\n") << "]}\n";
    out_.close();
    if (!out_) throw WriteError("write failed: " + path_.string());
  }

  std::size_t annotation_count() const { return count_; }

 private:
  AnnotationLevel level_;
  std::filesystem::path path_;
  std::ofstream out_;
  std::vector<PageInfo> images_;
  bool first_ = true;
  std::size_t count_ = 0;
};

struct PageAnnotations {
  PageInfo page;
  std::vector<AnnotationRecord> records;
};

/// Writes the COCO file of one level for a whole batch.
inline void emit_coco(std::span<const PageAnnotations> batch, AnnotationLevel level, const std::filesystem::path& outPath) {
  CocoStreamWriter w(outPath, level);
  for (const auto& p : batch) w.add_page(p.page, p.records);
  w.finish();
}

namespace detail {

inline CocoDocument::Image coco_image_from_json(const nlohmann::json& im) {
  return {im.at("id").get<std::int64_t>(), im.at("file_name").get<std::string>(), im.at("width").get<int>(),
          im.at("height").get<int>()};
}

inline CocoDocument::Annotation coco_annotation_from_json(const nlohmann::json& a) {
  CocoDocument::Annotation an;
  an.id = a.at("id").get<std::int64_t>();
  an.imageId = a.at("image_id").get<std::int64_t>();
  an.categoryId = a.at("category_id").get<int>();
  an.bbox = rect_from_json(a.at("bbox"));
  an.area = a.at("area").get<std::int64_t>();
  an.iscrowd = a.value("iscrowd", 0);
  if (a.contains("parent_id")) an.parentId = a["parent_id"].get<std::int64_t>();
  if (a.contains("text")) an.text = a["text"].get<std::string>();
  return an;
}

}  // namespace detail

inline CocoDocument coco_from_json(const nlohmann::json& j) {
  CocoDocument doc;
  if (j.contains("info") && j["info"].contains("annotation_level"))
    if (auto l = level_from_string(j["info"]["annotation_level"].get<std::string>())) doc.level = *l;
  for (const auto& im : j.at("images")) doc.images.push_back(detail::coco_image_from_json(im));
  for (const auto& c : j.at("categories")) doc.categories.push_back({c.at("id").get<int>(), c.at("name").get<std::string>()});
  for (const auto& a : j.at("annotations")) doc.annotations.push_back(detail::coco_annotation_from_json(a));
  return doc;
}

/// Reads a COCO file element by element, so memory stays proportional to
/// the decoded records rather than to a full JSON tree.
inline CocoDocument load_coco(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CocoDocument doc;
  std::string section;
  using Event = nlohmann::json::parse_event_t;
  const auto rest = nlohmann::json::parse(in, [&](int depth, Event ev, nlohmann::json& parsed) {
    if (ev == Event::key && depth == 1) {
      section = parsed.get<std::string>();
    } else if (ev == Event::object_end && depth == 2) {
      if (section == "annotations") {
        doc.annotations.push_back(detail::coco_annotation_from_json(parsed));
        return false;
      }
      if (section == "images") {
        doc.images.push_back(detail::coco_image_from_json(parsed));
        return false;
      }
      if (section == "categories") {
        doc.categories.push_back({parsed.at("id").get<int>(), parsed.at("name").get<std::string>()});
        return false;
      }
    } else if (ev == Event::object_end && depth == 1 && section == "info") {
      if (parsed.contains("annotation_level"))
        if (auto l = level_from_string(parsed["annotation_level"].get<std::string>())) doc.level = *l;
    }
    return true;
  });
  (void)rest;
  return doc;
}

/// Id uniqueness, referential integrity, bbox bounds and areas. Empty iff valid.
inline std::vector<std::string> validate_annotations(const CocoDocument& doc) {
  std::vector<std::string> report;
  std::map<std::int64_t, const CocoDocument::Image*> images;
  for (const auto& im : doc.images) {
    if (!images.emplace(im.id, &im).second) report.push_back("duplicate image id " + std::to_string(im.id));
    if (im.width <= 0 || im.height <= 0) report.push_back("image " + std::to_string(im.id) + " has non-positive size");
  }
  std::set<int> cats;
  for (const auto& c : doc.categories)
    if (!cats.insert(c.id).second) report.push_back("duplicate category id " + std::to_string(c.id));
  std::set<std::int64_t> ids;
  for (const auto& a : doc.annotations) {
    const auto tag = "annotation " + std::to_string(a.id);
    if (!ids.insert(a.id).second) report.push_back("duplicate annotation id " + std::to_string(a.id));
    if (!cats.count(a.categoryId)) report.push_back(tag + ": unknown category_id " + std::to_string(a.categoryId));
    auto im = images.find(a.imageId);
    if (im == images.end()) {
      report.push_back(tag + ": unknown image_id " + std::to_string(a.imageId));
    } else if (!Rect{0, 0, im->second->width, im->second->height}.contains(a.bbox)) {
      report.push_back(tag + ": bbox outside image");
    }
    if (a.bbox.w <= 0 || a.bbox.h <= 0) report.push_back(tag + ": non-positive bbox size");
    if (a.area != a.bbox.area()) report.push_back(tag + ": area differs from w*h");
    if (a.area <= 0) report.push_back(tag + ": non-positive area");
    if (a.iscrowd != 0) report.push_back(tag + ": iscrowd must be 0");
    if ((doc.level == AnnotationLevel::Component) == a.parentId.has_value())
      report.push_back(tag + (a.parentId ? ": component annotation with parent" : ": missing parent_id"));
  }
  return report;
}

/// Compact, stable serialization used for every JSON file written.
inline std::string serialize(const ojson& j) { return j.dump() + "\n"; }

inline void write_text_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot open " + path.string());
  out << bytes;
  out.close();
  if (!out) throw WriteError("write failed: " + path.string());
}

}  // namespace docsynth
