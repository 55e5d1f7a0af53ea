#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "annotations.hpp"
#include "layout.hpp"

namespace docsynth {

struct DirectoryReport {
  std::vector<std::string> errors;
  std::size_t pagesChecked = 0;
  std::array<std::size_t, 4> annotationsChecked{};

  bool ok() const { return errors.empty(); }
};

namespace detail {

inline LayoutTree layout_from_hierarchy(const nlohmann::json& layout) {
  LayoutTree t;
  t.mode = layout.at("mode").get<std::string>() == "FixedColumn" ? LayoutMode::FixedColumn : LayoutMode::Flexible;
  t.seed = layout.at("seed").get<std::uint64_t>();
  t.root = layout_node_from_json(layout.at("root"));
  return t;
}

inline bool same_record(const AnnotationRecord& r, const CocoDocument::Annotation& a) {
  return r.imageId == a.imageId && r.bbox == a.bbox && r.parentId == a.parentId && r.text == a.text &&
         coco_category_id(r.level, r.categoryName) == a.categoryId;
}

}  // namespace detail

/// Validates a generated output directory: every COCO file on its own,
/// parent links across levels, every label file's containment chain and
/// layout tree, and agreement between the label files and the COCO files.
inline DirectoryReport validate_output_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  DirectoryReport report;
  auto err = [&](const std::string& e) { report.errors.push_back(e); };

  std::array<CocoDocument, 4> docs;
  std::array<std::unordered_map<std::int64_t, std::size_t>, 4> byId;
  for (auto level : kAllLevels) {
    const auto li = static_cast<std::size_t>(level);
    const auto path = dir / coco_file_name(level);
    try {
      docs[li] = load_coco(path);
    } catch (const std::exception& e) {
      err(path.filename().string() + ": " + e.what());
      continue;
    }
    for (const auto& e : validate_annotations(docs[li])) err(path.filename().string() + ": " + e);
    for (std::size_t k = 0; k < docs[li].annotations.size(); ++k) byId[li].emplace(docs[li].annotations[k].id, k);
    report.annotationsChecked[li] = docs[li].annotations.size();
  }

  for (std::size_t li = 1; li < 4; ++li) {
    for (const auto& a : docs[li].annotations)
      if (a.parentId && !byId[li - 1].count(*a.parentId))
        err(coco_file_name(kAllLevels[li]) + ": annotation " + std::to_string(a.id) + " has a dangling parent_id");
    if (docs[li].images.size() != docs[0].images.size())
      err(coco_file_name(kAllLevels[li]) + ": image table differs from " + coco_file_name(AnnotationLevel::Component));
  }

  std::vector<fs::path> labels;
  if (fs::is_directory(dir / "labels"))
    for (const auto& e : fs::directory_iterator(dir / "labels"))
      if (e.path().extension() == ".json") labels.push_back(e.path());
  std::sort(labels.begin(), labels.end());
  if (labels.size() != docs[0].images.size())
    err("labels/: " + std::to_string(labels.size()) + " label files for " + std::to_string(docs[0].images.size()) + " images");

  std::array<std::size_t, 4> flattened{};
  for (const auto& path : labels) {
    const auto name = "labels/" + path.filename().string();
    nlohmann::json doc;
    try {
      std::ifstream in(path, std::ios::binary);
      doc = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      err(name + ": " + e.what());
      continue;
    }
    ++report.pagesChecked;
    for (const auto& e : validate_hierarchy(doc)) err(name + ": " + e);
    if (doc.contains("layout")) {
      const auto& l = doc["layout"];
      PageSpec spec{doc.at("width").get<int>(), doc.at("height").get<int>(), l.at("margin").get<int>(), l.at("gutter").get<int>()};
      const auto tree = detail::layout_from_hierarchy(l);
      for (const auto& v : validate_layout(tree, spec)) err(name + ": layout " + v.path + ": " + v.message);
      const auto leaves = leaf_regions(tree);
      const auto& comps = doc.at("components");
      if (comps.size() != leaves.size()) {
        err(name + ": " + std::to_string(comps.size()) + " components for " + std::to_string(leaves.size()) + " leaf regions");
      } else {
        for (std::size_t i = 0; i < leaves.size(); ++i)
          if (rect_from_json(comps[i].at("region")) != leaves[i]) err(name + ": component " + std::to_string(i) + " region is not its leaf");
      }
    }
    for (const auto& r : hierarchy_to_records(doc)) {
      const auto li = static_cast<std::size_t>(r.level);
      ++flattened[li];
      auto it = byId[li].find(r.id);
      if (it == byId[li].end()) {
        err(name + ": record " + std::to_string(r.id) + " missing from " + coco_file_name(r.level));
      } else if (!detail::same_record(r, docs[li].annotations[it->second])) {
        err(name + ": record " + std::to_string(r.id) + " differs from " + coco_file_name(r.level));
      }
    }
  }
  for (auto level : kAllLevels) {
    const auto li = static_cast<std::size_t>(level);
    if (flattened[li] != docs[li].annotations.size())
      err(coco_file_name(level) + ": " + std::to_string(docs[li].annotations.size()) + " annotations but label files hold " +
          std::to_string(flattened[li]));
  }
  return report;
}

}  // namespace docsynth
