#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "annotations.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "filler.hpp"
#include "fonts.hpp"
#include "image_pool.hpp"
#include "layout.hpp"
#include "render.hpp"

namespace docsynth {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Job {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  PageSpec spec;
  LayoutMode mode = LayoutMode::Flexible;
};

struct JobPlan {
  std::vector<Job> jobs;
};

/// Job `index` of a plan. Depends only on (config, index), so plans are
/// prefix-stable when `count` grows.
inline Job make_job(const GenerationConfig& config, std::size_t index) {
  Job job;
  job.index = index;
  job.seed = derive_seed(config.masterSeed, index);
  Rng rng(job.seed);
  job.spec.width = rng.uniform_int(config.pageWidthRange.first, config.pageWidthRange.second);
  job.spec.height = rng.uniform_int(config.pageHeightRange.first, config.pageHeightRange.second);
  job.spec.margin = config.margin;
  job.spec.gutter = config.gutter;
  const bool fixed = rng.bernoulli(config.mixedRatio);
  switch (config.mode) {
    case ModeChoice::FixedColumn: job.mode = LayoutMode::FixedColumn; break;
    case ModeChoice::Flexible: job.mode = LayoutMode::Flexible; break;
    case ModeChoice::Mixed: job.mode = fixed ? LayoutMode::FixedColumn : LayoutMode::Flexible; break;
  }
  return job;
}

inline JobPlan plan_jobs(const GenerationConfig& config) {
  validate_config(config);
  JobPlan plan;
  plan.jobs.reserve(static_cast<std::size_t>(config.count));
  for (int i = 0; i < config.count; ++i) plan.jobs.push_back(make_job(config, static_cast<std::size_t>(i)));
  return plan;
}

/// Immutable inputs shared by all workers.
struct Assets {
  TextCorpus corpus;
  FontSet fonts;
  ImagePool pool;
};

inline Assets load_assets(const GenerationConfig& config) {
  Assets a;
  if (config.paths.corpus.empty()) throw CorpusError({}, 0, "paths.corpus is not set");
  if (config.paths.fonts.empty()) throw FontError("paths.fonts is not set");
  a.corpus = load_corpus(config.paths.corpus);
  a.fonts = load_fonts(config.paths.fonts);
  if (!config.paths.imagePool.empty()) a.pool = load_image_pool(config.paths.imagePool);
  if (a.pool.empty() && config.componentMix[static_cast<std::size_t>(ComponentKind::Figure)] > 0.0)
    throw ImageIoError("componentMix draws Figure but the image pool is empty");
  return a;
}

struct PageCounters {
  std::array<std::size_t, 5> categoryCounts{};
  std::size_t leafRegions = 0;
  std::size_t truncatedWords = 0;
  std::size_t fallbackGlyphs = 0;
  std::size_t missingGlyphs = 0;
  std::size_t kindFallbacks = 0;

  void add(const PageCounters& o) {
    for (std::size_t i = 0; i < categoryCounts.size(); ++i) categoryCounts[i] += o.categoryCounts[i];
    leafRegions += o.leafRegions;
    truncatedWords += o.truncatedWords;
    fallbackGlyphs += o.fallbackGlyphs;
    missingGlyphs += o.missingGlyphs;
    kindFallbacks += o.kindFallbacks;
  }
};

struct PageResult {
  Job job;
  LayoutTree layout;
  std::vector<ComponentInstance> components;
  RasterImage image;
  PageCounters counters;
};

inline ComponentInstance fill_component(ComponentKind kind, const Rect& region, const GenerationConfig& config,
                                        const Assets& assets, FillContext& ctx, Rng& rng) {
  switch (kind) {
    case ComponentKind::Title: return fill_title(region, assets.corpus, ctx, rng);
    case ComponentKind::Paragraph: return fill_paragraph(region, assets.corpus, ctx, rng);
    case ComponentKind::Table: return fill_table(region, assets.corpus, ctx, rng);
    case ComponentKind::Figure: return fill_figure(region, assets.pool, rng);
    case ComponentKind::Formula: return fill_formula(region, config.formula, ctx, rng);
  }
  throw std::logic_error("unknown component kind");
}

inline PageStyle page_style(const GenerationConfig& config) {
  PageStyle s;
  s.encoding = config.encoding;
  return s;
}

/// Layout, kind assignment, filling and rendering of one page. A pure
/// function of (job, config, assets); the glyph cache only saves work.
inline PageResult generate_page(const Job& job, const GenerationConfig& config, const Assets& assets, GlyphCache& cache) {
  PageResult page;
  page.job = job;
  const Rng root(job.seed);
  Rng layoutRng = root.fork(1);
  page.layout = job.mode == LayoutMode::FixedColumn
                    ? generate_fixed_column_layout(job.spec, config.fixedColumnParams, layoutRng)
                    : generate_flexible_layout(job.spec, config.flexibleParams, layoutRng);
  const auto leaves = leaf_regions(page.layout);
  page.counters.leafRegions = leaves.size();

  Rng kindRng = root.fork(2);
  const auto kinds = assign_component_kinds(leaves, config.componentMix, kindRng, config.kinds);

  FillContext ctx{assets.fonts, cache, config.text};
  page.components.reserve(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto& [region, kind] = kinds[i];
    std::vector<ComponentKind> chain{kind};
    for (auto k : {ComponentKind::Paragraph, ComponentKind::Formula, ComponentKind::Figure}) {
      if (k == ComponentKind::Figure && assets.pool.empty()) continue;
      if (std::find(chain.begin(), chain.end(), k) == chain.end()) chain.push_back(k);
    }
    std::optional<ComponentInstance> filled;
    for (std::size_t attempt = 0; attempt < chain.size() && !filled; ++attempt) {
      Rng fillRng = root.fork(1000 + i * 16 + attempt);
      try {
        filled = fill_component(chain[attempt], region, config, assets, ctx, fillRng);
        if (attempt) ++page.counters.kindFallbacks;
      } catch (const RegionTooSmall&) {
      }
    }
    if (!filled)
      throw GenerationError("page " + std::to_string(job.index) + ": no component kind fits region " +
                            std::to_string(region.w) + "x" + std::to_string(region.h));
    ++page.counters.categoryCounts[static_cast<std::size_t>(filled->kind)];
    page.counters.truncatedWords += filled->stats.truncatedWords;
    page.counters.fallbackGlyphs += filled->stats.fallbackGlyphs;
    page.counters.missingGlyphs += filled->stats.missingGlyphs;
    page.components.push_back(std::move(*filled));
  }
  page.image = render_page(job.spec, page_style(config), page.components, &assets.fonts, &assets.pool, cache);
  return page;
}

inline std::string page_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

inline PageInfo page_info(const Job& job, const Encoding& enc) {
  return {static_cast<std::int64_t>(job.index) + 1, "images/" + page_stem(job.index) + enc.extension(), job.spec.width,
          job.spec.height};
}

struct BatchStats {
  std::size_t pagesDone = 0;
  std::size_t pagesFailed = 0;
  PageCounters counters;
  std::size_t totalComponents = 0;
  std::array<std::size_t, 4> annotationCounts{};  // per AnnotationLevel
  double wallSeconds = 0.0;
  double pagesPerSecond = 0.0;
  std::vector<std::uint64_t> pixelHashes;  // pre-encoding, per page index
  std::vector<std::string> errors;

  /// Projected wall time for `pages` pages at the measured rate.
  double extrapolate_seconds(double pages) const { return pagesPerSecond > 0.0 ? pages / pagesPerSecond : 0.0; }
};

inline nlohmann::ordered_json stats_to_json(const BatchStats& s) {
  nlohmann::ordered_json j;
  j["pagesDone"] = s.pagesDone;
  j["pagesFailed"] = s.pagesFailed;
  j["totalComponents"] = s.totalComponents;
  j["leafRegions"] = s.counters.leafRegions;
  for (auto k : kAllKinds) j["categoryCounts"][to_string(k)] = s.counters.categoryCounts[static_cast<std::size_t>(k)];
  for (auto l : kAllLevels) j["annotationCounts"][to_string(l)] = s.annotationCounts[static_cast<std::size_t>(l)];
  j["truncatedWords"] = s.counters.truncatedWords;
  j["missingGlyphs"] = s.counters.missingGlyphs;
  j["fallbackGlyphs"] = s.counters.fallbackGlyphs;
  j["kindFallbacks"] = s.counters.kindFallbacks;
  j["wallSeconds"] = s.wallSeconds;
  j["pagesPerSecond"] = s.pagesPerSecond;
  j["pixelHashes"] = nlohmann::ordered_json::array();
  for (auto h : s.pixelHashes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    j["pixelHashes"].push_back(buf);
  }
  j["errors"] = s.errors;
  return j;
}

struct BatchOptions {
  bool writeImages = true;
  /// Called from the writer thread after each page is merged.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

namespace detail {

struct PageOutput {
  PageInfo info;
  std::vector<AnnotationRecord> records;
  PageCounters counters;
  std::size_t components = 0;
  std::uint64_t pixelHash = 0;
  std::optional<std::string> error;
};

template <typename F>
void with_io_retries(int retries, F&& f) {
  for (int attempt = 0;; ++attempt) {
    try {
      f();
      return;
    } catch (const WriteError&) {
      if (attempt >= retries) throw;
    } catch (const ImageIoError&) {
      if (attempt >= retries) throw;
    }
  }
}

}  // namespace detail

/// Generates every job of `plan` with config.workers threads and writes
///   images/{index:06}.{png|jpg}, labels/{index:06}.json,
///   coco_{level}.json for the four levels, stats.json and config.json
/// under config.paths.outputDir. Label and COCO bytes do not depend on the
/// worker count. Throws GenerationError after writing everything else if any
/// job failed.
inline BatchStats run_batch(const JobPlan& plan, const GenerationConfig& config, const Assets& assets,
                            const BatchOptions& options = {}) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = config.paths.outputDir;
  fs::create_directories(out / "images");
  fs::create_directories(out / "labels");

  const std::size_t total = plan.jobs.size();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), std::max<std::size_t>(1, total));
  const std::size_t window = 2 * workers + 2;

  std::mutex mu;
  std::condition_variable cv;
  std::map<std::size_t, detail::PageOutput> ready;
  std::size_t nextToWrite = 0;
  std::atomic<std::size_t> nextJob{0};

  auto worker = [&] {
    GlyphCache cache;
    for (;;) {
      const std::size_t i = nextJob.fetch_add(1);
      if (i >= total) return;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return i < nextToWrite + window; });
      }
      const Job& job = plan.jobs[i];
      detail::PageOutput po;
      po.info = page_info(job, config.encoding);
      try {
        auto page = generate_page(job, config, assets, cache);
        po.pixelHash = pixel_hash(page.image);
        po.counters = page.counters;
        po.components = page.components.size();
        po.records = collect_records(po.info.imageId, page.components);
        const auto labels = serialize(emit_hierarchy(po.info, page.components, &page.layout, &job.spec));
        detail::with_io_retries(config.ioRetries, [&] {
          if (options.writeImages) write_image(out / po.info.fileName, page.image, config.encoding);
          write_text_file(out / "labels" / (page_stem(job.index) + ".json"), labels);
        });
      } catch (const std::exception& e) {
        po.records.clear();
        po.error = "page " + std::to_string(i) + ": " + e.what();
      }
      {
        std::lock_guard lock(mu);
        ready.emplace(i, std::move(po));
      }
      cv.notify_all();
    }
  };

  std::vector<CocoStreamWriter> writers;
  writers.reserve(kAllLevels.size());
  for (auto level : kAllLevels) writers.emplace_back(out / coco_file_name(level), level);

  BatchStats stats;
  stats.pixelHashes.assign(total, 0);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);

  try {
    while (true) {
      detail::PageOutput po;
      {
        std::unique_lock lock(mu);
        if (nextToWrite >= total) break;
        cv.wait(lock, [&] { return ready.count(nextToWrite) > 0; });
        po = std::move(ready.at(nextToWrite));
        ready.erase(nextToWrite);
      }
      const std::size_t index = nextToWrite;
      if (po.error) {
        ++stats.pagesFailed;
        stats.errors.push_back(*po.error);
      } else {
        for (auto& w : writers) w.add_page(po.info, po.records);
        for (const auto& r : po.records) ++stats.annotationCounts[static_cast<std::size_t>(r.level)];
        stats.counters.add(po.counters);
        stats.totalComponents += po.components;
        stats.pixelHashes[index] = po.pixelHash;
        ++stats.pagesDone;
      }
      {
        std::lock_guard lock(mu);
        ++nextToWrite;
      }
      cv.notify_all();
      if (options.progress) options.progress(index + 1, total);
    }
  } catch (...) {
    // Release blocked workers before unwinding.
    nextJob = total;
    {
      std::lock_guard lock(mu);
      nextToWrite = total;
    }
    cv.notify_all();
    for (auto& t : threads) t.join();
    throw;
  }
  for (auto& t : threads) t.join();
  for (auto& w : writers) w.finish();

  stats.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  stats.pagesPerSecond = stats.wallSeconds > 0.0 ? static_cast<double>(stats.pagesDone) / stats.wallSeconds : 0.0;
  write_text_file(out / "stats.json", stats_to_json(stats).dump(2) + "\n");
  write_text_file(out / "config.json", config_to_json(config).dump(2) + "\n");
  if (stats.pagesFailed) {
    std::string msg = std::to_string(stats.pagesFailed) + " page(s) failed";
    for (const auto& e : stats.errors) msg += "\n  " + e;
    throw GenerationError(msg);
  }
  return stats;
}

struct PreviewResult {
  std::filesystem::path page;
  std::array<std::filesystem::path, 4> overlays;
  std::array<std::size_t, 4> rectCounts{};
  std::vector<AnnotationRecord> records;
};

/// Renders page `index` and one debug overlay per annotation level into
/// `outDir`.
inline PreviewResult cmd_preview(const GenerationConfig& config, const Assets& assets, std::size_t index,
                                 const std::filesystem::path& outDir) {
  std::filesystem::create_directories(outDir);
  GlyphCache cache;
  const Job job = make_job(config, index);
  const auto page = generate_page(job, config, assets, cache);
  const auto info = page_info(job, config.encoding);
  PreviewResult res;
  res.records = collect_records(info.imageId, page.components);
  res.page = outDir / (page_stem(index) + ".png");
  write_image(res.page, page.image, Encoding{});
  for (auto level : kAllLevels) {
    const auto li = static_cast<std::size_t>(level);
    for (const auto& r : res.records) res.rectCounts[li] += r.level == level;
    res.overlays[li] = outDir / (page_stem(index) + "_" + to_string(level) + ".png");
    write_image(res.overlays[li], render_debug_overlay(page.image, res.records, level), Encoding{});
  }
  return res;
}

}  // namespace docsynth
