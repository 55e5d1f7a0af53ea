#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "docsynth/docsynth.hpp"

namespace fs = std::filesystem;
using namespace docsynth;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kGenerationError = 2, kValidationError = 3 };

struct Options {
  fs::path config;
  std::optional<int> count;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<fs::path> out;
  std::size_t index = 0;
  fs::path dir;
  bool quiet = false;
};

GenerationConfig resolve_config(const Options& o) {
  auto c = load_config(o.config);
  if (o.count) c.count = *o.count;
  if (o.seed) c.masterSeed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.out) c.paths.outputDir = *o.out;
  validate_config(c);
  return c;
}

/// Runs `body` with config/asset errors mapped to exit 1 and everything
/// else to exit 2.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CorpusError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const FontError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kGenerationError;
  } catch (const std::exception& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kGenerationError;
  }
}

int cmd_generate(const Options& o) {
  GenerationConfig config;
  Assets assets;
  try {
    config = resolve_config(o);
    assets = load_assets(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return guarded([&] {
    BatchOptions opts;
    if (!o.quiet) {
      opts.progress = [](std::size_t done, std::size_t total) {
        if (done == total || done % 100 == 0) std::fprintf(stderr, "\r%zu/%zu pages", done, total);
        if (done == total) std::fputc('\n', stderr);
      };
    }
    const auto stats = run_batch(plan_jobs(config), config, assets, opts);
    std::printf("%zu pages, %zu components, %.1f s, %.2f pages/s -> %s\n", stats.pagesDone, stats.totalComponents,
                stats.wallSeconds, stats.pagesPerSecond, config.paths.outputDir.string().c_str());
    return kOk;
  });
}

int cmd_preview_page(const Options& o) {
  GenerationConfig config;
  Assets assets;
  try {
    config = resolve_config(o);
    assets = load_assets(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return guarded([&] {
    const fs::path dir = o.out ? *o.out : config.paths.outputDir / "preview";
    const auto res = cmd_preview(config, assets, o.index, dir);
    std::printf("%s\n", res.page.string().c_str());
    for (auto level : kAllLevels) {
      const auto li = static_cast<std::size_t>(level);
      std::printf("%s  %zu %s boxes\n", res.overlays[li].string().c_str(), res.rectCounts[li], to_string(level));
    }
    return kOk;
  });
}

int cmd_validate(const Options& o) {
  return guarded([&] {
    if (!fs::is_directory(o.dir)) {
      std::cerr << "validate: " << o.dir << " is not a directory\n";
      return kValidationError;
    }
    const auto report = validate_output_dir(o.dir);
    for (const auto& e : report.errors) std::cout << e << "\n";
    std::printf("%zu pages, %zu/%zu/%zu/%zu annotations checked, %zu problem(s)\n", report.pagesChecked,
                report.annotationsChecked[0], report.annotationsChecked[1], report.annotationsChecked[2],
                report.annotationsChecked[3], report.errors.size());
    return report.ok() ? kOk : kValidationError;
  });
}

int cmd_stats(const Options& o) {
  return guarded([&] {
    const auto path = o.dir / "stats.json";
    std::ifstream in(path);
    if (!in) {
      std::cerr << "stats: cannot read " << path << "\n";
      return kValidationError;
    }
    auto j = nlohmann::ordered_json::parse(in);
    j.erase("pixelHashes");
    if (j.contains("pagesPerSecond") && j["pagesPerSecond"].get<double>() > 0.0)
      j["extrapolatedSeconds320k"] = 320000.0 / j["pagesPerSecond"].get<double>();
    std::cout << j.dump(2) << "\n";
    return kOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic document image generator"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Generate a dataset");
  gen->add_option("--config", o.config, "Config JSON")->required();
  gen->add_option("--count", o.count, "Number of pages");
  gen->add_option("--seed", o.seed, "Master seed");
  gen->add_option("--workers", o.workers, "Worker threads");
  gen->add_option("--out", o.out, "Output directory");
  gen->add_flag("--quiet", o.quiet, "No progress output");

  auto* prev = app.add_subcommand("preview", "Render one page with per-level overlays");
  prev->add_option("--config", o.config, "Config JSON")->required();
  prev->add_option("--index", o.index, "Page index")->required();
  prev->add_option("--out", o.out, "Output directory (default <outputDir>/preview)");

  auto* val = app.add_subcommand("validate", "Validate an output directory");
  val->add_option("--dir", o.dir, "Output directory")->required();

  auto* st = app.add_subcommand("stats", "Print batch statistics");
  st->add_option("--dir", o.dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  if (gen->parsed()) return cmd_generate(o);
  if (prev->parsed()) return cmd_preview_page(o);
  if (val->parsed()) return cmd_validate(o);
  return cmd_stats(o);
}
