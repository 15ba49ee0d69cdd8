#include "cyclecheck/pipeline.hpp"

#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <iterator>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "cyclecheck/compare.hpp"
#include "cyclecheck/digest.hpp"
#include "cyclecheck/errors.hpp"
#include "cyclecheck/json_writer.hpp"
#include "cyclecheck/report.hpp"
#include "cyclecheck/runlog.hpp"
#include "cyclecheck/topology.hpp"

namespace cyclecheck {
namespace {

namespace fs = std::filesystem;

/// Serialized stderr sink. Progress lines are JSON objects, one per stage;
/// errors are plain "error: ..." lines. The mutex keeps concurrent dataset
/// pipelines from tearing lines, though their order may interleave.
class Progress {
 public:
  Progress(std::ostream* sink, bool verbose)
      : sink_(sink == nullptr ? &std::cerr : sink), verbose_(verbose) {}

  void step(std::string_view dataset, std::string_view stage,
            std::string_view detail) {
    if (!verbose_) return;
    JsonWriter w;
    w.begin_object();
    w.key("stage").value(stage);
    if (!dataset.empty()) w.key("dataset").value(dataset);
    w.key("detail").value(detail);
    w.end_object();
    const std::lock_guard<std::mutex> lock(mutex_);
    *sink_ << w.take() << '\n';
  }

  void error(std::string_view message) {
    const std::lock_guard<std::mutex> lock(mutex_);
    *sink_ << "error: " << message << '\n';
  }

 private:
  std::ostream* sink_;
  bool verbose_;
  std::mutex mutex_;
};

int resolved_jobs(int configured) {
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw ParseError("cannot read input file " + path);
  std::string bytes{std::istreambuf_iterator<char>(in),
                    std::istreambuf_iterator<char>()};
  if (in.bad()) throw ParseError("cannot read input file " + path);
  return bytes;
}

/// One fully analyzed data set. Heap-allocated so section.bundle stays valid
/// however the owner moves the handle around.
struct DatasetArtifacts {
  std::string label;
  NetworkBundle bundle;
  IntrinsicSection section;
  RunLog log;
};

using ArtifactPtr = std::unique_ptr<DatasetArtifacts>;

ArtifactPtr build_dataset(const RunConfig& config, const DatasetConfig& dataset,
                          const StudyArea& area, const AnalysisGrid& grid,
                          Progress& progress) {
  auto art = std::make_unique<DatasetArtifacts>();
  art->label = to_string(dataset.role);
  RunLog& log = art->log;

  const std::string bytes = read_input(dataset.path);
  std::vector<RawFeature> features =
      dataset.format == InputFormat::OsmXml
          ? parse_osm_xml(bytes, dataset.ruleset, dataset.transform, &log)
          : parse_geojson(bytes, dataset.attribute_map, dataset.ruleset, &log);
  std::vector<EdgeRecord> records = classify(features, dataset.ruleset);
  records = clip_to_study_area(records, area, &log);
  {
    std::ostringstream os;
    os << features.size() << " features, " << records.size()
       << " records inside the study area";
    log.info("ingest", os.str());
    progress.step(art->label, "ingest", os.str());
  }

  MultiplierRule multiplier;
  multiplier.centerline_both_sides = config.thresholds.centerline_both_sides;
  NetworkGraph graph = simplify(
      build_graph(records, config.thresholds.snap_tolerance, multiplier));
  art->bundle = analyze_network(std::move(graph), grid, config.grid.density_area);
  {
    std::ostringstream os;
    os << art->bundle.summary.node_count << " nodes, "
       << art->bundle.graph.edges().size() << " edges, "
       << art->bundle.component_set.components.size()
       << " components after simplification";
    log.info("graph", os.str());
    progress.step(art->label, "graph", os.str());
  }

  IntrinsicSection& s = art->section;
  s.label = art->label;
  s.input_path = dataset.path;
  s.input_digest = sha256_file(dataset.path);
  s.bundle = &art->bundle;
  s.overshoot_edge_ids = overshoots(art->bundle.graph, config.thresholds.overshoot);
  s.undershoots = undershoots(art->bundle.graph, config.thresholds.undershoot);
  s.missing_intersections = missing_intersection_nodes(art->bundle.graph);
  s.component_gaps = component_gaps(art->bundle.graph, art->bundle.component_set,
                                    config.thresholds.component_gap);
  {
    std::ostringstream os;
    os << art->bundle.dangling.node_ids.size() << " dangling nodes, "
       << s.overshoot_edge_ids.size() << " overshoots, "
       << s.undershoots.size() << " undershoots, "
       << s.missing_intersections.size() << " un-noded crossings, "
       << s.component_gaps.size() << " component gaps";
    log.info("topology", os.str());
    progress.step(art->label, "topology", os.str());
  }

  if (!config.tags.tags_of_interest.empty()) {
    if (dataset.role == DataRole::Osm) {
      s.tags_analyzed = true;
      s.tag_keys = config.tags.tags_of_interest;
      s.missing_tags = missing_tags(art->bundle.graph, config.tags, grid);
      s.contradiction_flags = contradictions(art->bundle.graph, config.tags);
      s.pattern_keys = config.tags.pattern_keys;
      if (!s.pattern_keys.empty()) {
        s.patterns = tag_patterns(art->bundle.graph, s.pattern_keys, grid);
      }
      std::ostringstream os;
      os << s.missing_tags.flags.size() << " missing-tag flags, "
         << s.contradiction_flags.size() << " contradictions";
      log.info("tags", os.str());
      progress.step(art->label, "tags", os.str());
    } else {
      log.warn("tags",
               "tag analysis skipped for the reference data set; raw tags "
               "are not available");
    }
  }
  return art;
}

std::size_t emit_intrinsic(const RunConfig& config, const AnalysisGrid& grid,
                           DatasetArtifacts& art, Progress& progress) {
  QualityReport report;
  report.config_digest = config.digest;
  report.grid = &grid;
  report.sections.push_back(art.section);
  report.log = &art.log;
  const std::string dir = (fs::path(config.output.out_dir) / art.label).string();
  const FileManifest manifest = emit_layers(report, dir, config.output.overwrite);
  std::ostringstream os;
  os << manifest.entries.size() + 1 << " files into " << dir;
  progress.step(art.label, "report", os.str());
  return manifest.entries.size();
}

StudyArea load_area(const RunConfig& config) {
  return load_study_area(config.study_area.path, config.study_area.crs_label,
                         config.study_area.unit);
}

const DatasetConfig& require_dataset(const RunConfig& config, DataRole role) {
  const DatasetConfig* d = config.dataset(role);
  if (d == nullptr) {
    throw ConfigError("the [" + std::string(to_string(role)) +
                      "] data set is not configured");
  }
  return *d;
}

/// Builds both data sets, osm first in error precedence; after_osm runs
/// between the osm build and any look at the reference result, so a full run
/// can persist osm outputs before a reference failure aborts it.
std::pair<ArtifactPtr, ArtifactPtr> build_both(
    const RunConfig& config, const StudyArea& area, const AnalysisGrid& grid,
    Progress& progress, const std::function<void(DatasetArtifacts&)>& after_osm) {
  const DatasetConfig& osm = require_dataset(config, DataRole::Osm);
  const DatasetConfig& reference = require_dataset(config, DataRole::Reference);

  if (resolved_jobs(config.output.jobs) > 1) {
    auto reference_future = std::async(std::launch::async, [&] {
      return build_dataset(config, reference, area, grid, progress);
    });
    ArtifactPtr a = build_dataset(config, osm, area, grid, progress);
    if (after_osm) after_osm(*a);
    ArtifactPtr b = reference_future.get();
    return {std::move(a), std::move(b)};
  }
  ArtifactPtr a = build_dataset(config, osm, area, grid, progress);
  if (after_osm) after_osm(*a);
  ArtifactPtr b = build_dataset(config, reference, area, grid, progress);
  return {std::move(a), std::move(b)};
}

/// Guards against comparing against intrinsic outputs from an older grid:
/// if <out_dir>/<label>/summary.json exists, its stored grid signature must
/// match the grid this run is about to use.
void check_grid_freshness(const AnalysisGrid& grid, const RunConfig& config,
                          std::string_view label) {
  const fs::path dir = fs::path(config.output.out_dir) / std::string(label);
  std::ifstream in(dir / "summary.json", std::ios::binary);
  if (!in.good()) return;
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  const std::string needle = "\"signature\":\"";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return;
  const auto start = pos + needle.size();
  const auto end = text.find('"', start);
  if (end == std::string::npos) return;
  if (text.substr(start, end - start) != grid.signature()) {
    throw GridMismatchError("intrinsic outputs in " + dir.string() +
                            " were computed on a different grid; rerun them "
                            "or remove the directory");
  }
}

ExtrinsicSection build_extrinsic(const RunConfig& config,
                                 const AnalysisGrid& grid, DatasetArtifacts& a,
                                 DatasetArtifacts& b, RunLog& log,
                                 Progress& progress) {
  ExtrinsicSection x;
  x.label_a = a.label;
  x.label_b = b.label;
  x.comparison =
      compare_networks(a.bundle, b.bundle, grid, config.zipf_outlier_ratio);
  x.overlay = largest_component_overlay(a.bundle, b.bundle);
  x.params = config.matching;
  x.compare_attributes = config.compare_attributes;

  const auto segments_a = segmentize(a.bundle.graph, x.params.segment_length);
  const auto segments_b = segmentize(b.bundle.graph, x.params.segment_length);
  const auto matches_ab = match_segments(segments_a, segments_b, x.params);
  const auto matches_ba = match_segments(segments_b, segments_a, x.params);
  x.matches_ab =
      aggregate_matches(matches_ab, segments_a, segments_b, a.bundle.graph,
                        b.bundle.graph, x.compare_attributes, x.params.min_fraction);
  x.matches_ba =
      aggregate_matches(matches_ba, segments_b, segments_a, b.bundle.graph,
                        a.bundle.graph, x.compare_attributes, x.params.min_fraction);
  x.unmatched = unmatched_report(x.matches_ab, x.matches_ba);
  x.bundle_a = &a.bundle;
  x.bundle_b = &b.bundle;

  {
    std::ostringstream os;
    os << x.comparison.density_stats.two_sided_cells
       << " cells populated on both sides, "
       << x.comparison.density_stats.only_a_cells << " only " << a.label << ", "
       << x.comparison.density_stats.only_b_cells << " only " << b.label;
    log.info("compare", os.str());
    progress.step("", "compare", os.str());
  }
  {
    std::ostringstream os;
    os << a.label << " against " << b.label << ": "
       << x.matches_ab.size() - x.unmatched.unmatched_a.size() << " of "
       << x.matches_ab.size() << " edges matched; " << b.label << " against "
       << a.label << ": "
       << x.matches_ba.size() - x.unmatched.unmatched_b.size() << " of "
       << x.matches_ba.size();
    log.info("matching", os.str());
    progress.step("", "matching", os.str());
  }
  if (x.comparison.zipf.completeness_hint) {
    log.warn("compare",
             "largest-component outlier flags differ between the data sets; "
             "the one without the outlier may be less complete");
  }
  return x;
}

void emit_compare(const RunConfig& config, const AnalysisGrid& grid,
                  DatasetArtifacts& a, DatasetArtifacts& b, Progress& progress) {
  RunLog merged;
  merged.append(a.log);
  merged.append(b.log);
  ExtrinsicSection x = build_extrinsic(config, grid, a, b, merged, progress);

  QualityReport report;
  report.config_digest = config.digest;
  report.grid = &grid;
  report.sections.push_back(a.section);
  report.sections.push_back(b.section);
  report.extrinsic = std::move(x);
  report.log = &merged;

  const std::string dir = (fs::path(config.output.out_dir) / "compare").string();
  const FileManifest manifest = emit_layers(report, dir, config.output.overwrite);
  std::ostringstream os;
  os << manifest.entries.size() + 1 << " files into " << dir;
  progress.step("", "report", os.str());
}

template <typename Body>
int guarded(Progress& progress, Body&& body) {
  try {
    body();
    return kExitOk;
  } catch (const GridMismatchError& e) {
    progress.error(e.what());
    return kExitGridMismatch;
  } catch (const OutputError& e) {
    progress.error(e.what());
    return kExitOutput;
  } catch (const ParseError& e) {
    progress.error(e.what());
    return kExitParse;
  } catch (const ConfigError& e) {
    progress.error(e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    progress.error(e.what());
    return kExitOutput;
  }
}

}  // namespace

int run_intrinsic(const RunConfig& config, DataRole role,
                  const RunOptions& options) {
  Progress progress(options.diagnostics, options.verbose);
  return guarded(progress, [&] {
    const DatasetConfig& dataset = require_dataset(config, role);
    const StudyArea area = load_area(config);
    const AnalysisGrid grid = make_grid(area, config.grid.cell_size);
    ArtifactPtr art = build_dataset(config, dataset, area, grid, progress);
    emit_intrinsic(config, grid, *art, progress);
  });
}

int run_compare(const RunConfig& config, const RunOptions& options) {
  Progress progress(options.diagnostics, options.verbose);
  return guarded(progress, [&] {
    require_dataset(config, DataRole::Osm);
    require_dataset(config, DataRole::Reference);
    const StudyArea area = load_area(config);
    const AnalysisGrid grid = make_grid(area, config.grid.cell_size);
    check_grid_freshness(grid, config, "osm");
    check_grid_freshness(grid, config, "reference");
    auto [a, b] = build_both(config, area, grid, progress, {});
    emit_compare(config, grid, *a, *b, progress);
  });
}

int run_full(const RunConfig& config, const RunOptions& options) {
  Progress progress(options.diagnostics, options.verbose);
  return guarded(progress, [&] {
    require_dataset(config, DataRole::Osm);
    require_dataset(config, DataRole::Reference);
    const StudyArea area = load_area(config);
    const AnalysisGrid grid = make_grid(area, config.grid.cell_size);
    auto [a, b] = build_both(config, area, grid, progress,
                             [&](DatasetArtifacts& osm_art) {
                               emit_intrinsic(config, grid, osm_art, progress);
                             });
    emit_intrinsic(config, grid, *b, progress);
    emit_compare(config, grid, *a, *b, progress);
  });
}

}  // namespace cyclecheck
