#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclecheck/compare.hpp"
#include "cyclecheck/matching.hpp"
#include "cyclecheck/tags.hpp"
#include "cyclecheck/topology.hpp"

namespace cyclecheck {

class RunLog;

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Everything one data set's analysis produced, ready for serialization.
/// The bundle stays owned by the caller.
struct IntrinsicSection {
  std::string label;  // directory-safe data set name, e.g. "osm"
  std::string input_path;
  std::string input_digest;
  const NetworkBundle* bundle = nullptr;
  std::vector<std::int64_t> overshoot_edge_ids;
  std::vector<TopologyFlag> undershoots;
  std::vector<TopologyFlag> missing_intersections;
  std::vector<TopologyFlag> component_gaps;
  bool tags_analyzed = false;
  std::vector<std::string> tag_keys;  // tags_of_interest, report order
  MissingTagResult missing_tags;
  std::vector<TagFlag> contradiction_flags;
  std::vector<std::string> pattern_keys;
  std::vector<CellPattern> patterns;
};

/// The two-network contrast, including feature matching in both directions.
struct ExtrinsicSection {
  std::string label_a;
  std::string label_b;
  ComparisonResult comparison;
  ComponentOverlay overlay;
  MatchParams params;
  std::vector<std::string> compare_attributes;
  std::vector<EdgeMatchSummary> matches_ab;  // a as source
  std::vector<EdgeMatchSummary> matches_ba;  // b as source
  UnmatchedReport unmatched;
  const NetworkBundle* bundle_a = nullptr;
  const NetworkBundle* bundle_b = nullptr;
};

/// One output directory's worth of results. Two shapes are valid: a single
/// intrinsic section, or two intrinsic sections plus the extrinsic one.
struct QualityReport {
  std::string tool_version{kToolVersion};
  std::string config_digest;
  const AnalysisGrid* grid = nullptr;
  std::vector<IntrinsicSection> sections;
  std::optional<ExtrinsicSection> extrinsic;
  const RunLog* log = nullptr;
};

// ---------------------------------------------------------------- artifacts

/// Edges as a FeatureCollection with classification, lengths, and the
/// component each edge belongs to.
std::string network_geojson(const NetworkGraph& graph,
                            const ComponentSet& components);

/// Retained grid cells with the section's per-cell metrics as properties.
/// Metrics a cell has no value for are null, never zero.
std::string grid_geojson(const IntrinsicSection& section,
                         const AnalysisGrid& grid);

/// Per-cell density and reachability contrasts; one-sided cells carry null
/// on the absent side.
std::string comparison_grid_geojson(const ComparisonResult& result,
                                    const AnalysisGrid& grid);

std::string intrinsic_summary_json(const QualityReport& report,
                                   const IntrinsicSection& section);

std::string comparison_summary_json(const QualityReport& report);

// ---------------------------------------------------------------- rendering

/// Five-class equal-interval choropleth. A diverging scale centers the
/// classes on zero so gains and losses read symmetrically.
struct ChoroplethSpec {
  std::string metric_label;
  bool diverging = false;
};

/// One drawable layer; exactly one of cells/lines/points should be filled.
struct MapLayer {
  std::string name;
  std::vector<std::pair<geo::Box, double>> cells;  // choropleth value per cell
  std::vector<geo::Polyline> lines;
  std::vector<geo::Point> points;
  std::optional<ChoroplethSpec> choropleth;  // required with cells
  std::string color = "#1f78b4";
  double stroke_width = 1.2;
  bool dashed = false;
};

/// Fixed-canvas SVG map: every layer in draw order, a legend naming each
/// layer (classed breaks for choropleths), and a scale bar in meters.
/// Throws OutputError when no layer holds any geometry.
std::string render_svg_map(const std::vector<MapLayer>& layers);

/// Log-log ranked component-length plot, rank axis starting at 1. A second
/// series, when given, is drawn with distinct markers and a legend.
std::string render_zipf_svg(
    const std::vector<std::pair<std::size_t, double>>& series,
    const std::vector<std::pair<std::size_t, double>>* second = nullptr,
    std::string_view label_a = "network a", std::string_view label_b = "network b");

/// A plot artifact bound for both the plots/ directory and the HTML report.
struct PlotArtifact {
  std::string file_name;  // path under the output directory
  std::string section;    // owning HTML section label
  std::string title;
  std::string svg;
};

/// Self-contained HTML: metadata header, one section per intrinsic data
/// set, then comparison and matching sections when extrinsic results are
/// present. Each plot is embedded exactly once, in its owning section.
std::string render_html(const QualityReport& report,
                        const std::vector<PlotArtifact>& plots);

// ------------------------------------------------------------------ output

struct ManifestEntry {
  std::string path;  // relative to the output directory, '/' separators
  std::size_t bytes = 0;
  std::string sha256;
};

struct FileManifest {
  std::vector<ManifestEntry> entries;  // ascending path
};

/// Writes the report's whole artifact tree into out_dir: summary.json, the
/// GeoJSON layers, per-kind flag files (empty collections included), match
/// tables for extrinsic runs, plots, report.html, run.log.jsonl, and
/// manifest.json listing every other file's digest. Existing target files
/// make it throw OutputError unless overwrite is set; nothing is written
/// until the collision check passes.
FileManifest emit_layers(const QualityReport& report, const std::string& out_dir,
                         bool overwrite = false);

}  // namespace cyclecheck
