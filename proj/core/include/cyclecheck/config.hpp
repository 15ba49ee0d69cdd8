#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclecheck/grid.hpp"
#include "cyclecheck/ingest.hpp"
#include "cyclecheck/matching.hpp"
#include "cyclecheck/tags.hpp"

namespace cyclecheck {

enum class DataRole { Osm, Reference };
enum class InputFormat { OsmXml, GeoJson };

std::string_view to_string(DataRole role);

struct StudyAreaConfig {
  std::string path;
  std::string crs_label = "unspecified";
  std::string unit = "meter";
};

struct DatasetConfig {
  DataRole role = DataRole::Osm;
  std::string path;
  InputFormat format = InputFormat::OsmXml;  // defaults per role
  ClassificationRuleset ruleset;             // defaults per role
  std::vector<AttributeMapping> attribute_map;  // GeoJSON input only
  AffineTransform transform;                    // OSM degree input only
};

struct GridConfig {
  double cell_size = 100.0;
  DensityArea density_area = DensityArea::FullCell;
};

struct ThresholdConfig {
  double snap_tolerance = 0.001;
  double overshoot = 3.0;
  double undershoot = 3.0;
  double component_gap = 10.0;
  /// Disjunction marking centerline edges that carry infrastructure on both
  /// sides (doubles their infrastructure length).
  std::vector<TagPredicate> centerline_both_sides;
};

struct OutputConfig {
  std::string out_dir = "out";
  bool overwrite = false;
  int jobs = 0;  // 0 = one worker per available core
};

struct RunConfig {
  StudyAreaConfig study_area;
  std::vector<DatasetConfig> datasets;  // at most one per role
  GridConfig grid;
  ThresholdConfig thresholds;
  TagAnalysisConfig tags;  // empty tags_of_interest switches the stage off
  MatchParams matching;
  std::vector<std::string> compare_attributes{"protection"};
  double zipf_outlier_ratio = 10.0;
  OutputConfig output;
  std::string digest;  // content hash of the raw config text

  const DatasetConfig* dataset(DataRole role) const;

  /// Enforces the cross-field rules parse_config defers: every distance and
  /// size strictly positive, min_fraction in [0, 1], zipf ratio > 1, at
  /// least one data set, one data set per role, non-empty paths, known
  /// compare attributes, and per-dataset ruleset validity.
  void validate() const;
};

/// Everything a GeoJSON data set needs to classify canonical tags the
/// attribute map fills in: include-all, protection = "protected",
/// bidirectional = "no", mapping = "centerline", bridge/tunnel keys.
ClassificationRuleset default_reference_ruleset();

/// Parses the TOML text. Relative paths are resolved against base_dir.
/// Throws ParseError on syntax errors, ConfigError on semantic ones
/// (unknown keys included, so typos fail loudly). Calls validate().
RunConfig parse_config(std::string_view text, const std::string& base_dir);

/// Reads and parses the file; the digest is taken over the raw bytes.
/// A missing or unreadable config file is a ConfigError: there is no run
/// to attempt without one.
RunConfig load_config(const std::string& path);

}  // namespace cyclecheck
