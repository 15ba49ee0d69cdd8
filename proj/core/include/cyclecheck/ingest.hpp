#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclecheck/geometry.hpp"

namespace cyclecheck {

class RunLog;

using TagMap = std::map<std::string, std::string>;

enum class Protection { Protected, Unprotected };
enum class MappingMethod { Centerline, TrueGeometry };

std::string_view to_string(Protection p);
std::string_view to_string(MappingMethod m);

// ---------------------------------------------------------------------------
// Tag predicates and classification rules

enum class PredicateOp { Equals, NotEquals, Exists, OneOf };

struct TagPredicate {
  std::string key;
  PredicateOp op = PredicateOp::Exists;
  std::vector<std::string> values;  // 1 value for equals/not-equals, n for one-of

  bool matches(const TagMap& tags) const;
  friend bool operator==(const TagPredicate&, const TagPredicate&) = default;
};

/// All predicates must match (empty conjunction matches everything — that is
/// the default rule).
bool matches_all(const std::vector<TagPredicate>& conjunction,
                 const TagMap& tags);
/// Any predicate matches (empty disjunction matches nothing).
bool matches_any(const std::vector<TagPredicate>& disjunction,
                 const TagMap& tags);

template <typename T>
struct ClassificationRule {
  std::vector<TagPredicate> when;  // conjunction; empty = default rule
  T value{};
};

struct ClassificationRuleset {
  std::vector<TagPredicate> include_predicates;  // disjunctive
  std::vector<ClassificationRule<Protection>> protection_rules;
  std::vector<ClassificationRule<bool>> direction_rules;  // value = bidirectional
  std::vector<ClassificationRule<MappingMethod>> mapping_method_rules;
  std::vector<TagPredicate> bridge_tunnel_predicates;  // disjunctive

  /// Throws ConfigError when a rule list is empty, does not end in a default
  /// rule, or a predicate has an empty key.
  void validate() const;

  static ClassificationRuleset default_osm();
};

// ---------------------------------------------------------------------------
// Domain records

struct RawFeature {
  std::string source_id;
  geo::Polyline geometry;  // projected meters
  TagMap tags;
};

struct EdgeRecord {
  std::int64_t edge_id = 0;
  std::string source_id;
  geo::Polyline geometry;
  Protection protection = Protection::Unprotected;
  bool bidirectional = false;
  MappingMethod mapping_method = MappingMethod::TrueGeometry;
  bool grade_separated = false;
  TagMap tags;

  double geometric_length() const { return geo::length(geometry); }
};

struct StudyArea {
  geo::Polygon boundary;
  std::string crs_label;
  std::string declared_unit;  // must be "meter"
};

/// x = a*lon + b*lat + c ; y = d*lon + e*lat + f. The configurable hook for
/// OSM input in geographic degrees; identity means pass-through.
struct AffineTransform {
  double a = 1, b = 0, c = 0;
  double d = 0, e = 1, f = 0;

  geo::Point apply(double lon, double lat) const {
    return {a * lon + b * lat + c, d * lon + e * lat + f};
  }
  bool is_identity() const {
    return a == 1 && b == 0 && c == 0 && d == 0 && e == 1 && f == 0;
  }
};

/// One attribute-mapping entry for reference (GeoJSON) input: copy
/// properties[property] into tags[target], falling back to `default_value`.
struct AttributeMapping {
  std::string target;
  std::string property;
  std::optional<std::string> default_value;
};

// ---------------------------------------------------------------------------
// Operations

/// Parses OSM XML (node/way elements) and returns one RawFeature per way
/// matching the ruleset's include predicates. Throws ParseError with a line
/// number on malformed XML and on ways referencing missing nodes.
std::vector<RawFeature> parse_osm_xml(std::string_view bytes,
                                      const ClassificationRuleset& ruleset,
                                      const AffineTransform& transform = {},
                                      RunLog* log = nullptr);

/// Parses a GeoJSON FeatureCollection of LineString/MultiLineString
/// features. MultiLineStrings are split into one RawFeature per part with
/// "#<part>" suffixed source ids.
std::vector<RawFeature> parse_geojson(
    std::string_view bytes, const std::vector<AttributeMapping>& attribute_map,
    const ClassificationRuleset& ruleset, RunLog* log = nullptr);

/// First matching rule in each list assigns protection / direction /
/// mapping; grade_separated iff any bridge/tunnel predicate matches.
std::vector<EdgeRecord> classify(const std::vector<RawFeature>& features,
                                 const ClassificationRuleset& ruleset);

/// Intersects each edge with the study area polygon. Split parts keep their
/// parent source_id; zero-length leftovers are dropped with a warning.
std::vector<EdgeRecord> clip_to_study_area(const std::vector<EdgeRecord>& edges,
                                           const StudyArea& area,
                                           RunLog* log = nullptr);

/// Loads a study-area polygon from a GeoJSON file (Feature, FeatureCollection
/// or bare Polygon geometry; exterior ring only).
StudyArea load_study_area(const std::string& path, std::string crs_label,
                          std::string declared_unit);

}  // namespace cyclecheck
