#include "cyclecheck/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/runlog.hpp"

namespace cyclecheck {

namespace pt = boost::property_tree;
using nlohmann::json;

std::string_view to_string(Protection p) {
  return p == Protection::Protected ? "protected" : "unprotected";
}

std::string_view to_string(MappingMethod m) {
  return m == MappingMethod::Centerline ? "centerline" : "true_geometry";
}

bool TagPredicate::matches(const TagMap& tags) const {
  const auto it = tags.find(key);
  switch (op) {
    case PredicateOp::Exists:
      return it != tags.end();
    case PredicateOp::Equals:
      return it != tags.end() && !values.empty() && it->second == values[0];
    case PredicateOp::NotEquals:
      // absent counts as "not equal"
      return it == tags.end() || values.empty() || it->second != values[0];
    case PredicateOp::OneOf:
      return it != tags.end() &&
             std::find(values.begin(), values.end(), it->second) != values.end();
  }
  return false;
}

bool matches_all(const std::vector<TagPredicate>& conjunction,
                 const TagMap& tags) {
  for (const TagPredicate& p : conjunction) {
    if (!p.matches(tags)) return false;
  }
  return true;
}

bool matches_any(const std::vector<TagPredicate>& disjunction,
                 const TagMap& tags) {
  for (const TagPredicate& p : disjunction) {
    if (p.matches(tags)) return true;
  }
  return false;
}

namespace {

void validate_predicates(const std::vector<TagPredicate>& preds,
                         const char* where) {
  for (const TagPredicate& p : preds) {
    if (p.key.empty()) {
      throw ConfigError(std::string("predicate with empty tag key in ") + where);
    }
    if ((p.op == PredicateOp::Equals || p.op == PredicateOp::NotEquals) &&
        p.values.size() != 1) {
      throw ConfigError(std::string("equals/not-equals predicate needs exactly "
                                    "one value in ") + where);
    }
    if (p.op == PredicateOp::OneOf && p.values.empty()) {
      throw ConfigError(std::string("one-of predicate needs values in ") + where);
    }
  }
}

template <typename T>
void validate_rules(const std::vector<ClassificationRule<T>>& rules,
                    const char* name) {
  if (rules.empty()) {
    throw ConfigError(std::string(name) + " rule list must not be empty");
  }
  if (!rules.back().when.empty()) {
    throw ConfigError(std::string(name) +
                      " rule list must end with a default rule (no 'when')");
  }
  for (const auto& r : rules) validate_predicates(r.when, name);
}

template <typename T>
T first_match(const std::vector<ClassificationRule<T>>& rules,
              const TagMap& tags) {
  for (const auto& r : rules) {
    if (matches_all(r.when, tags)) return r.value;
  }
  // unreachable: validated rule lists end with a default rule
  return rules.back().value;
}

}  // namespace

void ClassificationRuleset::validate() const {
  validate_predicates(include_predicates, "include");
  validate_predicates(bridge_tunnel_predicates, "grade_separated");
  validate_rules(protection_rules, "protection");
  validate_rules(direction_rules, "direction");
  validate_rules(mapping_method_rules, "mapping");
}

ClassificationRuleset ClassificationRuleset::default_osm() {
  ClassificationRuleset rs;
  rs.include_predicates = {
      {"highway", PredicateOp::Equals, {"cycleway"}},
      {"cycleway", PredicateOp::OneOf, {"lane", "track", "opposite_lane", "opposite_track"}},
      {"cycleway:left", PredicateOp::OneOf, {"lane", "track"}},
      {"cycleway:right", PredicateOp::OneOf, {"lane", "track"}},
      {"cycleway:both", PredicateOp::OneOf, {"lane", "track"}},
  };
  rs.protection_rules = {
      {{{"highway", PredicateOp::Equals, {"cycleway"}}}, Protection::Protected},
      {{{"cycleway", PredicateOp::OneOf, {"track", "opposite_track"}}}, Protection::Protected},
      {{}, Protection::Unprotected},
  };
  rs.direction_rules = {
      {{{"oneway", PredicateOp::Equals, {"yes"}}}, false},
      {{}, true},
  };
  rs.mapping_method_rules = {
      {{{"highway", PredicateOp::Equals, {"cycleway"}}}, MappingMethod::TrueGeometry},
      {{}, MappingMethod::Centerline},
  };
  rs.bridge_tunnel_predicates = {
      {"bridge", PredicateOp::Exists, {}},
      {"tunnel", PredicateOp::Exists, {}},
  };
  return rs;
}

namespace {

geo::Polyline dedup_consecutive(const geo::Polyline& pts) {
  geo::Polyline out;
  for (const geo::Point& p : pts) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<RawFeature> parse_osm_xml(std::string_view bytes,
                                      const ClassificationRuleset& ruleset,
                                      const AffineTransform& transform,
                                      RunLog* log) {
  pt::ptree tree;
  std::istringstream in{std::string(bytes)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("osm xml parse error at line " +
                     std::to_string(e.line()) + ": " + e.message());
  }

  const auto osm = tree.get_child_optional("osm");
  if (!osm) {
    throw ParseError("osm xml parse error at line 1: missing <osm> root element");
  }

  std::unordered_map<std::int64_t, geo::Point> node_coords;
  for (const auto& [name, child] : *osm) {
    if (name != "node") continue;
    const auto id = child.get_optional<std::int64_t>("<xmlattr>.id");
    const auto lat = child.get_optional<double>("<xmlattr>.lat");
    const auto lon = child.get_optional<double>("<xmlattr>.lon");
    if (!id || !lat || !lon) {
      throw ParseError("osm node missing id/lat/lon attribute");
    }
    node_coords[*id] = transform.apply(*lon, *lat);
  }

  std::vector<RawFeature> features;
  std::set<std::string> seen_ids;
  for (const auto& [name, child] : *osm) {
    if (name != "way") continue;
    const auto id = child.get_optional<std::string>("<xmlattr>.id");
    if (!id) throw ParseError("osm way missing id attribute");

    TagMap tags;
    geo::Polyline line;
    for (const auto& [cname, cchild] : child) {
      if (cname == "tag") {
        const auto k = cchild.get_optional<std::string>("<xmlattr>.k");
        const auto v = cchild.get_optional<std::string>("<xmlattr>.v");
        if (k && v) tags[*k] = *v;
      } else if (cname == "nd") {
        const auto ref = cchild.get_optional<std::int64_t>("<xmlattr>.ref");
        if (!ref) throw ParseError("osm way " + *id + " has <nd> without ref");
        const auto it = node_coords.find(*ref);
        if (it == node_coords.end()) {
          throw ParseError("osm way " + *id + " references missing node " +
                           std::to_string(*ref));
        }
        line.push_back(it->second);
      }
    }

    if (!matches_any(ruleset.include_predicates, tags)) continue;

    if (!seen_ids.insert(*id).second) {
      throw ParseError("duplicate way id " + *id + " in osm input");
    }
    line = dedup_consecutive(line);
    if (line.size() < 2) {
      if (log != nullptr) log->warn("degenerate_way_dropped", "way " + *id);
      continue;
    }
    features.push_back(RawFeature{*id, std::move(line), std::move(tags)});
  }
  return features;
}

namespace {

std::string json_scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    std::ostringstream ss;
    ss << v.get<double>();
    return ss.str();
  }
  return v.dump();
}

geo::Polyline coords_to_polyline(const json& coords, const std::string& fid) {
  geo::Polyline line;
  for (const auto& c : coords) {
    if (!c.is_array() || c.size() < 2) {
      throw ParseError("feature " + fid + ": malformed coordinate");
    }
    line.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return dedup_consecutive(line);
}

TagMap map_properties(const json& props,
                      const std::vector<AttributeMapping>& attribute_map,
                      const std::string& fid) {
  TagMap tags;
  for (const AttributeMapping& m : attribute_map) {
    if (props.is_object() && props.contains(m.property) &&
        !props[m.property].is_null()) {
      tags[m.target] = json_scalar_to_string(props[m.property]);
    } else if (m.default_value) {
      tags[m.target] = *m.default_value;
    } else {
      throw ParseError("feature " + fid + ": missing mapped property '" +
                       m.property + "' and no default for '" + m.target + "'");
    }
  }
  return tags;
}

}  // namespace

std::vector<RawFeature> parse_geojson(
    std::string_view bytes, const std::vector<AttributeMapping>& attribute_map,
    const ClassificationRuleset& ruleset, RunLog* log) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("geojson parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features")) {
    throw ParseError("geojson input is not a FeatureCollection");
  }

  std::vector<RawFeature> features;
  std::set<std::string> seen_ids;
  std::size_t index = 0;
  for (const auto& feat : doc["features"]) {
    std::string fid;
    if (feat.contains("id")) {
      fid = json_scalar_to_string(feat["id"]);
    } else if (feat.contains("properties") && feat["properties"].is_object() &&
               feat["properties"].contains("id")) {
      fid = json_scalar_to_string(feat["properties"]["id"]);
    } else {
      fid = "feature#" + std::to_string(index);
    }
    ++index;

    if (!feat.contains("geometry") || feat["geometry"].is_null()) {
      throw ParseError("feature " + fid + ": missing geometry");
    }
    const json& geom = feat["geometry"];
    const std::string type = geom.value("type", "");
    const json props = feat.value("properties", json::object());
    TagMap tags = map_properties(props, attribute_map, fid);

    std::vector<geo::Polyline> parts;
    if (type == "LineString") {
      parts.push_back(coords_to_polyline(geom["coordinates"], fid));
    } else if (type == "MultiLineString") {
      for (const auto& piece : geom["coordinates"]) {
        parts.push_back(coords_to_polyline(piece, fid));
      }
    } else {
      throw ParseError("feature " + fid + ": geometry type '" + type +
                       "' is not a line");
    }

    const bool multi = type == "MultiLineString";
    for (std::size_t p = 0; p < parts.size(); ++p) {
      std::string part_id = multi ? fid + "#" + std::to_string(p) : fid;
      if (parts[p].size() < 2) {
        if (log != nullptr) {
          log->warn("degenerate_feature_dropped", "feature " + part_id);
        }
        continue;
      }
      if (!matches_any(ruleset.include_predicates, tags) &&
          !ruleset.include_predicates.empty()) {
        continue;
      }
      if (!seen_ids.insert(part_id).second) {
        throw ParseError("duplicate feature id " + part_id + " in geojson input");
      }
      features.push_back(RawFeature{std::move(part_id), std::move(parts[p]), tags});
    }
  }
  return features;
}

std::vector<EdgeRecord> classify(const std::vector<RawFeature>& features,
                                 const ClassificationRuleset& ruleset) {
  ruleset.validate();
  std::vector<EdgeRecord> edges;
  edges.reserve(features.size());
  std::int64_t next_id = 0;
  for (const RawFeature& f : features) {
    EdgeRecord e;
    e.edge_id = next_id++;
    e.source_id = f.source_id;
    e.geometry = f.geometry;
    e.tags = f.tags;
    e.protection = first_match(ruleset.protection_rules, f.tags);
    e.bidirectional = first_match(ruleset.direction_rules, f.tags);
    e.mapping_method = first_match(ruleset.mapping_method_rules, f.tags);
    e.grade_separated = matches_any(ruleset.bridge_tunnel_predicates, f.tags);
    edges.push_back(std::move(e));
  }
  return edges;
}

std::vector<EdgeRecord> clip_to_study_area(const std::vector<EdgeRecord>& edges,
                                           const StudyArea& area,
                                           RunLog* log) {
  std::vector<EdgeRecord> out;
  std::int64_t next_id = 0;
  for (const EdgeRecord& e : edges) {
    const auto parts = geo::clip_polyline_to_polygon(e.geometry, area.boundary);
    for (const auto& part : parts) {
      if (geo::length(part) <= 0.0) {
        if (log != nullptr) {
          log->warn("degenerate_clip_dropped", "source " + e.source_id);
        }
        continue;
      }
      EdgeRecord clipped = e;
      clipped.edge_id = next_id++;
      clipped.geometry = part;
      out.push_back(std::move(clipped));
    }
  }
  if (out.empty() && log != nullptr) {
    log->warn("empty_clip_result", "no edges intersect the study area");
  }
  return out;
}

StudyArea load_study_area(const std::string& path, std::string crs_label,
                          std::string declared_unit) {
  if (declared_unit != "meter") {
    throw ConfigError("study area unit must be \"meter\", got \"" +
                      declared_unit + "\"");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open study area file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();

  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("study area parse error: ") + e.what());
  }

  const json* geom = nullptr;
  if (doc.value("type", "") == "FeatureCollection") {
    if (!doc.contains("features") || doc["features"].empty()) {
      throw ParseError("study area FeatureCollection is empty");
    }
    geom = &doc["features"][0]["geometry"];
  } else if (doc.value("type", "") == "Feature") {
    geom = &doc["geometry"];
  } else {
    geom = &doc;
  }
  if (geom == nullptr || geom->value("type", "") != "Polygon") {
    throw ParseError("study area must be a single Polygon");
  }

  const json& rings = (*geom)["coordinates"];
  if (!rings.is_array() || rings.empty()) {
    throw ParseError("study area polygon has no rings");
  }
  if (rings.size() > 1) {
    throw ParseError("study area polygon must not have holes");
  }

  geo::Polygon poly;
  for (const auto& c : rings[0]) {
    poly.ring.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  // GeoJSON rings repeat the first vertex; we store open rings
  if (poly.ring.size() >= 2 && poly.ring.front() == poly.ring.back()) {
    poly.ring.pop_back();
  } else {
    throw ParseError("study area ring is not closed");
  }
  if (poly.ring.size() < 3 || geo::polygon_area(poly) <= 0.0) {
    throw ParseError("study area polygon has no area");
  }
  if (!geo::polygon_is_simple(poly)) {
    throw ParseError("study area polygon is self-intersecting");
  }
  return StudyArea{std::move(poly), std::move(crs_label), std::move(declared_unit)};
}

}  // namespace cyclecheck
