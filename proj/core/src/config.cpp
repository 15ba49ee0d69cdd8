#include "cyclecheck/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "cyclecheck/digest.hpp"
#include "cyclecheck/errors.hpp"
#include "cyclecheck/toml.hpp"

namespace cyclecheck {
namespace {

namespace fs = std::filesystem;
using toml::Table;
using toml::Value;

[[noreturn]] void bad(const std::string& message) { throw ConfigError(message); }

void reject_unknown(const Table& t, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : t.entries()) {
    bool recognized = false;
    for (const std::string_view k : known) {
      if (key == k) {
        recognized = true;
        break;
      }
    }
    if (!recognized) bad("unknown key \"" + key + "\" in [" + where + "]");
  }
}

const Table& as_table(const Value& v, const std::string& what) {
  if (!v.is_table()) bad(what + " must be a table");
  return v.table_value();
}

std::string req_string(const Table& t, std::string_view key,
                       const std::string& where) {
  const Value* v = t.find(key);
  if (!v) bad("[" + where + "] needs \"" + std::string(key) + "\"");
  if (!v->is_string())
    bad("\"" + std::string(key) + "\" in [" + where + "] must be a string");
  return v->string_value();
}

std::string opt_string(const Table& t, std::string_view key,
                       std::string fallback, const std::string& where) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (!v->is_string())
    bad("\"" + std::string(key) + "\" in [" + where + "] must be a string");
  return v->string_value();
}

double opt_number(const Table& t, std::string_view key, double fallback,
                  const std::string& where) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (!v->is_integer() && !v->is_float())
    bad("\"" + std::string(key) + "\" in [" + where + "] must be a number");
  return v->number();
}

bool opt_bool(const Table& t, std::string_view key, bool fallback,
              const std::string& where) {
  const Value* v = t.find(key);
  if (!v) return fallback;
  if (!v->is_boolean())
    bad("\"" + std::string(key) + "\" in [" + where + "] must be a boolean");
  return v->boolean_value();
}

std::vector<std::string> string_list(const Value& v, const std::string& what) {
  if (!v.is_array()) bad(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const Value& item : v.array_value()) {
    if (!item.is_string()) bad(what + " must hold only strings");
    out.push_back(item.string_value());
  }
  return out;
}

std::string resolve_path(std::string path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  const fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

// { key = "highway" } | { key, equals = "x" } | { key, not_equals = "x" }
// | { key, one_of = ["x", "y"] }
TagPredicate parse_predicate(const Value& v, const std::string& where) {
  const Table& t = as_table(v, "predicate in [" + where + "]");
  reject_unknown(t, where + " predicate", {"key", "equals", "not_equals", "one_of"});
  TagPredicate p;
  p.key = req_string(t, "key", where + " predicate");
  if (p.key.empty()) bad("predicate in [" + where + "] has an empty key");

  int forms = 0;
  if (const Value* eq = t.find("equals")) {
    if (!eq->is_string()) bad("\"equals\" in [" + where + "] must be a string");
    p.op = PredicateOp::Equals;
    p.values = {eq->string_value()};
    ++forms;
  }
  if (const Value* ne = t.find("not_equals")) {
    if (!ne->is_string())
      bad("\"not_equals\" in [" + where + "] must be a string");
    p.op = PredicateOp::NotEquals;
    p.values = {ne->string_value()};
    ++forms;
  }
  if (const Value* oo = t.find("one_of")) {
    p.op = PredicateOp::OneOf;
    p.values = string_list(*oo, "\"one_of\" in [" + where + "]");
    if (p.values.empty()) bad("\"one_of\" in [" + where + "] must not be empty");
    ++forms;
  }
  if (forms > 1)
    bad("predicate in [" + where +
        "] mixes equals/not_equals/one_of; pick one form");
  if (forms == 0) p.op = PredicateOp::Exists;
  return p;
}

std::vector<TagPredicate> parse_predicates(const Value& v,
                                           const std::string& where) {
  if (!v.is_array()) bad("[" + where + "] must be an array of predicates");
  std::vector<TagPredicate> out;
  for (const Value& item : v.array_value())
    out.push_back(parse_predicate(item, where));
  return out;
}

// Each rule: { when = [predicates...], value = ... }; omitted "when" is the
// catch-all clause.
template <typename T, typename ValueParser>
std::vector<ClassificationRule<T>> parse_rules(const Value& v,
                                               const std::string& where,
                                               ValueParser parse_value) {
  if (!v.is_array()) bad("[" + where + "] must be an array of rules");
  std::vector<ClassificationRule<T>> out;
  for (const Value& item : v.array_value()) {
    const Table& t = as_table(item, "rule in [" + where + "]");
    reject_unknown(t, where + " rule", {"when", "value"});
    ClassificationRule<T> rule;
    if (const Value* when = t.find("when"))
      rule.when = parse_predicates(*when, where);
    const Value* val = t.find("value");
    if (!val) bad("rule in [" + where + "] needs \"value\"");
    rule.value = parse_value(*val);
    out.push_back(std::move(rule));
  }
  return out;
}

Protection parse_protection(const Value& v, const std::string& where) {
  if (!v.is_string()) bad("protection value in [" + where + "] must be a string");
  const std::string& s = v.string_value();
  if (s == "protected") return Protection::Protected;
  if (s == "unprotected") return Protection::Unprotected;
  bad("protection value in [" + where +
      "] must be \"protected\" or \"unprotected\", got \"" + s + "\"");
}

MappingMethod parse_mapping(const Value& v, const std::string& where) {
  if (!v.is_string()) bad("mapping value in [" + where + "] must be a string");
  const std::string& s = v.string_value();
  if (s == "centerline") return MappingMethod::Centerline;
  if (s == "true_geometry") return MappingMethod::TrueGeometry;
  bad("mapping value in [" + where +
      "] must be \"centerline\" or \"true_geometry\", got \"" + s + "\"");
}

std::vector<AttributeMapping> parse_attributes(const Value& v,
                                               const std::string& where) {
  if (!v.is_array()) bad("\"attributes\" in [" + where + "] must be an array");
  std::vector<AttributeMapping> out;
  for (const Value& item : v.array_value()) {
    const Table& t = as_table(item, "attribute entry in [" + where + "]");
    reject_unknown(t, where + " attribute entry",
                   {"target", "property", "default"});
    AttributeMapping m;
    m.target = req_string(t, "target", where + " attribute entry");
    m.property = req_string(t, "property", where + " attribute entry");
    if (t.contains("default"))
      m.default_value = req_string(t, "default", where + " attribute entry");
    if (m.target.empty() || m.property.empty())
      bad("attribute entry in [" + where +
          "] needs non-empty target and property");
    out.push_back(std::move(m));
  }
  return out;
}

AffineTransform parse_transform(const Value& v, const std::string& where) {
  if (!v.is_array() || v.array_value().size() != 6)
    bad("\"transform\" in [" + where +
        "] must be an array of six numbers [a, b, c, d, e, f]");
  double c[6];
  for (std::size_t i = 0; i < 6; ++i) {
    const Value& item = v.array_value()[i];
    if (!item.is_integer() && !item.is_float())
      bad("\"transform\" in [" + where + "] must hold only numbers");
    c[i] = item.number();
  }
  return AffineTransform{c[0], c[1], c[2], c[3], c[4], c[5]};
}

DatasetConfig parse_dataset(const Table& t, DataRole role,
                            const std::string& base_dir) {
  const std::string where(to_string(role));
  reject_unknown(t, where,
                 {"path", "format", "transform", "attributes", "include",
                  "bridge_tunnel", "protection", "direction", "mapping_method"});
  DatasetConfig d;
  d.role = role;
  d.path = resolve_path(req_string(t, "path", where), base_dir);

  const std::string format = opt_string(
      t, "format", role == DataRole::Osm ? "osm_xml" : "geojson", where);
  if (format == "osm_xml") {
    d.format = InputFormat::OsmXml;
  } else if (format == "geojson") {
    d.format = InputFormat::GeoJson;
  } else {
    bad("\"format\" in [" + where +
        "] must be \"osm_xml\" or \"geojson\", got \"" + format + "\"");
  }

  d.ruleset = role == DataRole::Osm ? ClassificationRuleset::default_osm()
                                    : default_reference_ruleset();
  if (const Value* v = t.find("include"))
    d.ruleset.include_predicates = parse_predicates(*v, where + ".include");
  if (const Value* v = t.find("bridge_tunnel"))
    d.ruleset.bridge_tunnel_predicates =
        parse_predicates(*v, where + ".bridge_tunnel");
  if (const Value* v = t.find("protection"))
    d.ruleset.protection_rules = parse_rules<Protection>(
        *v, where + ".protection",
        [&](const Value& x) { return parse_protection(x, where); });
  if (const Value* v = t.find("direction"))
    d.ruleset.direction_rules = parse_rules<bool>(
        *v, where + ".direction", [&](const Value& x) {
          if (!x.is_boolean())
            bad("direction value in [" + where +
                "] must be a boolean (true = bidirectional)");
          return x.boolean_value();
        });
  if (const Value* v = t.find("mapping_method"))
    d.ruleset.mapping_method_rules = parse_rules<MappingMethod>(
        *v, where + ".mapping_method",
        [&](const Value& x) { return parse_mapping(x, where); });

  if (const Value* v = t.find("attributes")) {
    if (d.format != InputFormat::GeoJson)
      bad("\"attributes\" in [" + where + "] applies to geojson input only");
    d.attribute_map = parse_attributes(*v, where);
  }
  if (const Value* v = t.find("transform")) {
    if (d.format != InputFormat::OsmXml)
      bad("\"transform\" in [" + where + "] applies to osm_xml input only");
    d.transform = parse_transform(*v, where);
  }
  return d;
}

ContradictionRule parse_contradiction(const Value& v) {
  const Table& t = as_table(v, "contradiction rule in [tags]");
  reject_unknown(t, "tags contradiction rule", {"first", "second"});
  const Value* first = t.find("first");
  const Value* second = t.find("second");
  if (!first || !second)
    bad("contradiction rule in [tags] needs \"first\" and \"second\"");
  return ContradictionRule{parse_predicate(*first, "tags.contradictions"),
                           parse_predicate(*second, "tags.contradictions")};
}

void require_positive(double value, const std::string& name) {
  if (!(value > 0)) {
    std::ostringstream os;
    os << name << " must be positive, got " << value;
    bad(os.str());
  }
}

}  // namespace

std::string_view to_string(DataRole role) {
  return role == DataRole::Osm ? "osm" : "reference";
}

const DatasetConfig* RunConfig::dataset(DataRole role) const {
  for (const DatasetConfig& d : datasets) {
    if (d.role == role) return &d;
  }
  return nullptr;
}

void RunConfig::validate() const {
  if (study_area.path.empty()) bad("[study_area] path must not be empty");
  if (study_area.unit != "meter")
    bad("study area unit must be \"meter\", got \"" + study_area.unit + "\"");
  if (datasets.empty()) bad("configure at least one data set ([osm] or [reference])");
  bool seen_osm = false, seen_reference = false;
  for (const DatasetConfig& d : datasets) {
    bool& seen = d.role == DataRole::Osm ? seen_osm : seen_reference;
    if (seen) bad(std::string("duplicate [") + std::string(to_string(d.role)) + "] data set");
    seen = true;
    if (d.path.empty())
      bad(std::string("[") + std::string(to_string(d.role)) + "] path must not be empty");
    d.ruleset.validate();
  }

  require_positive(grid.cell_size, "grid cell_size_m");
  require_positive(thresholds.snap_tolerance, "thresholds snap_tolerance_m");
  require_positive(thresholds.overshoot, "thresholds overshoot_m");
  require_positive(thresholds.undershoot, "thresholds undershoot_m");
  require_positive(thresholds.component_gap, "thresholds component_gap_m");
  require_positive(matching.segment_length, "matching segment_length_m");
  require_positive(matching.buffer_distance, "matching buffer_distance_m");
  require_positive(matching.hausdorff_threshold, "matching hausdorff_threshold_m");
  require_positive(matching.angle_threshold, "matching angle_threshold_deg");
  if (matching.min_fraction < 0 || matching.min_fraction > 1) {
    std::ostringstream os;
    os << "matching min_fraction must lie in [0, 1], got " << matching.min_fraction;
    bad(os.str());
  }
  if (!(zipf_outlier_ratio > 1)) {
    std::ostringstream os;
    os << "compare zipf_outlier_ratio must exceed 1, got " << zipf_outlier_ratio;
    bad(os.str());
  }
  if (output.jobs < 0) bad("output jobs must not be negative");
  if (output.out_dir.empty()) bad("output dir must not be empty");

  for (const std::string& attr : compare_attributes) {
    if (attr != "protection" && attr != "bidirectional" &&
        attr != "mapping_method")
      bad("unknown compare attribute \"" + attr +
          "\"; known: protection, bidirectional, mapping_method");
  }
  for (const ContradictionRule& rule : tags.contradiction_rules) {
    if (rule.first == rule.second)
      bad("contradiction rule sides must differ (key \"" + rule.first.key + "\")");
  }
}

ClassificationRuleset default_reference_ruleset() {
  ClassificationRuleset rs;
  // Empty include list: GeoJSON ingestion keeps every feature. Reference
  // files are expected to contain nothing but bicycle infrastructure.
  rs.include_predicates = {};
  rs.protection_rules = {
      {{{"protection", PredicateOp::Equals, {"protected"}}}, Protection::Protected},
      {{}, Protection::Unprotected},
  };
  rs.direction_rules = {
      {{{"bidirectional", PredicateOp::Equals, {"no"}}}, false},
      {{}, true},
  };
  rs.mapping_method_rules = {
      {{{"mapping", PredicateOp::Equals, {"true_geometry"}}}, MappingMethod::TrueGeometry},
      {{}, MappingMethod::Centerline},
  };
  rs.bridge_tunnel_predicates = {
      {"bridge", PredicateOp::Exists, {}},
      {"tunnel", PredicateOp::Exists, {}},
  };
  return rs;
}

RunConfig parse_config(std::string_view text, const std::string& base_dir) {
  const Table root = toml::parse(text);
  reject_unknown(root, "config",
                 {"study_area", "grid", "thresholds", "osm", "reference",
                  "tags", "matching", "compare", "output"});

  RunConfig cfg;
  cfg.digest = sha256_hex(text);

  const Value* sa = root.find("study_area");
  if (!sa) bad("config needs a [study_area] table");
  {
    const Table& t = as_table(*sa, "[study_area]");
    reject_unknown(t, "study_area", {"path", "crs", "unit"});
    cfg.study_area.path =
        resolve_path(req_string(t, "path", "study_area"), base_dir);
    cfg.study_area.crs_label =
        opt_string(t, "crs", cfg.study_area.crs_label, "study_area");
    cfg.study_area.unit = opt_string(t, "unit", cfg.study_area.unit, "study_area");
  }

  if (const Value* v = root.find("grid")) {
    const Table& t = as_table(*v, "[grid]");
    reject_unknown(t, "grid", {"cell_size_m", "density_area"});
    cfg.grid.cell_size = opt_number(t, "cell_size_m", cfg.grid.cell_size, "grid");
    const std::string area = opt_string(t, "density_area", "full_cell", "grid");
    if (area == "full_cell") {
      cfg.grid.density_area = DensityArea::FullCell;
    } else if (area == "clipped_cell") {
      cfg.grid.density_area = DensityArea::ClippedCell;
    } else {
      bad("\"density_area\" in [grid] must be \"full_cell\" or "
          "\"clipped_cell\", got \"" + area + "\"");
    }
  }

  if (const Value* v = root.find("thresholds")) {
    const Table& t = as_table(*v, "[thresholds]");
    reject_unknown(t, "thresholds",
                   {"snap_tolerance_m", "overshoot_m", "undershoot_m",
                    "component_gap_m", "centerline_both_sides"});
    cfg.thresholds.snap_tolerance =
        opt_number(t, "snap_tolerance_m", cfg.thresholds.snap_tolerance, "thresholds");
    cfg.thresholds.overshoot =
        opt_number(t, "overshoot_m", cfg.thresholds.overshoot, "thresholds");
    cfg.thresholds.undershoot =
        opt_number(t, "undershoot_m", cfg.thresholds.undershoot, "thresholds");
    cfg.thresholds.component_gap =
        opt_number(t, "component_gap_m", cfg.thresholds.component_gap, "thresholds");
    if (const Value* p = t.find("centerline_both_sides"))
      cfg.thresholds.centerline_both_sides =
          parse_predicates(*p, "thresholds.centerline_both_sides");
  }

  if (const Value* v = root.find("osm"))
    cfg.datasets.push_back(
        parse_dataset(as_table(*v, "[osm]"), DataRole::Osm, base_dir));
  if (const Value* v = root.find("reference"))
    cfg.datasets.push_back(parse_dataset(as_table(*v, "[reference]"),
                                         DataRole::Reference, base_dir));

  if (const Value* v = root.find("tags")) {
    const Table& t = as_table(*v, "[tags]");
    reject_unknown(t, "tags",
                   {"tags_of_interest", "pattern_keys", "contradictions"});
    if (const Value* keys = t.find("tags_of_interest"))
      cfg.tags.tags_of_interest =
          string_list(*keys, "\"tags_of_interest\" in [tags]");
    if (const Value* keys = t.find("pattern_keys")) {
      cfg.tags.pattern_keys = string_list(*keys, "\"pattern_keys\" in [tags]");
    } else {
      cfg.tags.pattern_keys = cfg.tags.tags_of_interest;
    }
    if (const Value* rules = t.find("contradictions")) {
      if (!rules->is_array()) bad("\"contradictions\" in [tags] must be an array");
      for (const Value& item : rules->array_value())
        cfg.tags.contradiction_rules.push_back(parse_contradiction(item));
    }
  }

  if (const Value* v = root.find("matching")) {
    const Table& t = as_table(*v, "[matching]");
    reject_unknown(t, "matching",
                   {"segment_length_m", "buffer_distance_m",
                    "hausdorff_threshold_m", "angle_threshold_deg",
                    "min_fraction", "compare_attributes"});
    cfg.matching.segment_length =
        opt_number(t, "segment_length_m", cfg.matching.segment_length, "matching");
    cfg.matching.buffer_distance =
        opt_number(t, "buffer_distance_m", cfg.matching.buffer_distance, "matching");
    cfg.matching.hausdorff_threshold = opt_number(
        t, "hausdorff_threshold_m", cfg.matching.hausdorff_threshold, "matching");
    cfg.matching.angle_threshold = opt_number(
        t, "angle_threshold_deg", cfg.matching.angle_threshold, "matching");
    cfg.matching.min_fraction =
        opt_number(t, "min_fraction", cfg.matching.min_fraction, "matching");
    if (const Value* attrs = t.find("compare_attributes"))
      cfg.compare_attributes =
          string_list(*attrs, "\"compare_attributes\" in [matching]");
  }

  if (const Value* v = root.find("compare")) {
    const Table& t = as_table(*v, "[compare]");
    reject_unknown(t, "compare", {"zipf_outlier_ratio"});
    cfg.zipf_outlier_ratio =
        opt_number(t, "zipf_outlier_ratio", cfg.zipf_outlier_ratio, "compare");
  }

  if (const Value* v = root.find("output")) {
    const Table& t = as_table(*v, "[output]");
    reject_unknown(t, "output", {"dir", "overwrite", "jobs"});
    cfg.output.out_dir =
        resolve_path(opt_string(t, "dir", cfg.output.out_dir, "output"), base_dir);
    cfg.output.overwrite = opt_bool(t, "overwrite", cfg.output.overwrite, "output");
    const double jobs = opt_number(t, "jobs", 0.0, "output");
    if (jobs != static_cast<int>(jobs))
      bad("\"jobs\" in [output] must be an integer");
    cfg.output.jobs = static_cast<int>(jobs);
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) bad("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string base_dir = fs::path(path).parent_path().string();
  return parse_config(buffer.str(), base_dir);
}

}  // namespace cyclecheck
