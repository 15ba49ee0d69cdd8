#include <array>
#include <map>
#include <string>
#include <vector>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/json_writer.hpp"
#include "cyclecheck/report.hpp"
#include "report_detail.hpp"

namespace cyclecheck {

namespace {

void point_coords(JsonWriter& w, const geo::Point& p) {
  w.begin_array().value(p.x).value(p.y).end_array();
}

void line_coords(JsonWriter& w, const geo::Polyline& line) {
  w.begin_array();
  for (const geo::Point& p : line) point_coords(w, p);
  w.end_array();
}

void box_ring_coords(JsonWriter& w, const geo::Box& b) {
  w.begin_array().begin_array();
  point_coords(w, {b.min.x, b.min.y});
  point_coords(w, {b.max.x, b.min.y});
  point_coords(w, {b.max.x, b.max.y});
  point_coords(w, {b.min.x, b.max.y});
  point_coords(w, {b.min.x, b.min.y});
  w.end_array().end_array();
}

void geometry_point(JsonWriter& w, const geo::Point& p) {
  w.begin_object().key("type").value("Point").key("coordinates");
  point_coords(w, p);
  w.end_object();
}

void geometry_line(JsonWriter& w, const geo::Polyline& line) {
  w.begin_object().key("type").value("LineString").key("coordinates");
  line_coords(w, line);
  w.end_object();
}

void geometry_box(JsonWriter& w, const geo::Box& b) {
  w.begin_object().key("type").value("Polygon").key("coordinates");
  box_ring_coords(w, b);
  w.end_object();
}

void id_array(JsonWriter& w, const std::vector<std::int64_t>& ids) {
  w.begin_array();
  for (std::int64_t id : ids) w.value(id);
  w.end_array();
}

std::map<std::int64_t, const CellMetrics*> by_cell(
    const std::vector<CellMetrics>& metrics) {
  std::map<std::int64_t, const CellMetrics*> out;
  for (const CellMetrics& m : metrics) out[m.cell_id] = &m;
  return out;
}

const geo::Box& cell_bounds(const AnalysisGrid& grid, std::int64_t cell_id) {
  const auto idx = grid.index_of(cell_id);
  if (!idx) throw OutputError("metric references a cell the grid does not retain");
  return grid.cells[*idx].bounds;
}

double largest_share_pct(const NetworkBundle& bundle) {
  const auto& comps = bundle.component_set.components;
  const double total = bundle.summary.total_infrastructure_length;
  if (comps.empty() || total <= 0.0) return 0.0;
  return comps.front().infrastructure_length / total * 100.0;
}

void network_block(JsonWriter& w, const GraphSummary& s) {
  w.key("network").begin_object();
  w.key("node_count").value(s.node_count);
  w.key("edge_count").value(s.edge_count);
  w.key("total_geometric_length_m").value(s.total_geometric_length);
  w.key("total_infrastructure_length_m").value(s.total_infrastructure_length);
  w.key("protected_edge_count").value(s.protected_edge_count);
  w.key("unprotected_edge_count").value(s.unprotected_edge_count);
  w.key("protected_infrastructure_length_m")
      .value(s.protected_infrastructure_length);
  w.key("unprotected_infrastructure_length_m")
      .value(s.unprotected_infrastructure_length);
  w.end_object();
}

void topology_block(JsonWriter& w, const IntrinsicSection& s) {
  const NetworkBundle& b = *s.bundle;
  w.key("topology").begin_object();
  w.key("dangling_node_count").value(b.dangling.node_ids.size());
  w.key("overshoot_count").value(s.overshoot_edge_ids.size());
  w.key("undershoot_count").value(s.undershoots.size());
  w.key("missing_intersection_count").value(s.missing_intersections.size());
  w.key("component_gap_count").value(s.component_gaps.size());
  w.key("component_count").value(b.component_set.components.size());
  w.key("largest_component_share_pct").value(largest_share_pct(b));
  w.key("zipf").begin_array();
  for (const auto& [rank, length] : zipf_series(b.component_set)) {
    w.begin_array().value(rank).value(length).end_array();
  }
  w.end_array();
  w.end_object();
}

void tags_block(JsonWriter& w, const IntrinsicSection& s) {
  w.key("tags").begin_object();
  w.key("analyzed").value(s.tags_analyzed);
  if (s.tags_analyzed) {
    const NetworkBundle& b = *s.bundle;
    // infrastructure missing each key, accumulated from the per-key flags
    std::vector<double> missing_len(s.tag_keys.size(), 0.0);
    for (const TagFlag& f : s.missing_tags.flags) {
      if (f.rule_index < missing_len.size()) {
        missing_len[f.rule_index] +=
            b.graph.edges()[static_cast<std::size_t>(f.edge_id)]
                .infrastructure_length;
      }
    }
    const double total = b.summary.total_infrastructure_length;
    w.key("coverage_pct").begin_object();
    for (std::size_t i = 0; i < s.tag_keys.size(); ++i) {
      const double pct =
          total > 0.0 ? (total - missing_len[i]) / total * 100.0 : 0.0;
      w.key(s.tag_keys[i]).value(pct);
    }
    w.end_object();
    w.key("missing_tag_flag_count").value(s.missing_tags.flags.size());
    w.key("contradiction_flag_count").value(s.contradiction_flags.size());
    w.key("pattern_keys").begin_array();
    for (const std::string& k : s.pattern_keys) w.value(k);
    w.end_array();
    w.key("pattern_cell_count").value(s.patterns.size());
  }
  w.end_object();
}

void grid_block(JsonWriter& w, const AnalysisGrid& grid) {
  w.key("grid").begin_object();
  w.key("cell_size_m").value(grid.cell_size);
  w.key("cols").value(grid.cols);
  w.key("rows").value(grid.rows);
  w.key("retained_cells").value(grid.cells.size());
  w.key("signature").value(grid.signature());
  w.end_object();
}

void dataset_block(JsonWriter& w, const IntrinsicSection& s) {
  w.key("dataset").begin_object();
  w.key("label").value(s.label);
  w.key("input_path").value(s.input_path);
  w.key("input_digest").value(s.input_digest);
  w.end_object();
}

}  // namespace

std::string network_geojson(const NetworkGraph& graph,
                            const ComponentSet& components) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (const GraphEdge& e : graph.edges()) {
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("edge_id").value(e.edge_id);
    w.key("source_ids").begin_array();
    for (const std::string& id : e.source_ids) w.value(id);
    w.end_array();
    w.key("protection").value(to_string(e.protection));
    w.key("bidirectional").value(e.bidirectional);
    w.key("mapping_method").value(to_string(e.mapping_method));
    w.key("grade_separated").value(e.grade_separated);
    w.key("multiplier").value(static_cast<std::int64_t>(e.multiplier));
    w.key("geometric_length_m").value(e.geometric_length);
    w.key("infrastructure_length_m").value(e.infrastructure_length);
    const auto idx = static_cast<std::size_t>(e.edge_id);
    w.key("component_id");
    if (idx < components.edge_component.size()) {
      w.value(components.edge_component[idx]);
    } else {
      w.null();
    }
    w.end_object();
    w.key("geometry");
    geometry_line(w, e.geometry);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string grid_geojson(const IntrinsicSection& section,
                         const AnalysisGrid& grid) {
  const NetworkBundle& b = *section.bundle;
  const auto dangling = by_cell(b.dangling.per_cell);
  const auto reach = by_cell(b.reachability);
  const auto coverage = by_cell(section.missing_tags.coverage);
  std::map<std::int64_t, const CellPattern*> patterns;
  for (const CellPattern& p : section.patterns) patterns[p.cell_id] = &p;

  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (const CellMetrics& m : b.density) {
    const auto idx = grid.index_of(m.cell_id);
    if (!idx) throw OutputError("metric references a cell the grid does not retain");
    const GridCell& cell = grid.cells[*idx];
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("cell_id").value(m.cell_id);
    w.key("clipped_area_m2").value(cell.clipped_area);
    const double* len = m.get("infra_length_m");
    const double* density = m.get("infra_density_m_per_km2");
    const double* nodes = m.get("node_count");
    w.key("infra_length_m").value(len ? *len : 0.0);
    w.key("infra_density_m_per_km2").value(density ? *density : 0.0);
    w.key("node_count")
        .value(static_cast<std::int64_t>(nodes ? *nodes : 0.0));
    const auto dang = dangling.find(m.cell_id);
    const double* dang_count =
        dang != dangling.end() ? dang->second->get("dangling_node_count")
                               : nullptr;
    w.key("dangling_node_count")
        .value(static_cast<std::int64_t>(dang_count ? *dang_count : 0.0));
    w.key("reachable_cells_pct");
    const auto rc = reach.find(m.cell_id);
    const double* pct =
        rc != reach.end() ? rc->second->get("reachable_cells_pct") : nullptr;
    if (pct) {
      w.value(*pct);
    } else {
      w.null();
    }
    if (section.tags_analyzed) {
      const auto cov = coverage.find(m.cell_id);
      for (const std::string& key : section.tag_keys) {
        const std::string name = "coverage_" + key + "_pct";
        w.key(name);
        const double* v =
            cov != coverage.end() ? cov->second->get(name) : nullptr;
        if (v) {
          w.value(*v);
        } else {
          w.null();
        }
      }
      const auto pat = patterns.find(m.cell_id);
      w.key("dominant_pattern");
      if (pat != patterns.end()) {
        w.value(pat->second->dominant);
        w.key("dominant_pattern_share_pct").value(pat->second->share_pct);
        w.key("dominant_pattern_length_m").value(pat->second->length_m);
      } else {
        w.null();
        w.key("dominant_pattern_share_pct").null();
        w.key("dominant_pattern_length_m").null();
      }
    }
    w.end_object();
    w.key("geometry");
    geometry_box(w, cell.bounds);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string comparison_grid_geojson(const ComparisonResult& result,
                                    const AnalysisGrid& grid) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (const CellDelta& c : result.cell_deltas) {
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("cell_id").value(c.cell_id);
    const bool both = c.density_a && c.density_b;
    w.key("present").value(both ? "both" : (c.density_a ? "a" : "b"));
    const auto opt = [&w](const char* name, const std::optional<double>& v) {
      w.key(name);
      if (v) {
        w.value(*v);
      } else {
        w.null();
      }
    };
    opt("density_a_m_per_km2", c.density_a);
    opt("density_b_m_per_km2", c.density_b);
    opt("density_diff_m_per_km2", c.density_diff);
    opt("reachable_a_pct", c.reachable_a);
    opt("reachable_b_pct", c.reachable_b);
    opt("reachable_diff_pp", c.reachable_diff);
    w.end_object();
    w.key("geometry");
    geometry_box(w, cell_bounds(grid, c.cell_id));
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string intrinsic_summary_json(const QualityReport& report,
                                   const IntrinsicSection& section) {
  JsonWriter w;
  w.begin_object();
  w.key("tool_version").value(report.tool_version);
  w.key("config_digest").value(report.config_digest);
  dataset_block(w, section);
  grid_block(w, *report.grid);
  network_block(w, section.bundle->summary);
  topology_block(w, section);
  tags_block(w, section);
  w.end_object();
  return w.take();
}

std::string comparison_summary_json(const QualityReport& report) {
  const ExtrinsicSection& x = *report.extrinsic;
  JsonWriter w;
  w.begin_object();
  w.key("tool_version").value(report.tool_version);
  w.key("config_digest").value(report.config_digest);
  w.key("datasets").begin_array();
  for (const IntrinsicSection& s : report.sections) {
    w.begin_object();
    w.key("label").value(s.label);
    w.key("input_path").value(s.input_path);
    w.key("input_digest").value(s.input_digest);
    network_block(w, s.bundle->summary);
    topology_block(w, s);
    w.end_object();
  }
  w.end_array();
  grid_block(w, *report.grid);

  w.key("global_deltas").begin_array();
  for (const MetricDelta& d : x.comparison.global_deltas) {
    w.begin_object();
    w.key("name").value(d.name);
    w.key("a").value(d.value_a);
    w.key("b").value(d.value_b);
    w.key("diff").value(d.difference);
    w.end_object();
  }
  w.end_array();

  const auto stats = [&w](const char* name, const DeltaStats& s) {
    w.key(name).begin_object();
    w.key("two_sided_cells").value(s.two_sided_cells);
    w.key("only_a_cells").value(s.only_a_cells);
    w.key("only_b_cells").value(s.only_b_cells);
    w.key("mean").value(s.mean);
    w.key("median").value(s.median);
    w.end_object();
  };
  stats("density_delta_stats", x.comparison.density_stats);
  stats("reachability_delta_stats", x.comparison.reachability_stats);

  w.key("zipf").begin_object();
  const auto series = [&w](const char* name, const auto& s) {
    w.key(name).begin_array();
    for (const auto& [rank, length] : s) {
      w.begin_array().value(rank).value(length).end_array();
    }
    w.end_array();
  };
  series("series_a", x.comparison.zipf.series_a);
  series("series_b", x.comparison.zipf.series_b);
  w.key("outlier_a").value(x.comparison.zipf.outlier_a);
  w.key("outlier_b").value(x.comparison.zipf.outlier_b);
  w.key("completeness_hint").value(x.comparison.zipf.completeness_hint);
  w.end_object();

  w.key("matching").begin_object();
  w.key("params").begin_object();
  w.key("segment_length_m").value(x.params.segment_length);
  w.key("buffer_distance_m").value(x.params.buffer_distance);
  w.key("hausdorff_threshold_m").value(x.params.hausdorff_threshold);
  w.key("angle_threshold_deg").value(x.params.angle_threshold);
  w.key("min_fraction").value(x.params.min_fraction);
  w.end_object();
  w.key("directions").begin_array();
  detail::matching_direction_json(w, x, true);
  detail::matching_direction_json(w, x, false);
  w.end_array();
  w.key("unmatched").begin_object();
  w.key("count_a").value(x.unmatched.unmatched_a.size());
  w.key("count_b").value(x.unmatched.unmatched_b.size());
  w.end_object();
  w.end_object();

  w.end_object();
  return w.take();
}

namespace detail {

void matching_direction_json(JsonWriter& w, const ExtrinsicSection& x,
                             bool a_to_b) {
  const auto& summaries = a_to_b ? x.matches_ab : x.matches_ba;
  const NetworkBundle& source = a_to_b ? *x.bundle_a : *x.bundle_b;
  std::size_t matched = 0;
  double matched_infra = 0.0;
  std::map<std::string, std::array<std::size_t, 3>> agreement;
  for (const std::string& attr : x.compare_attributes) agreement[attr] = {};
  for (const EdgeMatchSummary& e : summaries) {
    if (e.matched) {
      ++matched;
      matched_infra += source.graph.edges()[static_cast<std::size_t>(e.edge_id)]
                           .infrastructure_length;
    }
    for (const auto& [attr, verdict] : e.attribute_agreement) {
      auto it = agreement.find(attr);
      if (it != agreement.end()) {
        it->second[static_cast<std::size_t>(verdict)] += 1;
      }
    }
  }
  const double total = source.summary.total_infrastructure_length;
  w.begin_object();
  w.key("source").value(a_to_b ? x.label_a : x.label_b);
  w.key("target").value(a_to_b ? x.label_b : x.label_a);
  w.key("edge_count").value(summaries.size());
  w.key("matched_edge_count").value(matched);
  w.key("matched_infrastructure_pct")
      .value(total > 0.0 ? matched_infra / total * 100.0 : 0.0);
  w.key("agreement").begin_object();
  for (const std::string& attr : x.compare_attributes) {
    const auto& counts = agreement[attr];
    w.key(attr).begin_object();
    w.key("agree").value(counts[0]);
    w.key("disagree").value(counts[1]);
    w.key("unknown").value(counts[2]);
    w.end_object();
  }
  w.end_object();
  w.end_object();
}

std::string topology_flags_geojson(const std::vector<TopologyFlag>& flags) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (const TopologyFlag& f : flags) {
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("kind").value(to_string(f.kind));
    w.key("node_ids");
    id_array(w, f.node_ids);
    w.key("edge_ids");
    id_array(w, f.edge_ids);
    w.key("distance_m").value(f.distance);
    w.end_object();
    w.key("geometry");
    if (f.geometry.size() == 1) {
      geometry_point(w, f.geometry.front());
    } else {
      geometry_line(w, f.geometry);
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string dangling_geojson(const NetworkBundle& bundle) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (std::int64_t nid : bundle.dangling.node_ids) {
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("kind").value("dangling_node");
    w.key("node_id").value(nid);
    w.end_object();
    w.key("geometry");
    geometry_point(w, bundle.graph.nodes()[static_cast<std::size_t>(nid)].position);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string overshoots_geojson(const IntrinsicSection& section) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (std::int64_t eid : section.overshoot_edge_ids) {
    const GraphEdge& e =
        section.bundle->graph.edges()[static_cast<std::size_t>(eid)];
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("kind").value("overshoot");
    w.key("edge_id").value(eid);
    w.key("length_m").value(e.geometric_length);
    w.end_object();
    w.key("geometry");
    geometry_line(w, e.geometry);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string tag_flags_geojson(const IntrinsicSection& section,
                              const std::vector<TagFlag>& flags) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (const TagFlag& f : flags) {
    const GraphEdge& e =
        section.bundle->graph.edges()[static_cast<std::size_t>(f.edge_id)];
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("kind").value(to_string(f.kind));
    w.key("edge_id").value(f.edge_id);
    w.key("detail").value(f.detail);
    w.key("rule_index").value(f.rule_index);
    w.end_object();
    w.key("geometry");
    geometry_line(w, e.geometry);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string unmatched_geojson(const NetworkBundle& bundle,
                              const std::vector<std::int64_t>& edge_ids) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("FeatureCollection");
  w.key("features").begin_array();
  for (std::int64_t eid : edge_ids) {
    const GraphEdge& e = bundle.graph.edges()[static_cast<std::size_t>(eid)];
    w.begin_object();
    w.key("type").value("Feature");
    w.key("properties").begin_object();
    w.key("edge_id").value(eid);
    w.key("infrastructure_length_m").value(e.infrastructure_length);
    w.key("protection").value(to_string(e.protection));
    w.end_object();
    w.key("geometry");
    geometry_line(w, e.geometry);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string match_csv(const ExtrinsicSection& x, bool a_to_b) {
  const auto& summaries = a_to_b ? x.matches_ab : x.matches_ba;
  std::string out = "edge_id,matched_fraction,status";
  for (const std::string& attr : x.compare_attributes) {
    out += ",agreement_" + attr;
  }
  out += "\n";
  for (const EdgeMatchSummary& e : summaries) {
    out += std::to_string(e.edge_id);
    out += ",";
    out += JsonWriter::number(e.matched_fraction);
    out += e.matched ? ",matched" : ",unmatched";
    for (const auto& [attr, verdict] : e.attribute_agreement) {
      (void)attr;
      out += ",";
      out += to_string(verdict);
    }
    out += "\n";
  }
  return out;
}

}  // namespace detail

}  // namespace cyclecheck
