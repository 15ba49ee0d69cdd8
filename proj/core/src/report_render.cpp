#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/json_writer.hpp"
#include "cyclecheck/report.hpp"
#include "report_detail.hpp"

namespace cyclecheck {

namespace {

constexpr double kCanvasW = 840.0;
constexpr double kCanvasH = 620.0;
constexpr double kMapX = 20.0, kMapY = 20.0, kMapW = 590.0, kMapH = 540.0;
constexpr double kLegendX = 630.0;

const char* const kSequentialRamp[5] = {"#eff3ff", "#bdd7e7", "#6baed6",
                                        "#3182bd", "#08519c"};
const char* const kDivergingRamp[5] = {"#ca0020", "#f4a582", "#f7f7f7",
                                       "#92c5de", "#0571b0"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// compact metric label: trailing zeros trimmed
std::string num(double v) {
  std::string s = JsonWriter::number(v);
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    auto last = s.find_last_not_of('0');
    if (last == dot) last -= 1;
    s.erase(last + 1);
  }
  return s;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Projection {
  double min_x = 0.0, max_y = 0.0, scale = 1.0;
  double off_x = 0.0, off_y = 0.0;
  double x(double wx) const { return kMapX + off_x + (wx - min_x) * scale; }
  double y(double wy) const { return kMapY + off_y + (max_y - wy) * scale; }
};

struct Extent {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  bool any = false;
  void add(const geo::Point& p) {
    if (!any) {
      min_x = max_x = p.x;
      min_y = max_y = p.y;
      any = true;
      return;
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  void add(const geo::Box& b) {
    add(geo::Point{b.min.x, b.min.y});
    add(geo::Point{b.max.x, b.max.y});
  }
};

struct Breaks {
  double lo = 0.0, hi = 1.0;
  std::size_t index(double v) const {
    if (hi <= lo) return 0;
    const double t = (v - lo) / (hi - lo) * 5.0;
    const auto i = static_cast<long>(t);
    return static_cast<std::size_t>(std::clamp(i, 0L, 4L));
  }
  double edge(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) / 5.0;
  }
};

Breaks class_breaks(const MapLayer& layer) {
  Breaks b;
  bool any = false;
  for (const auto& [box, v] : layer.cells) {
    (void)box;
    if (!any) {
      b.lo = b.hi = v;
      any = true;
    } else {
      b.lo = std::min(b.lo, v);
      b.hi = std::max(b.hi, v);
    }
  }
  if (layer.choropleth && layer.choropleth->diverging) {
    const double m = std::max(std::abs(b.lo), std::abs(b.hi));
    b.lo = -m;
    b.hi = m;
  }
  if (b.hi <= b.lo) b.hi = b.lo + 1.0;
  return b;
}

// largest 1/2/5-decade step not exceeding the limit
double nice_length(double limit) {
  if (limit <= 0.0) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(limit)));
  for (double f : {5.0, 2.0, 1.0}) {
    if (f * mag <= limit) return f * mag;
  }
  return mag / 2.0;
}

bool layer_empty(const MapLayer& l) {
  return l.cells.empty() && l.lines.empty() && l.points.empty();
}

void draw_line(std::string& svg, const Projection& proj,
               const geo::Polyline& line, const std::string& color,
               double width, bool dashed) {
  svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
         px(width) + "\"";
  if (dashed) svg += " stroke-dasharray=\"6 3\"";
  svg += " points=\"";
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (i) svg += " ";
    svg += px(proj.x(line[i].x)) + "," + px(proj.y(line[i].y));
  }
  svg += "\"/>\n";
}

void legend_text(std::string& svg, double x, double y, const std::string& s,
                 bool bold = false) {
  svg += "<text x=\"" + px(x) + "\" y=\"" + px(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\"";
  if (bold) svg += " font-weight=\"bold\"";
  svg += ">" + html_escape(s) + "</text>\n";
}

}  // namespace

std::string render_svg_map(const std::vector<MapLayer>& layers) {
  Extent ext;
  for (const MapLayer& l : layers) {
    for (const auto& [box, v] : l.cells) {
      (void)v;
      ext.add(box);
    }
    for (const auto& line : l.lines) {
      for (const geo::Point& p : line) ext.add(p);
    }
    for (const geo::Point& p : l.points) ext.add(p);
  }
  if (!ext.any) throw OutputError("map rendering needs at least one non-empty layer");

  Projection proj;
  proj.min_x = ext.min_x;
  proj.max_y = ext.max_y;
  const double span_x = std::max(ext.max_x - ext.min_x, 1e-9);
  const double span_y = std::max(ext.max_y - ext.min_y, 1e-9);
  proj.scale = std::min(kMapW / span_x, kMapH / span_y);
  proj.off_x = (kMapW - span_x * proj.scale) / 2.0;
  proj.off_y = (kMapH - span_y * proj.scale) / 2.0;

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kCanvasW) +
      "\" height=\"" + px(kCanvasH) + "\" viewBox=\"0 0 " + px(kCanvasW) +
      " " + px(kCanvasH) + "\">\n<rect width=\"" + px(kCanvasW) +
      "\" height=\"" + px(kCanvasH) + "\" fill=\"#ffffff\"/>\n";

  for (const MapLayer& layer : layers) {
    if (layer_empty(layer)) continue;
    if (!layer.cells.empty()) {
      const Breaks breaks = class_breaks(layer);
      const bool diverging = layer.choropleth && layer.choropleth->diverging;
      const auto& ramp = diverging ? kDivergingRamp : kSequentialRamp;
      for (const auto& [box, v] : layer.cells) {
        const double x = proj.x(box.min.x);
        const double y = proj.y(box.max.y);
        svg += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" +
               px((box.max.x - box.min.x) * proj.scale) + "\" height=\"" +
               px((box.max.y - box.min.y) * proj.scale) + "\" fill=\"" +
               ramp[breaks.index(v)] +
               "\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n";
      }
    }
    for (const auto& line : layer.lines) {
      draw_line(svg, proj, line, layer.color, layer.stroke_width, layer.dashed);
    }
    for (const geo::Point& p : layer.points) {
      svg += "<circle cx=\"" + px(proj.x(p.x)) + "\" cy=\"" +
             px(proj.y(p.y)) + "\" r=\"3.5\" fill=\"" + layer.color + "\"/>\n";
    }
  }

  // legend: one block per drawn layer
  double ly = 30.0;
  for (const MapLayer& layer : layers) {
    if (layer_empty(layer)) continue;
    if (!layer.cells.empty()) {
      const Breaks breaks = class_breaks(layer);
      const bool diverging = layer.choropleth && layer.choropleth->diverging;
      const auto& ramp = diverging ? kDivergingRamp : kSequentialRamp;
      legend_text(svg, kLegendX,
                  ly, layer.choropleth ? layer.choropleth->metric_label
                                       : layer.name,
                  true);
      ly += 8.0;
      for (std::size_t i = 0; i < 5; ++i) {
        svg += "<rect x=\"" + px(kLegendX) + "\" y=\"" + px(ly) +
               "\" width=\"14\" height=\"14\" fill=\"" + ramp[i] +
               "\" stroke=\"#888888\" stroke-width=\"0.5\"/>\n";
        legend_text(svg, kLegendX + 20.0, ly + 11.0,
                    num(breaks.edge(i)) + " to " + num(breaks.edge(i + 1)));
        ly += 18.0;
      }
      ly += 12.0;
      continue;
    }
    if (!layer.lines.empty()) {
      svg += "<line x1=\"" + px(kLegendX) + "\" y1=\"" + px(ly - 4.0) +
             "\" x2=\"" + px(kLegendX + 16.0) + "\" y2=\"" + px(ly - 4.0) +
             "\" stroke=\"" + layer.color + "\" stroke-width=\"" +
             px(std::max(layer.stroke_width, 1.5)) + "\"";
      if (layer.dashed) svg += " stroke-dasharray=\"6 3\"";
      svg += "/>\n";
    } else {
      svg += "<circle cx=\"" + px(kLegendX + 8.0) + "\" cy=\"" +
             px(ly - 4.0) + "\" r=\"3.5\" fill=\"" + layer.color + "\"/>\n";
    }
    legend_text(svg, kLegendX + 22.0, ly, layer.name);
    ly += 20.0;
  }

  // scale bar, bottom left, in meters
  const double bar_m = nice_length(span_x / 3.0);
  const double bar_px = bar_m * proj.scale;
  const double bar_y = kCanvasH - 30.0;
  svg += "<line x1=\"" + px(kMapX + 10.0) + "\" y1=\"" + px(bar_y) +
         "\" x2=\"" + px(kMapX + 10.0 + bar_px) + "\" y2=\"" + px(bar_y) +
         "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  for (double tick_x : {kMapX + 10.0, kMapX + 10.0 + bar_px}) {
    svg += "<line x1=\"" + px(tick_x) + "\" y1=\"" + px(bar_y - 4.0) +
           "\" x2=\"" + px(tick_x) + "\" y2=\"" + px(bar_y + 4.0) +
           "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  }
  legend_text(svg, kMapX + 14.0 + bar_px, bar_y + 4.0, num(bar_m) + " m");

  svg += "</svg>\n";
  return svg;
}

std::string render_zipf_svg(
    const std::vector<std::pair<std::size_t, double>>& series,
    const std::vector<std::pair<std::size_t, double>>* second,
    std::string_view label_a, std::string_view label_b) {
  if (series.empty()) throw OutputError("ranked-length plot needs a series");

  constexpr double w = 640.0, h = 440.0;
  constexpr double x0 = 70.0, x1 = 610.0, y0 = 20.0, y1 = 380.0;

  double max_rank = 1.0, max_len = 1.0, min_len = 1.0;
  bool first = true;
  const auto scan = [&](const std::vector<std::pair<std::size_t, double>>& s) {
    for (const auto& [rank, length] : s) {
      const double len = std::max(length, 1e-3);
      max_rank = std::max(max_rank, static_cast<double>(rank));
      if (first) {
        min_len = max_len = len;
        first = false;
      } else {
        min_len = std::min(min_len, len);
        max_len = std::max(max_len, len);
      }
    }
  };
  scan(series);
  if (second) scan(*second);

  const double x_exp = std::max(1.0, std::ceil(std::log10(max_rank)));
  double ylo_exp = std::floor(std::log10(min_len));
  double yhi_exp = std::ceil(std::log10(max_len));
  if (yhi_exp <= ylo_exp) yhi_exp = ylo_exp + 1.0;

  const auto sx = [&](double rank) {
    return x0 + std::log10(rank) / x_exp * (x1 - x0);
  };
  const auto sy = [&](double len) {
    const double e = std::log10(std::max(len, 1e-3));
    return y1 - (e - ylo_exp) / (yhi_exp - ylo_exp) * (y1 - y0);
  };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w) +
      "\" height=\"" + px(h) + "\" viewBox=\"0 0 " + px(w) + " " + px(h) +
      "\">\n<rect width=\"" + px(w) + "\" height=\"" + px(h) +
      "\" fill=\"#ffffff\"/>\n";

  // decade grid
  for (int e = 0; e <= static_cast<int>(x_exp); ++e) {
    const double gx = sx(std::pow(10.0, e));
    svg += "<line x1=\"" + px(gx) + "\" y1=\"" + px(y0) + "\" x2=\"" +
           px(gx) + "\" y2=\"" + px(y1) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    legend_text(svg, gx - 4.0, y1 + 16.0, num(std::pow(10.0, e)));
  }
  for (int e = static_cast<int>(ylo_exp); e <= static_cast<int>(yhi_exp); ++e) {
    const double gy = sy(std::pow(10.0, e));
    svg += "<line x1=\"" + px(x0) + "\" y1=\"" + px(gy) + "\" x2=\"" +
           px(x1) + "\" y2=\"" + px(gy) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    legend_text(svg, 8.0, gy + 4.0, num(std::pow(10.0, e)));
  }
  svg += "<rect x=\"" + px(x0) + "\" y=\"" + px(y0) + "\" width=\"" +
         px(x1 - x0) + "\" height=\"" + px(y1 - y0) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (const auto& [rank, length] : series) {
    svg += "<circle cx=\"" + px(sx(static_cast<double>(rank))) + "\" cy=\"" +
           px(sy(length)) +
           "\" r=\"4\" fill=\"#1f78b4\" fill-opacity=\"0.85\"/>\n";
  }
  if (second) {
    for (const auto& [rank, length] : *second) {
      svg += "<rect x=\"" + px(sx(static_cast<double>(rank)) - 3.5) +
             "\" y=\"" + px(sy(length) - 3.5) +
             "\" width=\"7\" height=\"7\" fill=\"#e66101\" "
             "fill-opacity=\"0.85\"/>\n";
    }
    svg += "<circle cx=\"" + px(x1 - 150.0) +
           "\" cy=\"36\" r=\"4\" fill=\"#1f78b4\"/>\n";
    legend_text(svg, x1 - 140.0, 40.0, std::string(label_a));
    svg += "<rect x=\"" + px(x1 - 153.5) +
           "\" y=\"52.5\" width=\"7\" height=\"7\" fill=\"#e66101\"/>\n";
    legend_text(svg, x1 - 140.0, 60.0, std::string(label_b));
  }

  legend_text(svg, (x0 + x1) / 2.0 - 50.0, h - 8.0, "component rank");
  svg += "<text x=\"16\" y=\"" + px((y0 + y1) / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 "
         "16 " + px((y0 + y1) / 2.0) +
         ")\">component length (m)</text>\n</svg>\n";
  return svg;
}

namespace detail {

namespace {

MapLayer edge_layer(const NetworkBundle& bundle, std::string name,
                    std::string color, double width) {
  MapLayer l;
  l.name = std::move(name);
  l.color = std::move(color);
  l.stroke_width = width;
  l.lines.reserve(bundle.graph.edges().size());
  for (const GraphEdge& e : bundle.graph.edges()) l.lines.push_back(e.geometry);
  return l;
}

MapLayer flag_line_layer(const std::vector<TopologyFlag>& flags,
                         std::string name, std::string color, bool dashed) {
  MapLayer l;
  l.name = std::move(name);
  l.color = std::move(color);
  l.stroke_width = 2.0;
  l.dashed = dashed;
  for (const TopologyFlag& f : flags) l.lines.push_back(f.geometry);
  return l;
}

void add_layer(std::vector<MapLayer>& layers, MapLayer layer) {
  if (!layer.cells.empty() || !layer.lines.empty() || !layer.points.empty()) {
    layers.push_back(std::move(layer));
  }
}

void add_map_plot(std::vector<PlotArtifact>& plots, std::string file_name,
                  std::string section, std::string title,
                  const std::vector<MapLayer>& layers) {
  if (layers.empty()) return;
  PlotArtifact p;
  p.file_name = std::move(file_name);
  p.section = std::move(section);
  p.title = std::move(title);
  p.svg = render_svg_map(layers);
  plots.push_back(std::move(p));
}

void intrinsic_plots(std::vector<PlotArtifact>& plots, const QualityReport& r,
                     const IntrinsicSection& s) {
  const NetworkBundle& b = *s.bundle;

  std::vector<MapLayer> density;
  MapLayer cells;
  cells.name = "density";
  cells.choropleth = ChoroplethSpec{"infrastructure density (m/km2)", false};
  for (const CellMetrics& m : b.density) {
    const auto idx = r.grid->index_of(m.cell_id);
    const double* v = m.get("infra_density_m_per_km2");
    if (idx && v) cells.cells.push_back({r.grid->cells[*idx].bounds, *v});
  }
  add_layer(density, std::move(cells));
  add_layer(density, edge_layer(b, "network", "#555555", 0.8));
  add_map_plot(plots, "plots/density_map.svg", s.label,
               "Infrastructure density per cell", density);

  std::vector<MapLayer> flags;
  add_layer(flags, edge_layer(b, "network", "#9a9a9a", 1.0));
  MapLayer dangling;
  dangling.name = "dangling nodes";
  dangling.color = "#e31a1c";
  for (std::int64_t nid : b.dangling.node_ids) {
    dangling.points.push_back(
        b.graph.nodes()[static_cast<std::size_t>(nid)].position);
  }
  add_layer(flags, std::move(dangling));
  MapLayer overshoot;
  overshoot.name = "overshoots";
  overshoot.color = "#ff7f00";
  overshoot.stroke_width = 2.2;
  for (std::int64_t eid : s.overshoot_edge_ids) {
    overshoot.lines.push_back(
        b.graph.edges()[static_cast<std::size_t>(eid)].geometry);
  }
  add_layer(flags, std::move(overshoot));
  add_layer(flags,
            flag_line_layer(s.undershoots, "undershoots", "#6a3d9a", true));
  MapLayer missing;
  missing.name = "missing intersection nodes";
  missing.color = "#b15928";
  for (const TopologyFlag& f : s.missing_intersections) {
    missing.points.push_back(f.geometry.front());
  }
  add_layer(flags, std::move(missing));
  add_layer(flags, flag_line_layer(s.component_gaps, "component gaps",
                                   "#e7298a", true));
  add_map_plot(plots, "plots/network_map.svg", s.label,
               "Network with topology flags", flags);

  const auto zipf = zipf_series(b.component_set);
  if (!zipf.empty()) {
    PlotArtifact p;
    p.file_name = "plots/zipf.svg";
    p.section = s.label;
    p.title = "Component lengths by rank";
    p.svg = render_zipf_svg(zipf);
    plots.push_back(std::move(p));
  }
}

void compare_plots(std::vector<PlotArtifact>& plots, const QualityReport& r) {
  const ExtrinsicSection& x = *r.extrinsic;

  std::vector<MapLayer> delta;
  MapLayer cells;
  cells.name = "density difference";
  cells.choropleth =
      ChoroplethSpec{"density difference " + x.label_a + " minus " +
                         x.label_b + " (m/km2)",
                     true};
  for (const CellDelta& c : x.comparison.cell_deltas) {
    if (!c.density_diff) continue;
    const auto idx = r.grid->index_of(c.cell_id);
    if (idx) cells.cells.push_back({r.grid->cells[*idx].bounds, *c.density_diff});
  }
  add_layer(delta, std::move(cells));
  add_map_plot(plots, "plots/density_delta_map.svg", "comparison",
               "Density difference per cell", delta);

  std::vector<MapLayer> overlay;
  MapLayer la;
  la.name = "largest component: " + x.label_a;
  la.color = "#1f78b4";
  la.stroke_width = 1.8;
  la.lines = x.overlay.layer_a;
  add_layer(overlay, std::move(la));
  MapLayer lb;
  lb.name = "largest component: " + x.label_b;
  lb.color = "#e66101";
  lb.stroke_width = 1.8;
  lb.dashed = true;
  lb.lines = x.overlay.layer_b;
  add_layer(overlay, std::move(lb));
  add_map_plot(plots, "plots/component_overlay_map.svg", "comparison",
               "Largest connected components", overlay);

  if (!x.comparison.zipf.series_a.empty()) {
    PlotArtifact p;
    p.file_name = "plots/zipf_compare.svg";
    p.section = "comparison";
    p.title = "Component lengths by rank, both networks";
    p.svg = render_zipf_svg(x.comparison.zipf.series_a,
                            &x.comparison.zipf.series_b, x.label_a, x.label_b);
    plots.push_back(std::move(p));
  }
}

}  // namespace

std::vector<PlotArtifact> build_plots(const QualityReport& report) {
  std::vector<PlotArtifact> plots;
  if (report.extrinsic) {
    compare_plots(plots, report);
  } else {
    for (const IntrinsicSection& s : report.sections) {
      intrinsic_plots(plots, report, s);
    }
  }
  return plots;
}

}  // namespace detail

namespace {

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void row(std::string& html, const std::string& k, const std::string& v) {
  html += "<tr><th>" + html_escape(k) + "</th><td>" + html_escape(v) +
          "</td></tr>\n";
}

void summary_tables(std::string& html, const IntrinsicSection& s) {
  const NetworkBundle& b = *s.bundle;
  const GraphSummary& g = b.summary;
  html += "<table>\n";
  row(html, "input", s.input_path);
  row(html, "input digest", s.input_digest);
  row(html, "nodes", std::to_string(g.node_count));
  row(html, "edges", std::to_string(g.edge_count));
  row(html, "geometric length (m)", fmt2(g.total_geometric_length));
  row(html, "infrastructure length (m)", fmt2(g.total_infrastructure_length));
  row(html, "protected infrastructure (m)",
      fmt2(g.protected_infrastructure_length));
  row(html, "unprotected infrastructure (m)",
      fmt2(g.unprotected_infrastructure_length));
  html += "</table>\n<h3>Topology</h3>\n<table>\n";
  row(html, "dangling nodes", std::to_string(b.dangling.node_ids.size()));
  row(html, "overshoots", std::to_string(s.overshoot_edge_ids.size()));
  row(html, "undershoots", std::to_string(s.undershoots.size()));
  row(html, "missing intersection nodes",
      std::to_string(s.missing_intersections.size()));
  row(html, "component gaps", std::to_string(s.component_gaps.size()));
  row(html, "components", std::to_string(b.component_set.components.size()));
  html += "</table>\n";
  if (s.tags_analyzed) {
    html += "<h3>Tag checks</h3>\n<table>\n";
    row(html, "missing-tag flags", std::to_string(s.missing_tags.flags.size()));
    row(html, "contradiction flags",
        std::to_string(s.contradiction_flags.size()));
    row(html, "cells with a dominant pattern", std::to_string(s.patterns.size()));
    html += "</table>\n";
  }
}

void embed_plots(std::string& html, const std::vector<PlotArtifact>& plots,
                 const std::string& section) {
  for (const PlotArtifact& p : plots) {
    if (p.section != section) continue;
    html += "<figure data-plot=\"" + html_escape(p.file_name) +
            "\">\n<figcaption>" + html_escape(p.title) + "</figcaption>\n" +
            p.svg + "</figure>\n";
  }
}

void comparison_section(std::string& html, const QualityReport& r,
                        const std::vector<PlotArtifact>& plots) {
  const ExtrinsicSection& x = *r.extrinsic;
  html += "<section id=\"comparison\">\n<h2>Comparison: " +
          html_escape(x.label_a) + " vs " + html_escape(x.label_b) +
          "</h2>\n<table>\n<tr><th>metric</th><th>" + html_escape(x.label_a) +
          "</th><th>" + html_escape(x.label_b) + "</th><th>difference</th></tr>\n";
  for (const MetricDelta& d : x.comparison.global_deltas) {
    html += "<tr><th>" + html_escape(d.name) + "</th><td>" +
            fmt2(d.value_a) + "</td><td>" + fmt2(d.value_b) + "</td><td>" +
            fmt2(d.difference) + "</td></tr>\n";
  }
  html += "</table>\n<h3>Per-cell differences</h3>\n<table>\n";
  const auto stats = [&html](const std::string& name, const DeltaStats& s) {
    html += "<tr><th>" + html_escape(name) + "</th><td>" +
            std::to_string(s.two_sided_cells) + "</td><td>" +
            std::to_string(s.only_a_cells) + "</td><td>" +
            std::to_string(s.only_b_cells) + "</td><td>" + fmt2(s.mean) +
            "</td><td>" + fmt2(s.median) + "</td></tr>\n";
  };
  html +=
      "<tr><th>metric</th><th>two-sided cells</th><th>only in "
      "a</th><th>only in b</th><th>mean</th><th>median</th></tr>\n";
  stats("density difference (m/km2)", x.comparison.density_stats);
  stats("reachability difference (pp)", x.comparison.reachability_stats);
  html += "</table>\n";
  if (x.comparison.zipf.completeness_hint) {
    html +=
        "<p class=\"hint\">One network's largest component dwarfs its "
        "runner-up while the other's does not. That asymmetry is worth a "
        "look for missing links; it is a hint, not a verdict.</p>\n";
  }
  embed_plots(html, plots, "comparison");
  html += "</section>\n<section id=\"matching\">\n<h2>Feature matching</h2>\n";
  html += "<table>\n";
  row(html, "segment length (m)", fmt2(x.params.segment_length));
  row(html, "buffer distance (m)", fmt2(x.params.buffer_distance));
  row(html, "hausdorff threshold (m)", fmt2(x.params.hausdorff_threshold));
  row(html, "angle threshold (deg)", fmt2(x.params.angle_threshold));
  row(html, "minimum matched fraction", fmt2(x.params.min_fraction));
  html += "</table>\n<table>\n<tr><th>direction</th><th>edges</th><th>matched"
          "</th><th>unmatched</th></tr>\n";
  const auto direction = [&html](const std::string& name,
                                 const std::vector<EdgeMatchSummary>& v) {
    std::size_t matched = 0;
    for (const EdgeMatchSummary& e : v) matched += e.matched ? 1 : 0;
    html += "<tr><th>" + html_escape(name) + "</th><td>" +
            std::to_string(v.size()) + "</td><td>" + std::to_string(matched) +
            "</td><td>" + std::to_string(v.size() - matched) + "</td></tr>\n";
  };
  direction(x.label_a + " against " + x.label_b, x.matches_ab);
  direction(x.label_b + " against " + x.label_a, x.matches_ba);
  html += "</table>\n";
  if (!x.compare_attributes.empty()) {
    html += "<p>Attribute agreement per direction is tabulated in the "
            "match CSV files next to this report.</p>\n";
  }
  embed_plots(html, plots, "matching");
  html += "</section>\n";
}

}  // namespace

std::string render_html(const QualityReport& report,
                        const std::vector<PlotArtifact>& plots) {
  std::string html =
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      "<title>Network quality report</title>\n<style>\n"
      "body{font-family:sans-serif;margin:2em auto;max-width:70em;color:#222}\n"
      "table{border-collapse:collapse;margin:1em 0}\n"
      "th,td{border:1px solid #bbb;padding:0.3em 0.7em;text-align:left}\n"
      "figure{margin:1.5em 0}\nfigcaption{font-weight:bold;margin-bottom:0.5em}\n"
      ".hint{background:#fff3cd;padding:0.8em;border:1px solid #e0c068}\n"
      "</style>\n</head>\n<body>\n<h1>Network quality report</h1>\n<table>\n";
  row(html, "tool", "cyclecheck " + report.tool_version);
  row(html, "config digest", report.config_digest);
  html += "</table>\n";
  for (const IntrinsicSection& s : report.sections) {
    html += "<section id=\"dataset-" + html_escape(s.label) +
            "\">\n<h2>Data set: " + html_escape(s.label) + "</h2>\n";
    summary_tables(html, s);
    embed_plots(html, plots, s.label);
    html += "</section>\n";
  }
  if (report.extrinsic) comparison_section(html, report, plots);
  html += "</body>\n</html>\n";
  return html;
}

}  // namespace cyclecheck
