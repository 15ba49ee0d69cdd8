#include "cyclecheck/compare.hpp"

#include <algorithm>
#include <map>

#include "cyclecheck/errors.hpp"

namespace cyclecheck {

namespace {

struct CellSide {
  double density = 0.0;
  double reachable = 0.0;
  bool populated = false;
};

// cell_id -> metrics, populated iff the network has length in the cell
std::map<std::int64_t, CellSide> side_of(const NetworkBundle& bundle) {
  std::map<std::int64_t, CellSide> out;
  for (const CellMetrics& m : bundle.density) {
    const double* len = m.get("infra_length_m");
    const double* density = m.get("infra_density_m_per_km2");
    if (!len || !density || *len <= 0.0) continue;
    out[m.cell_id].density = *density;
    out[m.cell_id].populated = true;
  }
  for (const CellMetrics& m : bundle.reachability) {
    const double* pct = m.get("reachable_cells_pct");
    if (!pct) continue;
    // density presence decides which cells count as populated
    const auto it = out.find(m.cell_id);
    if (it != out.end()) it->second.reachable = *pct;
  }
  return out;
}

double largest_share_pct(const NetworkBundle& bundle) {
  const auto& comps = bundle.component_set.components;
  const double total = bundle.summary.total_infrastructure_length;
  if (comps.empty() || total <= 0.0) return 0.0;
  return comps.front().infrastructure_length / total * 100.0;
}

DeltaStats stats_of(std::vector<double> diffs, std::size_t only_a,
                    std::size_t only_b) {
  DeltaStats s;
  s.two_sided_cells = diffs.size();
  s.only_a_cells = only_a;
  s.only_b_cells = only_b;
  if (diffs.empty()) return s;
  double sum = 0.0;
  for (double d : diffs) sum += d;
  s.mean = sum / static_cast<double>(diffs.size());
  std::sort(diffs.begin(), diffs.end());
  const std::size_t mid = diffs.size() / 2;
  s.median = (diffs.size() % 2 == 1) ? diffs[mid]
                                     : (diffs[mid - 1] + diffs[mid]) / 2.0;
  return s;
}

bool rank1_outlier(const std::vector<std::pair<std::size_t, double>>& series,
                   double ratio) {
  if (series.size() < 2) return false;
  return series[0].second > ratio * series[1].second;
}

}  // namespace

NetworkBundle analyze_network(NetworkGraph graph, const AnalysisGrid& grid,
                              DensityArea density_area) {
  NetworkBundle b;
  b.summary = graph_summary(graph);
  b.dangling = dangling_nodes(graph, grid);
  b.component_set = components(graph);
  b.density = cell_density(graph, grid, density_area);
  b.reachability = cell_reachability(graph, b.component_set, grid);
  b.grid_signature = grid.signature();
  b.graph = std::move(graph);
  return b;
}

ZipfComparison zipf_compare(const ComponentSet& a, const ComponentSet& b,
                            double outlier_ratio) {
  if (outlier_ratio <= 1.0) {
    throw ConfigError("zipf outlier ratio must exceed 1");
  }
  ZipfComparison z;
  z.series_a = zipf_series(a);
  z.series_b = zipf_series(b);
  z.outlier_a = rank1_outlier(z.series_a, outlier_ratio);
  z.outlier_b = rank1_outlier(z.series_b, outlier_ratio);
  z.completeness_hint = z.outlier_a != z.outlier_b;
  return z;
}

ComparisonResult compare_networks(const NetworkBundle& a,
                                  const NetworkBundle& b,
                                  const AnalysisGrid& grid,
                                  double zipf_outlier_ratio) {
  const std::string sig = grid.signature();
  if (a.grid_signature != sig || b.grid_signature != sig) {
    throw GridMismatchError(
        "per-cell comparison needs both networks analyzed on the same grid");
  }

  ComparisonResult r;

  const auto metric = [&r](std::string name, double va, double vb) {
    MetricDelta d;
    d.name = std::move(name);
    d.value_a = va;
    d.value_b = vb;
    d.difference = va - vb;
    r.global_deltas.push_back(std::move(d));
  };
  metric("total_infrastructure_length_m",
         a.summary.total_infrastructure_length,
         b.summary.total_infrastructure_length);
  metric("node_count", static_cast<double>(a.summary.node_count),
         static_cast<double>(b.summary.node_count));
  metric("dangling_node_count",
         static_cast<double>(a.dangling.node_ids.size()),
         static_cast<double>(b.dangling.node_ids.size()));
  metric("component_count",
         static_cast<double>(a.component_set.components.size()),
         static_cast<double>(b.component_set.components.size()));
  metric("largest_component_share_pct", largest_share_pct(a),
         largest_share_pct(b));

  const auto side_a = side_of(a);
  const auto side_b = side_of(b);
  std::vector<double> density_diffs, reach_diffs;
  std::size_t only_a = 0, only_b = 0;

  auto it_a = side_a.begin();
  auto it_b = side_b.begin();
  while (it_a != side_a.end() || it_b != side_b.end()) {
    CellDelta cell;
    const bool take_a = it_b == side_b.end() ||
                        (it_a != side_a.end() && it_a->first <= it_b->first);
    const bool take_b = it_a == side_a.end() ||
                        (it_b != side_b.end() && it_b->first <= it_a->first);
    cell.cell_id = take_a ? it_a->first : it_b->first;
    if (take_a) {
      cell.density_a = it_a->second.density;
      cell.reachable_a = it_a->second.reachable;
      ++it_a;
    }
    if (take_b) {
      cell.density_b = it_b->second.density;
      cell.reachable_b = it_b->second.reachable;
      ++it_b;
    }
    if (take_a && take_b) {
      cell.density_diff = *cell.density_a - *cell.density_b;
      cell.reachable_diff = *cell.reachable_a - *cell.reachable_b;
      density_diffs.push_back(*cell.density_diff);
      reach_diffs.push_back(*cell.reachable_diff);
    } else if (take_a) {
      ++only_a;
    } else {
      ++only_b;
    }
    r.cell_deltas.push_back(cell);
  }

  r.density_stats = stats_of(std::move(density_diffs), only_a, only_b);
  r.reachability_stats = stats_of(std::move(reach_diffs), only_a, only_b);
  r.zipf = zipf_compare(a.component_set, b.component_set, zipf_outlier_ratio);
  return r;
}

namespace {

void overlay_side(const NetworkBundle& bundle, const char* label,
                  std::vector<geo::Polyline>& layer, double& length,
                  std::vector<std::string>& warnings) {
  const auto& comps = bundle.component_set.components;
  if (comps.empty()) {
    warnings.push_back(std::string("network ") + label +
                       " is empty; its component layer is too");
    return;
  }
  const NetworkComponent& largest = comps.front();
  length = largest.infrastructure_length;
  layer.reserve(largest.edge_ids.size());
  for (std::int64_t eid : largest.edge_ids) {
    layer.push_back(bundle.graph.edges()[static_cast<std::size_t>(eid)].geometry);
  }
}

}  // namespace

ComponentOverlay largest_component_overlay(const NetworkBundle& a,
                                           const NetworkBundle& b) {
  ComponentOverlay o;
  overlay_side(a, "a", o.layer_a, o.length_a, o.warnings);
  overlay_side(b, "b", o.layer_b, o.length_b, o.warnings);
  return o;
}

}  // namespace cyclecheck
