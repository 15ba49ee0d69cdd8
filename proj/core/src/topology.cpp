#include "cyclecheck/topology.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "cyclecheck/errors.hpp"
#include "union_find.hpp"

namespace cyclecheck {

namespace {

geo::Box point_box(const geo::Point& p) { return {p, p}; }

bool share_node(const GraphEdge& a, const GraphEdge& b) {
  return a.node_a == b.node_a || a.node_a == b.node_b ||
         a.node_b == b.node_a || a.node_b == b.node_b;
}

}  // namespace

std::string to_string(TopologyFlagKind kind) {
  switch (kind) {
    case TopologyFlagKind::DanglingNode:
      return "dangling_node";
    case TopologyFlagKind::Overshoot:
      return "overshoot";
    case TopologyFlagKind::Undershoot:
      return "undershoot";
    case TopologyFlagKind::MissingIntersectionNode:
      return "missing_intersection_node";
    case TopologyFlagKind::ComponentGap:
      return "component_gap";
  }
  return "dangling_node";
}

DanglingNodes dangling_nodes(const NetworkGraph& graph,
                             const AnalysisGrid& grid) {
  if (!graph.simplified()) {
    throw std::logic_error("dangling-node census needs a simplified graph");
  }
  DanglingNodes out;
  std::vector<double> counts(grid.cells.size(), 0.0);
  for (const Node& n : graph.nodes()) {
    if (graph.degree(n.node_id) != 1) continue;
    out.node_ids.push_back(n.node_id);
    if (const auto idx = grid.cell_index_at(n.position)) counts[*idx] += 1.0;
  }
  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    CellMetrics m;
    m.cell_id = grid.cells[idx].cell_id;
    m.set("dangling_node_count", counts[idx]);
    out.per_cell.push_back(std::move(m));
  }
  return out;
}

std::vector<std::int64_t> overshoots(const NetworkGraph& graph,
                                     double max_length) {
  if (max_length <= 0.0) {
    throw ConfigError("overshoot threshold must be positive");
  }
  std::vector<std::int64_t> out;
  for (const GraphEdge& e : graph.edges()) {
    if (e.geometric_length > max_length) continue;
    if (graph.degree(e.node_a) == 1 || graph.degree(e.node_b) == 1) {
      out.push_back(e.edge_id);
    }
  }
  return out;
}

std::vector<TopologyFlag> undershoots(const NetworkGraph& graph,
                                      double max_distance) {
  if (max_distance <= 0.0) {
    throw ConfigError("undershoot threshold must be positive");
  }
  std::vector<TopologyFlag> out;
  for (const Node& n : graph.nodes()) {
    if (graph.degree(n.node_id) != 1) continue;

    // Edges incident to the node or to any of its neighbors are part of the
    // node's own junction, not a gap to close.
    std::vector<std::int64_t> excluded = graph.incident_edges(n.node_id);
    for (const std::int64_t nb : graph.neighbor_nodes(n.node_id)) {
      const auto& inc = graph.incident_edges(nb);
      excluded.insert(excluded.end(), inc.begin(), inc.end());
    }
    std::sort(excluded.begin(), excluded.end());

    double best = std::numeric_limits<double>::max();
    std::int64_t best_edge = -1;
    geo::Point best_point;
    const geo::Box query = geo::expand(point_box(n.position), max_distance);
    for (const std::uint32_t id : graph.edge_index().query(query)) {
      if (std::binary_search(excluded.begin(), excluded.end(),
                             static_cast<std::int64_t>(id))) {
        continue;
      }
      geo::Point closest;
      const double d = geo::point_polyline_distance(
          n.position, graph.edges()[id].geometry, &closest);
      if (d > 0.0 && d <= max_distance && d < best) {
        best = d;
        best_edge = static_cast<std::int64_t>(id);
        best_point = closest;
      }
    }
    if (best_edge >= 0) {
      out.push_back({TopologyFlagKind::Undershoot,
                     {n.position, best_point},
                     {n.node_id},
                     {best_edge},
                     best});
    }
  }
  return out;
}

std::vector<TopologyFlag> missing_intersection_nodes(
    const NetworkGraph& graph) {
  std::vector<TopologyFlag> out;
  const auto& edges = graph.edges();
  for (const GraphEdge& a : edges) {
    if (a.grade_separated) continue;
    for (const std::uint32_t id : graph.edge_index().query(geo::bbox(a.geometry))) {
      if (static_cast<std::int64_t>(id) <= a.edge_id) continue;
      const GraphEdge& b = edges[id];
      if (b.grade_separated || share_node(a, b)) continue;

      geo::Polyline points;
      for (std::size_t i = 1; i < a.geometry.size(); ++i) {
        for (std::size_t j = 1; j < b.geometry.size(); ++j) {
          const auto x = geo::segment_intersection(
              a.geometry[i - 1], a.geometry[i], b.geometry[j - 1],
              b.geometry[j]);
          if (!x) continue;
          if (std::find(points.begin(), points.end(), *x) == points.end()) {
            points.push_back(*x);
          }
        }
      }
      std::sort(points.begin(), points.end(),
                [](const geo::Point& p, const geo::Point& q) {
                  return p.x != q.x ? p.x < q.x : p.y < q.y;
                });
      for (const geo::Point& p : points) {
        out.push_back({TopologyFlagKind::MissingIntersectionNode,
                       {p},
                       {},
                       {a.edge_id, b.edge_id},
                       0.0});
      }
    }
  }
  return out;
}

ComponentSet components(const NetworkGraph& graph) {
  const std::size_t n = graph.nodes().size();
  UnionFind uf(n);
  for (const GraphEdge& e : graph.edges()) {
    uf.unite(static_cast<std::uint32_t>(e.node_a),
             static_cast<std::uint32_t>(e.node_b));
  }

  // Root indices are first-appearance stable, so scanning nodes in order
  // numbers components by their lowest node id.
  ComponentSet out;
  std::vector<std::int64_t> comp_of_node(n, -1);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t root = uf.find(i);
    if (comp_of_node[root] < 0) {
      comp_of_node[root] = static_cast<std::int64_t>(out.components.size());
      NetworkComponent c;
      c.component_id = comp_of_node[root];
      out.components.push_back(std::move(c));
    }
    comp_of_node[i] = comp_of_node[root];
    out.components[static_cast<std::size_t>(comp_of_node[i])]
        .node_ids.push_back(static_cast<std::int64_t>(i));
  }

  out.edge_component.resize(graph.edges().size(), -1);
  for (const GraphEdge& e : graph.edges()) {
    const std::int64_t c = comp_of_node[static_cast<std::size_t>(e.node_a)];
    auto& comp = out.components[static_cast<std::size_t>(c)];
    comp.edge_ids.push_back(e.edge_id);
    comp.infrastructure_length += e.infrastructure_length;
    out.edge_component[static_cast<std::size_t>(e.edge_id)] = c;
  }

  std::sort(out.components.begin(), out.components.end(),
            [](const NetworkComponent& a, const NetworkComponent& b) {
              if (a.infrastructure_length != b.infrastructure_length) {
                return a.infrastructure_length > b.infrastructure_length;
              }
              return a.component_id < b.component_id;
            });
  return out;
}

std::vector<std::pair<std::size_t, double>> zipf_series(
    const ComponentSet& comps) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(comps.components.size());
  for (std::size_t i = 0; i < comps.components.size(); ++i) {
    out.emplace_back(i + 1, comps.components[i].infrastructure_length);
  }
  return out;
}

std::vector<TopologyFlag> component_gaps(const NetworkGraph& graph,
                                         const ComponentSet& comps,
                                         double max_distance) {
  if (max_distance <= 0.0) {
    throw ConfigError("component gap threshold must be positive");
  }
  std::vector<TopologyFlag> out;
  const auto& edges = graph.edges();
  for (const GraphEdge& a : edges) {
    const geo::Box query = geo::expand(geo::bbox(a.geometry), max_distance);
    for (const std::uint32_t id : graph.edge_index().query(query)) {
      if (static_cast<std::int64_t>(id) <= a.edge_id) continue;
      const GraphEdge& b = edges[id];
      if (comps.edge_component[static_cast<std::size_t>(a.edge_id)] ==
          comps.edge_component[static_cast<std::size_t>(b.edge_id)]) {
        continue;
      }
      geo::Point pa, pb;
      const double d =
          geo::polyline_polyline_distance(a.geometry, b.geometry, &pa, &pb);
      if (d > 0.0 && d <= max_distance) {
        out.push_back({TopologyFlagKind::ComponentGap,
                       {pa, pb},
                       {},
                       {a.edge_id, b.edge_id},
                       d});
      }
    }
  }
  return out;
}

std::vector<CellMetrics> cell_reachability(const NetworkGraph& graph,
                                           const ComponentSet& comps,
                                           const AnalysisGrid& grid) {
  // Component ids present per cell, sorted unique.
  std::vector<std::vector<std::int64_t>> cell_comps(grid.cells.size());
  for (const GraphEdge& e : graph.edges()) {
    const std::int64_t c =
        comps.edge_component[static_cast<std::size_t>(e.edge_id)];
    for (const auto& [idx, piece] : cell_lengths(grid, e.geometry)) {
      (void)piece;
      cell_comps[idx].push_back(c);
    }
  }
  std::size_t nonempty = 0;
  std::vector<std::vector<std::size_t>> comp_cells(comps.components.size());
  for (std::size_t idx = 0; idx < cell_comps.size(); ++idx) {
    auto& cc = cell_comps[idx];
    std::sort(cc.begin(), cc.end());
    cc.erase(std::unique(cc.begin(), cc.end()), cc.end());
    if (cc.empty()) continue;
    ++nonempty;
    for (const std::int64_t c : cc) {
      comp_cells[static_cast<std::size_t>(c)].push_back(idx);
    }
  }

  // Cells sharing the same component set share the same answer.
  std::map<std::vector<std::int64_t>, double> memo;
  std::vector<std::size_t> mark(grid.cells.size(), 0);
  std::size_t epoch = 0;
  std::vector<CellMetrics> out;
  for (std::size_t idx = 0; idx < cell_comps.size(); ++idx) {
    const auto& cc = cell_comps[idx];
    if (cc.empty()) continue;
    auto it = memo.find(cc);
    if (it == memo.end()) {
      ++epoch;
      std::size_t reachable = 0;
      for (const std::int64_t c : cc) {
        for (const std::size_t cell : comp_cells[static_cast<std::size_t>(c)]) {
          if (mark[cell] != epoch) {
            mark[cell] = epoch;
            ++reachable;
          }
        }
      }
      it = memo.emplace(cc, 100.0 * static_cast<double>(reachable) /
                                static_cast<double>(nonempty))
               .first;
    }
    CellMetrics m;
    m.cell_id = grid.cells[idx].cell_id;
    m.set("reachable_cells_pct", it->second);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace cyclecheck
