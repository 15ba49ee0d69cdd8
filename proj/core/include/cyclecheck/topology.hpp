#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cyclecheck/geometry.hpp"
#include "cyclecheck/graph.hpp"
#include "cyclecheck/grid.hpp"

namespace cyclecheck {

enum class TopologyFlagKind {
  DanglingNode,
  Overshoot,
  Undershoot,
  MissingIntersectionNode,
  ComponentGap,
};

std::string to_string(TopologyFlagKind kind);

/// One detected defect. geometry holds a single point for point-like flags
/// and the two endpoints of the closing segment for gap-like flags.
struct TopologyFlag {
  TopologyFlagKind kind = TopologyFlagKind::DanglingNode;
  geo::Polyline geometry;
  std::vector<std::int64_t> node_ids;
  std::vector<std::int64_t> edge_ids;
  double distance = 0.0;  // meters; 0 where not applicable
};

struct DanglingNodes {
  std::vector<std::int64_t> node_ids;  // ascending
  /// "dangling_node_count" for every retained grid cell.
  std::vector<CellMetrics> per_cell;
};

/// Degree-1 nodes with per-cell counts. Requires a simplified graph so the
/// census is not distorted by unmerged chain interior nodes.
DanglingNodes dangling_nodes(const NetworkGraph& graph,
                             const AnalysisGrid& grid);

/// Edges with at least one degree-1 endpoint and geometric length ≤
/// max_length (inclusive). Ascending edge ids.
std::vector<std::int64_t> overshoots(const NetworkGraph& graph,
                                     double max_length);

/// For each dangling node: the nearest edge within max_distance that is not
/// incident to the node itself or to any of its graph neighbors. The flag
/// carries the segment from the node to the closest point on that edge.
/// Edges the node lies on exactly (distance 0) are intersection defects,
/// not gaps, and never produce an undershoot.
std::vector<TopologyFlag> undershoots(const NetworkGraph& graph,
                                      double max_distance);

/// Geometric intersection points of edge pairs that share no endpoint node,
/// skipping pairs where either edge is grade-separated. Any such point lacks
/// a network node by construction.
std::vector<TopologyFlag> missing_intersection_nodes(const NetworkGraph& graph);

struct NetworkComponent {
  /// Discovery order: components numbered by ascending lowest node id.
  std::int64_t component_id = 0;
  std::vector<std::int64_t> node_ids;  // ascending
  std::vector<std::int64_t> edge_ids;  // ascending
  double infrastructure_length = 0.0;
};

struct ComponentSet {
  /// Descending by infrastructure length, ties by ascending component_id.
  std::vector<NetworkComponent> components;
  /// edge_id → component_id.
  std::vector<std::int64_t> edge_component;
};

ComponentSet components(const NetworkGraph& graph);

/// (rank starting at 1, component infrastructure length) in component-set
/// order, for log-log display.
std::vector<std::pair<std::size_t, double>> zipf_series(
    const ComponentSet& comps);

/// Pairs of edges from different components whose geometries approach within
/// max_distance. The flag carries the shortest connecting segment and its
/// length. Touching pairs (distance 0) are crossing defects, not gaps, and
/// are skipped.
std::vector<TopologyFlag> component_gaps(const NetworkGraph& graph,
                                         const ComponentSet& comps,
                                         double max_distance);

/// Share of nonempty cells reachable from each nonempty cell: B is reachable
/// from A iff some component has edges in both. Counts include the cell
/// itself; the denominator counts only cells containing edges. Metric name
/// "reachable_cells_pct"; cells without edges carry no entry.
std::vector<CellMetrics> cell_reachability(const NetworkGraph& graph,
                                           const ComponentSet& comps,
                                           const AnalysisGrid& grid);

}  // namespace cyclecheck
