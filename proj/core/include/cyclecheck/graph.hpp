#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclecheck/geometry.hpp"
#include "cyclecheck/ingest.hpp"
#include "cyclecheck/spatial_index.hpp"

namespace cyclecheck {

struct Node {
  std::int64_t node_id = 0;
  geo::Point position;
};

struct GraphEdge {
  std::int64_t edge_id = 0;
  std::int64_t node_a = 0;
  std::int64_t node_b = 0;
  int key = 0;  // discriminates parallel edges between the same node pair
  geo::Polyline geometry;

  Protection protection = Protection::Unprotected;
  bool bidirectional = false;
  MappingMethod mapping_method = MappingMethod::TrueGeometry;
  bool grade_separated = false;
  int multiplier = 1;  // 1 or 2, never stacked

  double geometric_length = 0.0;
  double infrastructure_length = 0.0;

  // Constituent provenance; one entry per original edge record, in chain
  // order after simplification.
  std::vector<TagMap> tag_sets;
  std::vector<std::string> source_ids;

  std::int64_t other(std::int64_t node) const {
    return node == node_a ? node_b : node_a;
  }
  bool is_self_loop() const { return node_a == node_b; }
};

/// Disjunctive tag predicates deciding that a centerline-mapped edge carries
/// infrastructure on both sides (doubling its infrastructure length).
struct MultiplierRule {
  std::vector<TagPredicate> centerline_both_sides;
};

/// 2 if the edge is bidirectional, or centerline-mapped with a both-sides
/// predicate firing; otherwise 1. Never stacks.
int edge_multiplier(bool bidirectional, MappingMethod mapping,
                    const TagMap& tags, const MultiplierRule& rule);

/// Undirected spatial multigraph. Immutable once built; node_id and edge_id
/// are vector indices.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(std::vector<Node> nodes, std::vector<GraphEdge> edges,
               bool simplified);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  bool simplified() const { return simplified_; }

  /// Self-loops count twice, as usual for undirected degree.
  std::size_t degree(std::int64_t node) const {
    return adjacency_[static_cast<std::size_t>(node)].size();
  }
  /// Incident edge ids in ascending order; self-loops listed twice.
  const std::vector<std::int64_t>& incident_edges(std::int64_t node) const {
    return adjacency_[static_cast<std::size_t>(node)];
  }
  /// Distinct adjacent node ids, ascending, excluding the node itself.
  std::vector<std::int64_t> neighbor_nodes(std::int64_t node) const;

  /// R-tree over edge geometry bounding boxes, ids = edge ids.
  const SpatialIndex& edge_index() const { return edge_index_; }
  /// R-tree over node positions, ids = node ids.
  const SpatialIndex& node_index() const { return node_index_; }

 private:
  std::vector<Node> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::int64_t>> adjacency_;
  SpatialIndex edge_index_;
  SpatialIndex node_index_;
  bool simplified_ = false;
};

struct GraphSummary {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double total_geometric_length = 0.0;
  double total_infrastructure_length = 0.0;
  std::size_t protected_edge_count = 0;
  std::size_t unprotected_edge_count = 0;
  double protected_infrastructure_length = 0.0;
  double unprotected_infrastructure_length = 0.0;
  std::size_t dangling_node_count = 0;
};

/// Builds the multigraph: one node per endpoint cluster (endpoints within
/// snap_tolerance merged by union-find), edge endpoints rewritten to node
/// positions. Interior crossings are deliberately not noded; zero-length
/// leftovers are dropped.
NetworkGraph build_graph(const std::vector<EdgeRecord>& records,
                         double snap_tolerance,
                         const MultiplierRule& rule = {});

/// Attribute names allowed in breaking_attributes.
std::vector<std::string> default_breaking_attributes();

/// Merges maximal chains through degree-2 nodes whose two incident edges
/// agree on all breaking attributes (the multiplier must always agree).
/// Isolated cycles collapse to one self-loop anchored at their lowest node.
NetworkGraph simplify(const NetworkGraph& graph,
                      const std::vector<std::string>& breaking_attributes =
                          default_breaking_attributes());

GraphSummary graph_summary(const NetworkGraph& graph);

}  // namespace cyclecheck
