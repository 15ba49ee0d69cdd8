#include "cyclecheck/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "cyclecheck/errors.hpp"
#include "union_find.hpp"

namespace cyclecheck {

int edge_multiplier(bool bidirectional, MappingMethod mapping,
                    const TagMap& tags, const MultiplierRule& rule) {
  if (bidirectional) return 2;
  if (mapping == MappingMethod::Centerline &&
      matches_any(rule.centerline_both_sides, tags)) {
    return 2;
  }
  return 1;
}

NetworkGraph::NetworkGraph(std::vector<Node> nodes,
                           std::vector<GraphEdge> edges, bool simplified)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      simplified_(simplified) {
  adjacency_.resize(nodes_.size());
  for (const GraphEdge& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.node_a)].push_back(e.edge_id);
    adjacency_[static_cast<std::size_t>(e.node_b)].push_back(e.edge_id);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  std::vector<std::pair<geo::Box, std::uint32_t>> edge_items;
  edge_items.reserve(edges_.size());
  for (const GraphEdge& e : edges_) {
    edge_items.push_back({geo::bbox(e.geometry),
                          static_cast<std::uint32_t>(e.edge_id)});
  }
  edge_index_ = SpatialIndex(edge_items);

  std::vector<std::pair<geo::Box, std::uint32_t>> node_items;
  node_items.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    node_items.push_back({geo::Box{n.position, n.position},
                          static_cast<std::uint32_t>(n.node_id)});
  }
  node_index_ = SpatialIndex(node_items);
}

std::vector<std::int64_t> NetworkGraph::neighbor_nodes(
    std::int64_t node) const {
  std::vector<std::int64_t> out;
  for (const std::int64_t eid : incident_edges(node)) {
    const std::int64_t other = edges_[static_cast<std::size_t>(eid)].other(node);
    if (other != node) out.push_back(other);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::uint64_t cell_key(std::int64_t ix, std::int64_t iy) {
  return (static_cast<std::uint64_t>(ix) << 32) ^
         (static_cast<std::uint64_t>(iy) & 0xffffffffull);
}

}  // namespace

NetworkGraph build_graph(const std::vector<EdgeRecord>& records,
                         double snap_tolerance, const MultiplierRule& rule) {
  if (!(snap_tolerance > 0.0)) {
    throw ConfigError("snap_tolerance must be > 0");
  }

  // endpoint 2i = front of record i, endpoint 2i+1 = back
  std::vector<geo::Point> endpoints;
  endpoints.reserve(records.size() * 2);
  for (const EdgeRecord& r : records) {
    if (r.geometry.size() < 2) {
      throw ParseError("edge record " + r.source_id +
                       " has fewer than 2 points");
    }
    endpoints.push_back(r.geometry.front());
    endpoints.push_back(r.geometry.back());
  }

  UnionFind uf(endpoints.size());
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  for (std::uint32_t i = 0; i < endpoints.size(); ++i) {
    const std::int64_t ix =
        static_cast<std::int64_t>(std::floor(endpoints[i].x / snap_tolerance));
    const std::int64_t iy =
        static_cast<std::int64_t>(std::floor(endpoints[i].y / snap_tolerance));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find(cell_key(ix + dx, iy + dy));
        if (it == buckets.end()) continue;
        for (const std::uint32_t j : it->second) {
          if (geo::distance(endpoints[i], endpoints[j]) <= snap_tolerance) {
            uf.unite(i, j);
          }
        }
      }
    }
    buckets[cell_key(ix, iy)].push_back(i);
  }

  // nodes in first-appearance order of their cluster
  std::vector<Node> nodes;
  std::unordered_map<std::uint32_t, std::int64_t> cluster_node;
  std::vector<std::int64_t> endpoint_node(endpoints.size());
  for (std::uint32_t i = 0; i < endpoints.size(); ++i) {
    const std::uint32_t root = uf.find(i);
    auto it = cluster_node.find(root);
    if (it == cluster_node.end()) {
      const std::int64_t id = static_cast<std::int64_t>(nodes.size());
      nodes.push_back(Node{id, endpoints[root]});
      it = cluster_node.emplace(root, id).first;
    }
    endpoint_node[i] = it->second;
  }

  std::vector<GraphEdge> edges;
  edges.reserve(records.size());
  std::map<std::pair<std::int64_t, std::int64_t>, int> pair_count;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EdgeRecord& r = records[i];
    GraphEdge e;
    e.node_a = endpoint_node[2 * i];
    e.node_b = endpoint_node[2 * i + 1];
    e.geometry = r.geometry;
    e.geometry.front() = nodes[static_cast<std::size_t>(e.node_a)].position;
    e.geometry.back() = nodes[static_cast<std::size_t>(e.node_b)].position;
    e.geometric_length = geo::length(e.geometry);
    if (e.geometric_length <= 0.0) continue;  // fully collapsed by snapping

    e.edge_id = static_cast<std::int64_t>(edges.size());
    e.protection = r.protection;
    e.bidirectional = r.bidirectional;
    e.mapping_method = r.mapping_method;
    e.grade_separated = r.grade_separated;
    e.multiplier = edge_multiplier(r.bidirectional, r.mapping_method, r.tags, rule);
    e.infrastructure_length = e.geometric_length * e.multiplier;
    e.tag_sets = {r.tags};
    e.source_ids = {r.source_id};
    const auto pair = std::minmax(e.node_a, e.node_b);
    e.key = pair_count[{pair.first, pair.second}]++;
    edges.push_back(std::move(e));
  }

  // drop nodes that lost all their edges to collapsed records
  std::vector<bool> used(nodes.size(), false);
  for (const GraphEdge& e : edges) {
    used[static_cast<std::size_t>(e.node_a)] = true;
    used[static_cast<std::size_t>(e.node_b)] = true;
  }
  std::vector<std::int64_t> remap(nodes.size(), -1);
  std::vector<Node> kept;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!used[i]) continue;
    remap[i] = static_cast<std::int64_t>(kept.size());
    kept.push_back(Node{remap[i], nodes[i].position});
  }
  for (GraphEdge& e : edges) {
    e.node_a = remap[static_cast<std::size_t>(e.node_a)];
    e.node_b = remap[static_cast<std::size_t>(e.node_b)];
  }

  return NetworkGraph(std::move(kept), std::move(edges), false);
}

std::vector<std::string> default_breaking_attributes() {
  return {"protection", "bidirectional", "mapping_method"};
}

namespace {

struct BreakingSet {
  bool protection = false;
  bool bidirectional = false;
  bool mapping_method = false;
};

BreakingSet parse_breaking(const std::vector<std::string>& names) {
  BreakingSet set;
  for (const std::string& n : names) {
    if (n == "protection") set.protection = true;
    else if (n == "bidirectional") set.bidirectional = true;
    else if (n == "mapping_method") set.mapping_method = true;
    else throw ConfigError("unknown breaking attribute '" + n + "'");
  }
  return set;
}

// The multiplier always breaks: merging edges with unequal multipliers would
// destroy the infrastructure/geometric ratio invariant.
bool mergeable_pair(const GraphEdge& a, const GraphEdge& b,
                    const BreakingSet& set) {
  if (a.multiplier != b.multiplier) return false;
  if (set.protection && a.protection != b.protection) return false;
  if (set.bidirectional && a.bidirectional != b.bidirectional) return false;
  if (set.mapping_method && a.mapping_method != b.mapping_method) return false;
  return true;
}

// Chain step: (edge id, node the edge is entered from).
struct ChainStep {
  std::int64_t edge;
  std::int64_t from;
};

GraphEdge merge_chain(const std::vector<ChainStep>& chain,
                      const std::vector<GraphEdge>& edges) {
  const GraphEdge& head = edges[static_cast<std::size_t>(chain.front().edge)];
  GraphEdge out;
  out.protection = head.protection;
  out.bidirectional = head.bidirectional;
  out.mapping_method = head.mapping_method;
  out.multiplier = head.multiplier;
  out.node_a = chain.front().from;
  out.node_b = edges[static_cast<std::size_t>(chain.back().edge)].other(
      chain.back().from);

  for (const ChainStep& step : chain) {
    const GraphEdge& e = edges[static_cast<std::size_t>(step.edge)];
    geo::Polyline piece = e.geometry;
    if (step.from == e.node_b && !e.is_self_loop()) {
      piece = geo::reversed(std::move(piece));
    }
    if (out.geometry.empty()) {
      out.geometry = std::move(piece);
    } else {
      out.geometry.insert(out.geometry.end(), piece.begin() + 1, piece.end());
    }
    out.geometric_length += e.geometric_length;
    out.infrastructure_length += e.infrastructure_length;
    out.grade_separated = out.grade_separated || e.grade_separated;
    out.tag_sets.insert(out.tag_sets.end(), e.tag_sets.begin(),
                        e.tag_sets.end());
    out.source_ids.insert(out.source_ids.end(), e.source_ids.begin(),
                          e.source_ids.end());
  }
  return out;
}

}  // namespace

NetworkGraph simplify(const NetworkGraph& graph,
                      const std::vector<std::string>& breaking_attributes) {
  if (graph.simplified()) {
    throw std::logic_error("graph is already simplified");
  }
  const BreakingSet set = parse_breaking(breaking_attributes);
  const auto& edges = graph.edges();
  const auto& nodes = graph.nodes();

  auto is_mergeable_node = [&](std::int64_t n) {
    const auto& inc = graph.incident_edges(n);
    if (inc.size() != 2 || inc[0] == inc[1]) return false;
    return mergeable_pair(edges[static_cast<std::size_t>(inc[0])],
                          edges[static_cast<std::size_t>(inc[1])], set);
  };

  std::vector<bool> visited(edges.size(), false);
  std::vector<GraphEdge> merged;

  auto walk = [&](std::int64_t start, std::int64_t first_edge) {
    std::vector<ChainStep> chain;
    std::int64_t node = start;
    std::int64_t eid = first_edge;
    while (true) {
      visited[static_cast<std::size_t>(eid)] = true;
      chain.push_back({eid, node});
      const GraphEdge& e = edges[static_cast<std::size_t>(eid)];
      const std::int64_t next = e.other(node);
      if (next == start || !is_mergeable_node(next)) break;
      const auto& inc = graph.incident_edges(next);
      eid = inc[0] == eid ? inc[1] : inc[0];
      node = next;
    }
    merged.push_back(merge_chain(chain, edges));
  };

  for (const Node& n : nodes) {
    if (is_mergeable_node(n.node_id)) continue;
    for (const std::int64_t eid : graph.incident_edges(n.node_id)) {
      if (!visited[static_cast<std::size_t>(eid)]) walk(n.node_id, eid);
    }
  }

  // leftovers are cycles made entirely of mergeable nodes; anchor each at
  // its lowest node id and collapse it to one self-loop
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (visited[e]) continue;
    std::int64_t anchor = std::min(edges[e].node_a, edges[e].node_b);
    std::int64_t node = edges[e].other(anchor);
    std::int64_t eid = edges[e].edge_id;
    while (true) {
      const auto& inc = graph.incident_edges(node);
      const std::int64_t next_edge = inc[0] == eid ? inc[1] : inc[0];
      const std::int64_t next_node =
          edges[static_cast<std::size_t>(next_edge)].other(node);
      eid = next_edge;
      node = next_node;
      anchor = std::min(anchor, node);
      if (eid == static_cast<std::int64_t>(e)) break;
    }
    walk(anchor, graph.incident_edges(anchor)[0]);
  }

  // reindex nodes that survive as merged-edge endpoints
  std::vector<std::int64_t> remap(nodes.size(), -1);
  std::vector<Node> kept;
  auto keep = [&](std::int64_t old) {
    auto& slot = remap[static_cast<std::size_t>(old)];
    if (slot < 0) {
      slot = static_cast<std::int64_t>(kept.size());
      kept.push_back(Node{slot, nodes[static_cast<std::size_t>(old)].position});
    }
    return slot;
  };
  std::map<std::pair<std::int64_t, std::int64_t>, int> pair_count;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    GraphEdge& e = merged[i];
    e.edge_id = static_cast<std::int64_t>(i);
    e.node_a = keep(e.node_a);
    e.node_b = keep(e.node_b);
    const auto pair = std::minmax(e.node_a, e.node_b);
    e.key = pair_count[{pair.first, pair.second}]++;
  }

  return NetworkGraph(std::move(kept), std::move(merged), true);
}

GraphSummary graph_summary(const NetworkGraph& graph) {
  GraphSummary s;
  s.node_count = graph.nodes().size();
  s.edge_count = graph.edges().size();
  for (const GraphEdge& e : graph.edges()) {
    s.total_geometric_length += e.geometric_length;
    s.total_infrastructure_length += e.infrastructure_length;
    if (e.protection == Protection::Protected) {
      ++s.protected_edge_count;
      s.protected_infrastructure_length += e.infrastructure_length;
    } else {
      ++s.unprotected_edge_count;
      s.unprotected_infrastructure_length += e.infrastructure_length;
    }
  }
  for (const Node& n : graph.nodes()) {
    if (graph.degree(n.node_id) == 1) ++s.dangling_node_count;
  }
  return s;
}

}  // namespace cyclecheck
