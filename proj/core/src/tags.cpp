#include "cyclecheck/tags.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/parallel.hpp"

namespace cyclecheck {

namespace {

bool graph_has_tags(const NetworkGraph& graph) {
  for (const GraphEdge& e : graph.edges()) {
    for (const TagMap& tags : e.tag_sets) {
      if (!tags.empty()) return true;
    }
  }
  return false;
}

// Present iff every constituent tag map carries the key.
bool key_present(const GraphEdge& e, const std::string& key) {
  if (e.tag_sets.empty()) return false;
  for (const TagMap& tags : e.tag_sets) {
    if (tags.find(key) == tags.end()) return false;
  }
  return true;
}

// key → all values seen across constituents.
using UnionTags = std::map<std::string, std::set<std::string>>;

UnionTags union_tags(const GraphEdge& e) {
  UnionTags u;
  for (const TagMap& tags : e.tag_sets) {
    for (const auto& [k, v] : tags) u[k].insert(v);
  }
  return u;
}

// Contradiction matching requires the key to be present; adding tags can
// then only grow the union, so no rule stops firing (monotone flagging).
bool matches_union(const TagPredicate& p, const UnionTags& u) {
  const auto it = u.find(p.key);
  if (it == u.end()) return false;
  const std::set<std::string>& seen = it->second;
  switch (p.op) {
    case PredicateOp::Exists:
      return true;
    case PredicateOp::Equals:
      return seen.count(p.values.front()) > 0;
    case PredicateOp::NotEquals:
      return std::any_of(seen.begin(), seen.end(),
                         [&](const std::string& v) { return v != p.values.front(); });
    case PredicateOp::OneOf:
      return std::any_of(p.values.begin(), p.values.end(),
                         [&](const std::string& v) { return seen.count(v) > 0; });
  }
  return false;
}

std::string describe(const TagPredicate& p) {
  switch (p.op) {
    case PredicateOp::Exists:
      return p.key;
    case PredicateOp::Equals:
      return p.key + "=" + p.values.front();
    case PredicateOp::NotEquals:
      return p.key + "!=" + p.values.front();
    case PredicateOp::OneOf: {
      std::string out = p.key + "=";
      for (std::size_t i = 0; i < p.values.size(); ++i) {
        if (i > 0) out += "|";
        out += p.values[i];
      }
      return out;
    }
  }
  return p.key;
}

void check_rule_side(const TagPredicate& p, std::size_t rule_index,
                     const char* side) {
  const auto fail = [&](const std::string& what) {
    throw ConfigError("contradiction rule " + std::to_string(rule_index) +
                      ": " + side + " side " + what);
  };
  if (p.key.empty()) fail("has an empty tag key");
  switch (p.op) {
    case PredicateOp::Equals:
    case PredicateOp::NotEquals:
      if (p.values.size() != 1) fail("needs exactly one value");
      break;
    case PredicateOp::OneOf:
      if (p.values.empty()) fail("needs at least one value");
      break;
    case PredicateOp::Exists:
      break;
  }
}

// Pattern value of one key on a (possibly merged) edge.
std::string pattern_value(const GraphEdge& e, const std::string& key) {
  if (e.tag_sets.empty()) return "<missing>";
  const std::string* first = nullptr;
  bool mixed = false;
  for (const TagMap& tags : e.tag_sets) {
    const auto it = tags.find(key);
    if (it == tags.end()) return "<missing>";
    if (first == nullptr) {
      first = &it->second;
    } else if (*first != it->second) {
      mixed = true;
    }
  }
  return mixed ? "<mixed>" : *first;
}

}  // namespace

std::string to_string(TagFlagKind kind) {
  switch (kind) {
    case TagFlagKind::MissingTag:
      return "missing_tag";
    case TagFlagKind::Contradiction:
      return "contradiction";
    case TagFlagKind::Pattern:
      return "pattern";
  }
  return "missing_tag";
}

MissingTagResult missing_tags(const NetworkGraph& graph,
                              const TagAnalysisConfig& config,
                              const AnalysisGrid& grid) {
  if (config.tags_of_interest.empty()) {
    throw ConfigError(
        "missing-tag analysis needs a non-empty tags_of_interest list");
  }
  if (!graph.edges().empty() && !graph_has_tags(graph)) {
    throw ConfigError(
        "tag analysis requires tagged input; this data set carries no tags");
  }

  const auto& edges = graph.edges();
  const std::size_t nkeys = config.tags_of_interest.size();

  // Per-edge evaluation runs in parallel into private slots; the reduction
  // below stays sequential so per-cell sums are order-stable.
  std::vector<std::vector<char>> present(edges.size());
  std::vector<std::vector<std::pair<std::size_t, double>>> pieces(edges.size());
  parallel_for(edges.size(), hardware_jobs(), [&](std::size_t i) {
    const GraphEdge& e = edges[i];
    auto& p = present[i];
    p.resize(nkeys);
    for (std::size_t k = 0; k < nkeys; ++k) {
      p[k] = key_present(e, config.tags_of_interest[k]) ? 1 : 0;
    }
    pieces[i] = cell_lengths(grid, e.geometry);
  });

  MissingTagResult out;
  std::vector<double> total(grid.cells.size(), 0.0);
  std::vector<std::vector<double>> tagged(
      nkeys, std::vector<double>(grid.cells.size(), 0.0));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const GraphEdge& e = edges[i];
    for (std::size_t k = 0; k < nkeys; ++k) {
      if (present[i][k] == 0) {
        out.flags.push_back(
            {e.edge_id, TagFlagKind::MissingTag, config.tags_of_interest[k], k});
      }
    }
    const double m = static_cast<double>(e.multiplier);
    for (const auto& [idx, piece] : pieces[i]) {
      total[idx] += piece * m;
      for (std::size_t k = 0; k < nkeys; ++k) {
        if (present[i][k] != 0) tagged[k][idx] += piece * m;
      }
    }
  }

  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    if (total[idx] <= 0.0) continue;
    CellMetrics metrics;
    metrics.cell_id = grid.cells[idx].cell_id;
    for (std::size_t k = 0; k < nkeys; ++k) {
      metrics.set("coverage_" + config.tags_of_interest[k] + "_pct",
                  tagged[k][idx] / total[idx] * 100.0);
    }
    out.coverage.push_back(std::move(metrics));
  }
  return out;
}

std::vector<TagFlag> contradictions(const NetworkGraph& graph,
                                    const TagAnalysisConfig& config) {
  for (std::size_t r = 0; r < config.contradiction_rules.size(); ++r) {
    const ContradictionRule& rule = config.contradiction_rules[r];
    check_rule_side(rule.first, r, "first");
    check_rule_side(rule.second, r, "second");
    if (rule.first == rule.second) {
      throw ConfigError("contradiction rule " + std::to_string(r) +
                        " has identical sides (" + describe(rule.first) + ")");
    }
  }

  const auto& edges = graph.edges();
  std::vector<std::vector<TagFlag>> per_edge(edges.size());
  parallel_for(edges.size(), hardware_jobs(), [&](std::size_t i) {
    const GraphEdge& e = edges[i];
    const UnionTags u = union_tags(e);
    for (std::size_t r = 0; r < config.contradiction_rules.size(); ++r) {
      const ContradictionRule& rule = config.contradiction_rules[r];
      if (matches_union(rule.first, u) && matches_union(rule.second, u)) {
        per_edge[i].push_back({e.edge_id, TagFlagKind::Contradiction,
                               describe(rule.first) + " vs " + describe(rule.second),
                               r});
      }
    }
  });

  std::vector<TagFlag> out;
  for (auto& flags : per_edge) {
    for (TagFlag& f : flags) out.push_back(std::move(f));
  }
  return out;
}

std::vector<CellPattern> tag_patterns(
    const NetworkGraph& graph, const std::vector<std::string>& pattern_keys,
    const AnalysisGrid& grid) {
  if (pattern_keys.empty()) {
    throw ConfigError("tag pattern analysis needs a non-empty pattern key list");
  }

  const auto& edges = graph.edges();
  std::vector<std::string> combos(edges.size());
  std::vector<std::vector<std::pair<std::size_t, double>>> pieces(edges.size());
  parallel_for(edges.size(), hardware_jobs(), [&](std::size_t i) {
    const GraphEdge& e = edges[i];
    std::string combo;
    for (std::size_t k = 0; k < pattern_keys.size(); ++k) {
      if (k > 0) combo += "|";
      combo += pattern_value(e, pattern_keys[k]);
    }
    combos[i] = std::move(combo);
    pieces[i] = cell_lengths(grid, e.geometry);
  });

  // std::map keeps combinations sorted, so a strict > comparison resolves
  // length ties to the lexicographically smallest combination.
  std::vector<std::map<std::string, double>> by_cell(grid.cells.size());
  std::vector<double> total(grid.cells.size(), 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double m = static_cast<double>(edges[i].multiplier);
    for (const auto& [idx, piece] : pieces[i]) {
      by_cell[idx][combos[i]] += piece * m;
      total[idx] += piece * m;
    }
  }

  std::vector<CellPattern> out;
  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    if (total[idx] <= 0.0) continue;
    const auto& groups = by_cell[idx];
    auto best = groups.begin();
    for (auto it = std::next(groups.begin()); it != groups.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    out.push_back({grid.cells[idx].cell_id, best->first,
                   best->second / total[idx] * 100.0, best->second});
  }
  return out;
}

}  // namespace cyclecheck
