#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclecheck/graph.hpp"
#include "cyclecheck/grid.hpp"
#include "cyclecheck/ingest.hpp"

namespace cyclecheck {

/// Two predicates declared mutually exclusive. An edge matching both sides
/// gets flagged.
struct ContradictionRule {
  TagPredicate first;
  TagPredicate second;
};

struct TagAnalysisConfig {
  std::vector<std::string> tags_of_interest;
  std::vector<ContradictionRule> contradiction_rules;
  std::vector<std::string> pattern_keys;
};

enum class TagFlagKind { MissingTag, Contradiction, Pattern };

std::string to_string(TagFlagKind kind);

struct TagFlag {
  std::int64_t edge_id = 0;
  TagFlagKind kind = TagFlagKind::MissingTag;
  std::string detail;          // tag key(s) involved
  std::size_t rule_index = 0;  // position in tags_of_interest / contradiction_rules
};

struct MissingTagResult {
  std::vector<TagFlag> flags;  // ordered by (edge_id, key index)
  /// "coverage_<key>_pct" per retained cell that holds infrastructure.
  /// Cells without infrastructure carry no entry.
  std::vector<CellMetrics> coverage;
};

/// One flag per (edge, key of tags_of_interest) the edge lacks, plus the
/// length-weighted share of infrastructure carrying each key per cell.
/// A merged edge counts a key as present iff every constituent carries it.
/// Throws when tags_of_interest is empty or when the graph has edges but no
/// tags at all (untagged input cannot be analyzed).
MissingTagResult missing_tags(const NetworkGraph& graph,
                              const TagAnalysisConfig& config,
                              const AnalysisGrid& grid);

/// One flag per (edge, rule) where both rule sides match. Merged edges
/// evaluate predicates against the union of their constituent tags. Unlike
/// classification predicates, an absent key never matches here: flags are
/// about tags the edge actually carries, which keeps flagging monotone as
/// tags are added. Throws on a rule with identical or malformed sides.
std::vector<TagFlag> contradictions(const NetworkGraph& graph,
                                    const TagAnalysisConfig& config);

/// Dominant combination of pattern-key values in one cell. Combination
/// strings join the per-key values with "|"; a key a constituent lacks
/// contributes "<missing>", constituents disagreeing contribute "<mixed>".
struct CellPattern {
  std::int64_t cell_id = 0;
  std::string dominant;
  double share_pct = 0.0;  // dominant length / cell infrastructure length
  double length_m = 0.0;   // infrastructure length of the dominant pattern
};

/// Groups per-cell infrastructure length by pattern-key combination and
/// reports the dominant one per cell. Ties go to the lexicographically
/// smallest combination; cells without infrastructure carry no entry.
std::vector<CellPattern> tag_patterns(
    const NetworkGraph& graph, const std::vector<std::string>& pattern_keys,
    const AnalysisGrid& grid);

}  // namespace cyclecheck
