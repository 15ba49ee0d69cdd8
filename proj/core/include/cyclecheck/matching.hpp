#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclecheck/geometry.hpp"
#include "cyclecheck/graph.hpp"

namespace cyclecheck {

/// One uniform piece of an edge. Concatenating an edge's segments in
/// part_index order reproduces its geometry.
struct Segment {
  std::int64_t segment_id = 0;  // sequential across the whole data set
  std::int64_t edge_id = 0;     // parent
  std::int64_t part_index = 0;  // position within the parent edge
  geo::Polyline geometry;
  double length = 0.0;
};

/// Cuts every edge into pieces of segment_length; the final piece of each
/// edge keeps the remainder, in (0, segment_length].
std::vector<Segment> segmentize(const NetworkGraph& graph,
                                double segment_length);

/// Symmetric Hausdorff distance: the larger of the two directed distances,
/// each taken from a densified sample (spacing ≤ 1 m) of one polyline to the
/// exact other polyline.
double undirected_hausdorff(const geo::Polyline& a, const geo::Polyline& b);

/// Acute angle in [0, 90] degrees between the chord vectors (first to last
/// vertex), insensitive to direction. Throws std::invalid_argument on a
/// zero-length chord.
double segment_angle(const geo::Polyline& a, const geo::Polyline& b);

struct MatchParams {
  double segment_length = 10.0;
  double buffer_distance = 15.0;
  double hausdorff_threshold = 12.0;
  double angle_threshold = 30.0;
  double min_fraction = 0.5;
};

struct SegmentMatch {
  std::int64_t segment_id = 0;               // source segment
  std::optional<std::int64_t> matched_id;    // best target segment
  double hausdorff = 0.0;                    // valid when matched
  double angle = 0.0;                        // valid when matched
};

/// Per source segment: candidates are target segments touching the source
/// bounding box grown by buffer_distance; among candidates within both
/// thresholds the best match is the minimum Hausdorff distance, ties broken
/// by minimum angle, then lowest target segment_id. Independent per source
/// segment, so a target segment may match several sources. Segments with a
/// zero-length chord never match (their angle is undefined). Output order
/// follows the source segments.
std::vector<SegmentMatch> match_segments(const std::vector<Segment>& source,
                                         const std::vector<Segment>& target,
                                         const MatchParams& params);

enum class Agreement { Agree, Disagree, Unknown };

std::string to_string(Agreement a);

struct EdgeMatchSummary {
  std::int64_t edge_id = 0;
  double matched_fraction = 0.0;  // length-weighted share of matched segments
  bool matched = false;           // matched_fraction ≥ min_fraction
  /// Per compared attribute, in compare_attributes order.
  std::vector<std::pair<std::string, Agreement>> attribute_agreement;
};

/// Aggregates segment matches to source edges. matched_fraction weights by
/// segment length; an edge is matched iff the fraction reaches min_fraction.
/// Attribute agreement judges the source value against the length-weighted
/// majority value of the matched counterparts' parent edges (majority ties
/// go to the smallest value string); edges below min_fraction are Unknown.
/// Compared attributes: protection, bidirectional, mapping_method.
std::vector<EdgeMatchSummary> aggregate_matches(
    const std::vector<SegmentMatch>& matches,
    const std::vector<Segment>& source_segments,
    const std::vector<Segment>& target_segments,
    const NetworkGraph& source_graph, const NetworkGraph& target_graph,
    const std::vector<std::string>& compare_attributes, double min_fraction);

struct UnmatchedReport {
  std::vector<std::int64_t> unmatched_a;  // edge ids unmatched in A→B
  std::vector<std::int64_t> unmatched_b;  // edge ids unmatched in B→A
};

/// Collects the unmatched edges of both directions as omission/commission
/// candidates for review. No verdict is taken on which data set is right.
UnmatchedReport unmatched_report(const std::vector<EdgeMatchSummary>& a,
                                 const std::vector<EdgeMatchSummary>& b);

}  // namespace cyclecheck
