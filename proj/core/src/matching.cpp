#include "cyclecheck/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/parallel.hpp"
#include "cyclecheck/spatial_index.hpp"

namespace cyclecheck {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool chord_degenerate(const geo::Polyline& line) {
  return line.front() == line.back();
}

bool intersects_box(const geo::Polyline& line, const geo::Box& box) {
  if (line.size() == 1) return box.contains(line.front());
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (geo::clip_segment_to_box(line[i - 1], line[i], box)) return true;
  }
  return false;
}

double directed_hausdorff(const geo::Polyline& from, const geo::Polyline& to) {
  double worst = 0.0;
  for (const geo::Point& p : geo::densify(from, 1.0)) {
    worst = std::max(worst, geo::point_polyline_distance(p, to));
  }
  return worst;
}

std::string attribute_value(const GraphEdge& e, const std::string& attr) {
  if (attr == "protection") return std::string(to_string(e.protection));
  if (attr == "bidirectional") return e.bidirectional ? "yes" : "no";
  if (attr == "mapping_method") return std::string(to_string(e.mapping_method));
  throw ConfigError("unknown compared attribute '" + attr +
                    "' (expected protection, bidirectional, mapping_method)");
}

}  // namespace

std::vector<Segment> segmentize(const NetworkGraph& graph,
                                double segment_length) {
  if (segment_length <= 0.0) {
    throw ConfigError("segment length must be positive");
  }
  std::vector<Segment> out;
  std::int64_t next_id = 0;
  for (const GraphEdge& e : graph.edges()) {
    const double total = e.geometric_length;
    const auto pieces = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(total / segment_length)));
    for (std::int64_t i = 0; i < pieces; ++i) {
      const double from = static_cast<double>(i) * segment_length;
      const double to =
          std::min(total, static_cast<double>(i + 1) * segment_length);
      Segment s;
      s.segment_id = next_id++;
      s.edge_id = e.edge_id;
      s.part_index = i;
      s.geometry = geo::slice(e.geometry, from, to);
      s.length = geo::length(s.geometry);
      out.push_back(std::move(s));
    }
  }
  return out;
}

double undirected_hausdorff(const geo::Polyline& a, const geo::Polyline& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double segment_angle(const geo::Polyline& a, const geo::Polyline& b) {
  const double ax = a.back().x - a.front().x;
  const double ay = a.back().y - a.front().y;
  const double bx = b.back().x - b.front().x;
  const double by = b.back().y - b.front().y;
  const double na = std::hypot(ax, ay);
  const double nb = std::hypot(bx, by);
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("segment angle needs nonzero chords");
  }
  const double cosine = std::min(1.0, std::abs(ax * bx + ay * by) / (na * nb));
  return std::acos(cosine) * 180.0 / kPi;
}

std::vector<SegmentMatch> match_segments(const std::vector<Segment>& source,
                                         const std::vector<Segment>& target,
                                         const MatchParams& params) {
  if (params.buffer_distance <= 0.0 || params.hausdorff_threshold <= 0.0 ||
      params.angle_threshold <= 0.0) {
    throw ConfigError("matching thresholds must be positive");
  }

  std::vector<std::pair<geo::Box, std::uint32_t>> boxes;
  boxes.reserve(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    boxes.emplace_back(geo::bbox(target[i].geometry),
                       static_cast<std::uint32_t>(i));
  }
  const SpatialIndex index(boxes);

  std::vector<SegmentMatch> out(source.size());
  parallel_for(source.size(), hardware_jobs(), [&](std::size_t i) {
    const Segment& s = source[i];
    SegmentMatch m;
    m.segment_id = s.segment_id;
    if (!chord_degenerate(s.geometry)) {
      const geo::Box envelope =
          geo::expand(geo::bbox(s.geometry), params.buffer_distance);
      double best_h = 0.0;
      double best_a = 0.0;
      for (const std::uint32_t id : index.query(envelope)) {
        const Segment& t = target[id];
        if (chord_degenerate(t.geometry)) continue;
        if (!intersects_box(t.geometry, envelope)) continue;
        const double h = undirected_hausdorff(s.geometry, t.geometry);
        if (h > params.hausdorff_threshold) continue;
        const double ang = segment_angle(s.geometry, t.geometry);
        if (ang > params.angle_threshold) continue;
        // candidates arrive in ascending segment order, so strict improvement
        // keeps the lowest target id on full ties
        if (!m.matched_id || h < best_h || (h == best_h && ang < best_a)) {
          m.matched_id = t.segment_id;
          best_h = h;
          best_a = ang;
        }
      }
      m.hausdorff = best_h;
      m.angle = best_a;
    }
    out[i] = std::move(m);
  });
  return out;
}

std::string to_string(Agreement a) {
  switch (a) {
    case Agreement::Agree:
      return "agree";
    case Agreement::Disagree:
      return "disagree";
    case Agreement::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::vector<EdgeMatchSummary> aggregate_matches(
    const std::vector<SegmentMatch>& matches,
    const std::vector<Segment>& source_segments,
    const std::vector<Segment>& target_segments,
    const NetworkGraph& source_graph, const NetworkGraph& target_graph,
    const std::vector<std::string>& compare_attributes, double min_fraction) {
  if (min_fraction <= 0.0 || min_fraction > 1.0) {
    throw ConfigError("min matched fraction must be in (0, 1]");
  }
  for (const std::string& attr : compare_attributes) {
    if (attr != "protection" && attr != "bidirectional" &&
        attr != "mapping_method") {
      throw ConfigError(
          "unknown compared attribute '" + attr +
          "' (expected protection, bidirectional, mapping_method)");
    }
  }

  std::map<std::int64_t, std::size_t> source_by_id;
  for (std::size_t i = 0; i < source_segments.size(); ++i) {
    source_by_id[source_segments[i].segment_id] = i;
  }
  std::map<std::int64_t, std::size_t> target_by_id;
  for (std::size_t i = 0; i < target_segments.size(); ++i) {
    target_by_id[target_segments[i].segment_id] = i;
  }

  const std::size_t edge_count = source_graph.edges().size();
  std::vector<double> total_len(edge_count, 0.0);
  std::vector<double> matched_len(edge_count, 0.0);
  // per edge and attribute: counterpart value → matched source length
  std::vector<std::vector<std::map<std::string, double>>> votes(
      edge_count,
      std::vector<std::map<std::string, double>>(compare_attributes.size()));

  for (const Segment& s : source_segments) {
    total_len[static_cast<std::size_t>(s.edge_id)] += s.length;
  }
  for (const SegmentMatch& m : matches) {
    const Segment& s = source_segments[source_by_id.at(m.segment_id)];
    const auto edge = static_cast<std::size_t>(s.edge_id);
    if (!m.matched_id) continue;
    matched_len[edge] += s.length;
    const Segment& t = target_segments[target_by_id.at(*m.matched_id)];
    const GraphEdge& te =
        target_graph.edges()[static_cast<std::size_t>(t.edge_id)];
    for (std::size_t k = 0; k < compare_attributes.size(); ++k) {
      votes[edge][k][attribute_value(te, compare_attributes[k])] += s.length;
    }
  }

  std::vector<EdgeMatchSummary> out;
  out.reserve(edge_count);
  for (const GraphEdge& e : source_graph.edges()) {
    const auto idx = static_cast<std::size_t>(e.edge_id);
    EdgeMatchSummary summary;
    summary.edge_id = e.edge_id;
    summary.matched_fraction =
        total_len[idx] > 0.0 ? matched_len[idx] / total_len[idx] : 0.0;
    summary.matched = summary.matched_fraction >= min_fraction;
    for (std::size_t k = 0; k < compare_attributes.size(); ++k) {
      Agreement verdict = Agreement::Unknown;
      if (summary.matched && !votes[idx][k].empty()) {
        // std::map orders values, so scanning with strict > leaves ties on
        // the smallest value string
        const auto& tally = votes[idx][k];
        auto majority = tally.begin();
        for (auto it = std::next(tally.begin()); it != tally.end(); ++it) {
          if (it->second > majority->second) majority = it;
        }
        verdict = majority->first == attribute_value(e, compare_attributes[k])
                      ? Agreement::Agree
                      : Agreement::Disagree;
      }
      summary.attribute_agreement.emplace_back(compare_attributes[k], verdict);
    }
    out.push_back(std::move(summary));
  }
  return out;
}

UnmatchedReport unmatched_report(const std::vector<EdgeMatchSummary>& a,
                                 const std::vector<EdgeMatchSummary>& b) {
  UnmatchedReport out;
  for (const EdgeMatchSummary& s : a) {
    if (!s.matched) out.unmatched_a.push_back(s.edge_id);
  }
  for (const EdgeMatchSummary& s : b) {
    if (!s.matched) out.unmatched_b.push_back(s.edge_id);
  }
  return out;
}

}  // namespace cyclecheck
