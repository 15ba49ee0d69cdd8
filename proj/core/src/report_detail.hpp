#pragma once

#include <string>
#include <vector>

#include "cyclecheck/report.hpp"

namespace cyclecheck {

class JsonWriter;

// Internal seams between the report translation units.
namespace detail {

std::string topology_flags_geojson(const std::vector<TopologyFlag>& flags);
std::string dangling_geojson(const NetworkBundle& bundle);
std::string overshoots_geojson(const IntrinsicSection& section);
std::string tag_flags_geojson(const IntrinsicSection& section,
                              const std::vector<TagFlag>& flags);
std::string unmatched_geojson(const NetworkBundle& bundle,
                              const std::vector<std::int64_t>& edge_ids);
std::string match_csv(const ExtrinsicSection& x, bool a_to_b);
void matching_direction_json(JsonWriter& w, const ExtrinsicSection& x,
                             bool a_to_b);

/// Plot set for the report's shape; layers with nothing to draw are left
/// out, and a plot with no drawable layers at all is skipped.
std::vector<PlotArtifact> build_plots(const QualityReport& report);

}  // namespace detail

}  // namespace cyclecheck
