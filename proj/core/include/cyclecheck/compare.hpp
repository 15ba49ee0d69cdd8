#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclecheck/graph.hpp"
#include "cyclecheck/grid.hpp"
#include "cyclecheck/topology.hpp"

namespace cyclecheck {

/// One network's intrinsic analysis, packaged for contrasting it against
/// another network and for report rendering.
struct NetworkBundle {
  NetworkGraph graph;  // simplified
  GraphSummary summary;
  DanglingNodes dangling;
  ComponentSet component_set;
  std::vector<CellMetrics> density;       // every retained cell
  std::vector<CellMetrics> reachability;  // cells with infrastructure
  std::string grid_signature;
};

/// Runs the per-network censuses once and keeps the results together.
/// Expects a simplified graph (the dangling census refuses raw ones).
NetworkBundle analyze_network(NetworkGraph graph, const AnalysisGrid& grid,
                              DensityArea density_area = DensityArea::FullCell);

struct MetricDelta {
  std::string name;
  double value_a = 0.0;
  double value_b = 0.0;
  double difference = 0.0;  // value_a - value_b
};

/// Per-cell contrast. A side is absent when that network has no
/// infrastructure in the cell; differences exist only for two-sided cells.
struct CellDelta {
  std::int64_t cell_id = 0;
  std::optional<double> density_a;  // m/km²
  std::optional<double> density_b;
  std::optional<double> density_diff;
  std::optional<double> reachable_a;  // % of populated cells reachable
  std::optional<double> reachable_b;
  std::optional<double> reachable_diff;  // percentage points
};

/// Aggregates over the two-sided cells only; one-sided cells are counted
/// but never fold into mean or median.
struct DeltaStats {
  std::size_t two_sided_cells = 0;
  std::size_t only_a_cells = 0;
  std::size_t only_b_cells = 0;
  double mean = 0.0;
  double median = 0.0;
};

/// Ranked component-length series side by side. A series is flagged as an
/// outlier when its rank-1 length exceeds outlier_ratio times its rank-2
/// length; single-component series are never flagged (no rank 2). The
/// completeness hint fires when exactly one side is flagged. It is a hint
/// for the reader, never a verdict on either data set.
struct ZipfComparison {
  std::vector<std::pair<std::size_t, double>> series_a;  // (rank, length)
  std::vector<std::pair<std::size_t, double>> series_b;
  bool outlier_a = false;
  bool outlier_b = false;
  bool completeness_hint = false;
};

ZipfComparison zipf_compare(const ComponentSet& a, const ComponentSet& b,
                            double outlier_ratio = 10.0);

struct ComparisonResult {
  std::vector<MetricDelta> global_deltas;  // fixed five-metric order
  std::vector<CellDelta> cell_deltas;      // ascending cell_id
  DeltaStats density_stats;
  DeltaStats reachability_stats;
  ZipfComparison zipf;
};

/// A − B contrasts of the global metrics and the per-cell metrics. Both
/// bundles must have been computed on `grid`; mismatched layouts throw
/// GridMismatchError. zipf_outlier_ratio is handed to zipf_compare.
ComparisonResult compare_networks(const NetworkBundle& a,
                                  const NetworkBundle& b,
                                  const AnalysisGrid& grid,
                                  double zipf_outlier_ratio = 10.0);

/// Largest connected component of each network, as drawable geometry.
struct ComponentOverlay {
  std::vector<geo::Polyline> layer_a;  // ascending edge id within the component
  std::vector<geo::Polyline> layer_b;
  double length_a = 0.0;  // infrastructure length of the drawn component
  double length_b = 0.0;
  std::vector<std::string> warnings;  // one entry per empty network
};

ComponentOverlay largest_component_overlay(const NetworkBundle& a,
                                           const NetworkBundle& b);

}  // namespace cyclecheck
