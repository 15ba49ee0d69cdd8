#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclecheck/geometry.hpp"
#include "cyclecheck/graph.hpp"
#include "cyclecheck/ingest.hpp"

namespace cyclecheck {

class RunLog;

struct GridCell {
  std::int64_t cell_id = 0;  // row-major over the full bounding-box tiling
  geo::Box bounds;
  geo::Point centroid;
  double clipped_area = 0.0;  // m² of study-area polygon inside the cell
};

/// Square-cell tessellation of the study-area bounding box, anchored at its
/// lower-left corner. Only cells that touch the study-area polygon are
/// retained; their row-major cell_ids keep gaps so ids are stable.
class AnalysisGrid {
 public:
  double cell_size = 0.0;
  geo::Point origin;
  std::int64_t cols = 0;
  std::int64_t rows = 0;
  std::vector<GridCell> cells;  // ascending cell_id

  /// Index into cells for a cell_id, if retained.
  std::optional<std::size_t> index_of(std::int64_t cell_id) const;

  /// Index of the retained cell containing p. Points on a shared cell edge
  /// go to the cell with the lower cell_id.
  std::optional<std::size_t> cell_index_at(const geo::Point& p) const;

  /// Digest of the grid layout (origin, cell size, retained ids). Two
  /// analyses are comparable per cell only when signatures match.
  std::string signature() const;
};

AnalysisGrid make_grid(const StudyArea& area, double cell_size,
                       RunLog* log = nullptr);

/// Named per-cell metric values, insertion-ordered for stable serialization.
struct CellMetrics {
  std::int64_t cell_id = 0;
  std::vector<std::pair<std::string, double>> values;

  void set(std::string name, double v);
  const double* get(std::string_view name) const;
};

enum class DensityArea { FullCell, ClippedCell };

/// Geometric length of the polyline per retained cell. Each piece between
/// grid-line crossings is assigned to exactly one cell by its midpoint
/// (lower cell_id tie rule), so the returned lengths sum to the polyline
/// length that lies inside retained cells. Ascending by cell index.
std::vector<std::pair<std::size_t, double>> cell_lengths(
    const AnalysisGrid& grid, const geo::Polyline& line);

/// Per retained cell: clipped infrastructure length (each segment piece is
/// assigned to exactly one cell by its midpoint, so lengths are conserved),
/// density in m/km², and node count. Every retained cell gets an entry.
std::vector<CellMetrics> cell_density(const NetworkGraph& graph,
                                      const AnalysisGrid& grid,
                                      DensityArea density_area =
                                          DensityArea::FullCell);

}  // namespace cyclecheck
