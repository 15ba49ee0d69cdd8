#include "cyclecheck/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cyclecheck/digest.hpp"
#include "cyclecheck/errors.hpp"
#include "cyclecheck/json_writer.hpp"
#include "cyclecheck/runlog.hpp"

namespace cyclecheck {

std::optional<std::size_t> AnalysisGrid::index_of(std::int64_t cell_id) const {
  const auto it = std::lower_bound(
      cells.begin(), cells.end(), cell_id,
      [](const GridCell& c, std::int64_t id) { return c.cell_id < id; });
  if (it == cells.end() || it->cell_id != cell_id) return std::nullopt;
  return static_cast<std::size_t>(it - cells.begin());
}

std::optional<std::size_t> AnalysisGrid::cell_index_at(
    const geo::Point& p) const {
  const auto base_col = static_cast<std::int64_t>(
      std::floor((p.x - origin.x) / cell_size));
  const auto base_row = static_cast<std::int64_t>(
      std::floor((p.y - origin.y) / cell_size));

  // Points exactly on a grid line sit in two closed cells; scan a 3x3
  // neighborhood and keep the lowest retained cell_id that contains p.
  std::optional<std::size_t> best;
  for (std::int64_t r = base_row - 1; r <= base_row + 1; ++r) {
    if (r < 0 || r >= rows) continue;
    for (std::int64_t c = base_col - 1; c <= base_col + 1; ++c) {
      if (c < 0 || c >= cols) continue;
      const auto idx = index_of(r * cols + c);
      if (!idx) continue;
      if (!cells[*idx].bounds.contains(p)) continue;
      if (!best || cells[*idx].cell_id < cells[*best].cell_id) best = idx;
    }
  }
  return best;
}

std::string AnalysisGrid::signature() const {
  JsonWriter w;
  w.begin_object();
  w.key("cell_size").value(cell_size);
  w.key("origin").begin_array().value(origin.x).value(origin.y).end_array();
  w.key("cols").value(cols);
  w.key("rows").value(rows);
  w.key("cell_ids").begin_array();
  for (const GridCell& c : cells) w.value(c.cell_id);
  w.end_array();
  w.end_object();
  return sha256_hex(w.str());
}

AnalysisGrid make_grid(const StudyArea& area, double cell_size, RunLog* log) {
  if (!(cell_size > 0.0)) throw ConfigError("cell_size must be > 0");

  const geo::Box bb = geo::bbox(area.boundary);
  const double width = bb.max.x - bb.min.x;
  const double height = bb.max.y - bb.min.y;

  AnalysisGrid grid;
  grid.cell_size = cell_size;
  grid.origin = bb.min;
  grid.cols = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(width / cell_size)));
  grid.rows = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(height / cell_size)));

  if (cell_size > width && cell_size > height && log != nullptr) {
    log->warn("single_cell_grid",
              "cell_size exceeds the study-area bounding box");
  }

  constexpr double kAreaEps = 1e-9;
  for (std::int64_t r = 0; r < grid.rows; ++r) {
    for (std::int64_t c = 0; c < grid.cols; ++c) {
      GridCell cell;
      cell.cell_id = r * grid.cols + c;
      cell.bounds = geo::Box{
          {grid.origin.x + static_cast<double>(c) * cell_size,
           grid.origin.y + static_cast<double>(r) * cell_size},
          {grid.origin.x + static_cast<double>(c + 1) * cell_size,
           grid.origin.y + static_cast<double>(r + 1) * cell_size}};
      cell.centroid = geo::interpolate(cell.bounds.min, cell.bounds.max, 0.5);
      cell.clipped_area =
          geo::polygon_box_intersection_area(area.boundary, cell.bounds);
      // cells that only touch the polygon along a boundary line are dropped;
      // geometry on such lines is credited to the retained neighbor by the
      // lower-cell-id tie rule
      if (cell.clipped_area > kAreaEps) grid.cells.push_back(cell);
    }
  }
  return grid;
}

void CellMetrics::set(std::string name, double v) {
  for (auto& [k, val] : values) {
    if (k == name) {
      val = v;
      return;
    }
  }
  values.emplace_back(std::move(name), v);
}

const double* CellMetrics::get(std::string_view name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return &v;
  }
  return nullptr;
}

namespace {

// Splits [p,q] at every grid line it crosses and hands each piece's
// midpoint-resolved cell index plus length share to `credit`.
template <typename Fn>
void walk_segment(const AnalysisGrid& grid, const geo::Point& p,
                  const geo::Point& q, Fn&& credit) {
  const double seg_len = geo::distance(p, q);
  if (seg_len <= 0.0) return;

  std::vector<double> ts{0.0, 1.0};
  auto add_crossings = [&](double pa, double qa, double o) {
    const double lo = std::min(pa, qa);
    const double hi = std::max(pa, qa);
    const auto k0 = static_cast<std::int64_t>(
        std::ceil((lo - o) / grid.cell_size));
    const auto k1 = static_cast<std::int64_t>(
        std::floor((hi - o) / grid.cell_size));
    for (std::int64_t k = k0; k <= k1; ++k) {
      const double line = o + static_cast<double>(k) * grid.cell_size;
      if (qa == pa) continue;
      const double t = (line - pa) / (qa - pa);
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  };
  add_crossings(p.x, q.x, grid.origin.x);
  add_crossings(p.y, q.y, grid.origin.y);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double t0 = ts[i - 1];
    const double t1 = ts[i];
    if (t1 <= t0) continue;
    const geo::Point mid = geo::interpolate(p, q, 0.5 * (t0 + t1));
    if (const auto idx = grid.cell_index_at(mid)) {
      credit(*idx, seg_len * (t1 - t0));
    }
  }
}

}  // namespace

std::vector<std::pair<std::size_t, double>> cell_lengths(
    const AnalysisGrid& grid, const geo::Polyline& line) {
  std::map<std::size_t, double> acc;
  for (std::size_t i = 1; i < line.size(); ++i) {
    walk_segment(grid, line[i - 1], line[i],
                 [&](std::size_t idx, double piece) { acc[idx] += piece; });
  }
  return {acc.begin(), acc.end()};
}

std::vector<CellMetrics> cell_density(const NetworkGraph& graph,
                                      const AnalysisGrid& grid,
                                      DensityArea density_area) {
  std::vector<double> length(grid.cells.size(), 0.0);
  std::vector<double> node_count(grid.cells.size(), 0.0);

  for (const GraphEdge& e : graph.edges()) {
    const double m = static_cast<double>(e.multiplier);
    for (const auto& [idx, piece] : cell_lengths(grid, e.geometry)) {
      length[idx] += piece * m;
    }
  }
  for (const Node& n : graph.nodes()) {
    if (const auto idx = grid.cell_index_at(n.position)) {
      node_count[*idx] += 1.0;
    }
  }

  std::vector<CellMetrics> out;
  out.reserve(grid.cells.size());
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const double area_m2 = density_area == DensityArea::FullCell
                               ? grid.cell_size * grid.cell_size
                               : grid.cells[i].clipped_area;
    CellMetrics m;
    m.cell_id = grid.cells[i].cell_id;
    m.set("infra_length_m", length[i]);
    m.set("infra_density_m_per_km2",
          area_m2 > 0.0 ? length[i] / (area_m2 / 1e6) : 0.0);
    m.set("node_count", node_count[i]);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace cyclecheck
