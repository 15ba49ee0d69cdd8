#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace cyclecheck::geo {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
};

// Open vertex list; segments run between consecutive vertices.
using Polyline = std::vector<Point>;

struct Box {
  Point min;
  Point max;

  bool contains(const Point& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool intersects(const Box& o) const {
    return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y &&
           o.min.y <= max.y;
  }
};

// Simple polygon stored as an open exterior ring (no repeated last vertex).
struct Polygon {
  std::vector<Point> ring;
};

double distance(const Point& a, const Point& b);

/// Total length of a polyline in the units of its coordinates.
double length(const Polyline& line);

Box bbox(const Polyline& line);
Box bbox(const Polygon& poly);
Box expand(const Box& b, double margin);

Point interpolate(const Point& a, const Point& b, double t);

/// Distance from point p to segment [a,b]; optionally reports the closest
/// point on the segment.
double point_segment_distance(const Point& p, const Point& a, const Point& b,
                              Point* closest = nullptr);

double point_polyline_distance(const Point& p, const Polyline& line,
                               Point* closest = nullptr);

/// Minimum distance between two segments, with the achieving point pair.
double segment_segment_distance(const Point& a1, const Point& a2,
                                const Point& b1, const Point& b2,
                                Point* pa = nullptr, Point* pb = nullptr);

double polyline_polyline_distance(const Polyline& a, const Polyline& b,
                                  Point* pa = nullptr, Point* pb = nullptr);

/// Intersection point of segments [a1,a2] and [b1,b2] if they meet in a
/// single point (crossings and touches). Collinear overlaps return the
/// midpoint of the shared extent.
std::optional<Point> segment_intersection(const Point& a1, const Point& a2,
                                          const Point& b1, const Point& b2);

/// Signed area of the ring (positive = counterclockwise).
double signed_area(const Polygon& poly);
double polygon_area(const Polygon& poly);

/// Boundary counts as inside.
bool point_in_polygon(const Point& p, const Polygon& poly);

/// True if no two non-adjacent ring segments intersect.
bool polygon_is_simple(const Polygon& poly);

/// Parts of `line` inside `poly` (boundary included). Pieces are maximal:
/// consecutive kept fragments are stitched back together.
std::vector<Polyline> clip_polyline_to_polygon(const Polyline& line,
                                               const Polygon& poly);

/// Liang-Barsky: parameter interval [t0,t1] of segment [a,b] inside `box`,
/// or nullopt if disjoint. Degenerate (point) overlaps yield t0 == t1.
std::optional<std::pair<double, double>> clip_segment_to_box(const Point& a,
                                                             const Point& b,
                                                             const Box& box);

/// Length of the parts of `line` inside `box`.
double clipped_length_in_box(const Polyline& line, const Box& box);

/// Area of poly ∩ box via Sutherland-Hodgman (box is convex).
double polygon_box_intersection_area(const Polygon& poly, const Box& box);

/// Points sampled along the polyline at most `spacing` apart; every vertex
/// is included, so endpoints are always present.
std::vector<Point> densify(const Polyline& line, double spacing);

/// Sub-polyline between arc-length offsets [from, to] (clamped).
Polyline slice(const Polyline& line, double from, double to);

Polyline reversed(Polyline line);

}  // namespace cyclecheck::geo
