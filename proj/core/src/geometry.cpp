#include "cyclecheck/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cyclecheck::geo {

namespace {

constexpr double kEps = 1e-12;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dot(double ax, double ay, double bx, double by) {
  return ax * bx + ay * by;
}

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double length(const Polyline& line) {
  double total = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    total += distance(line[i - 1], line[i]);
  }
  return total;
}

Box bbox(const Polyline& line) {
  Box b{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
        {std::numeric_limits<double>::lowest(),
         std::numeric_limits<double>::lowest()}};
  for (const Point& p : line) {
    b.min.x = std::min(b.min.x, p.x);
    b.min.y = std::min(b.min.y, p.y);
    b.max.x = std::max(b.max.x, p.x);
    b.max.y = std::max(b.max.y, p.y);
  }
  return b;
}

Box bbox(const Polygon& poly) { return bbox(poly.ring); }

Box expand(const Box& b, double margin) {
  return {{b.min.x - margin, b.min.y - margin},
          {b.max.x + margin, b.max.y + margin}};
}

Point interpolate(const Point& a, const Point& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

double point_segment_distance(const Point& p, const Point& a, const Point& b,
                              Point* closest) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = dot(p.x - a.x, p.y - a.y, dx, dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const Point c = interpolate(a, b, t);
  if (closest != nullptr) *closest = c;
  return distance(p, c);
}

double point_polyline_distance(const Point& p, const Polyline& line,
                               Point* closest) {
  double best = std::numeric_limits<double>::max();
  if (line.size() == 1) {
    if (closest != nullptr) *closest = line[0];
    return distance(p, line[0]);
  }
  for (std::size_t i = 1; i < line.size(); ++i) {
    Point c;
    const double d = point_segment_distance(p, line[i - 1], line[i], &c);
    if (d < best) {
      best = d;
      if (closest != nullptr) *closest = c;
    }
  }
  return best;
}

double segment_segment_distance(const Point& a1, const Point& a2,
                                const Point& b1, const Point& b2, Point* pa,
                                Point* pb) {
  if (const auto x = segment_intersection(a1, a2, b1, b2)) {
    if (pa != nullptr) *pa = *x;
    if (pb != nullptr) *pb = *x;
    return 0.0;
  }
  double best = std::numeric_limits<double>::max();
  Point ca, cb;
  Point c;
  double d = point_segment_distance(a1, b1, b2, &c);
  if (d < best) { best = d; ca = a1; cb = c; }
  d = point_segment_distance(a2, b1, b2, &c);
  if (d < best) { best = d; ca = a2; cb = c; }
  d = point_segment_distance(b1, a1, a2, &c);
  if (d < best) { best = d; ca = c; cb = b1; }
  d = point_segment_distance(b2, a1, a2, &c);
  if (d < best) { best = d; ca = c; cb = b2; }
  if (pa != nullptr) *pa = ca;
  if (pb != nullptr) *pb = cb;
  return best;
}

double polyline_polyline_distance(const Polyline& a, const Polyline& b,
                                  Point* pa, Point* pb) {
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < b.size(); ++j) {
      Point ca, cb;
      const double d = segment_segment_distance(a[i - 1], a[i], b[j - 1], b[j],
                                                &ca, &cb);
      if (d < best) {
        best = d;
        if (pa != nullptr) *pa = ca;
        if (pb != nullptr) *pb = cb;
        if (best == 0.0) return 0.0;
      }
    }
  }
  return best;
}

std::optional<Point> segment_intersection(const Point& a1, const Point& a2,
                                          const Point& b1, const Point& b2) {
  const double d1 = cross(b1, b2, a1);
  const double d2 = cross(b1, b2, a2);
  const double d3 = cross(a1, a2, b1);
  const double d4 = cross(a1, a2, b2);

  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    const double t = d1 / (d1 - d2);
    return interpolate(a1, a2, t);
  }

  auto on_segment = [](const Point& p, const Point& q, const Point& r) {
    return std::min(p.x, r.x) - kEps <= q.x && q.x <= std::max(p.x, r.x) + kEps &&
           std::min(p.y, r.y) - kEps <= q.y && q.y <= std::max(p.y, r.y) + kEps;
  };

  // Collinear overlap: report the midpoint of the shared extent.
  if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
    const bool vertical = std::abs(a2.x - a1.x) < std::abs(a2.y - a1.y);
    auto key = [vertical](const Point& p) { return vertical ? p.y : p.x; };
    const double lo = std::max(std::min(key(a1), key(a2)), std::min(key(b1), key(b2)));
    const double hi = std::min(std::max(key(a1), key(a2)), std::max(key(b1), key(b2)));
    if (lo > hi) return std::nullopt;
    const double mid = 0.5 * (lo + hi);
    const double alen = key(a2) - key(a1);
    if (alen == 0.0) return a1;
    const double t = (mid - key(a1)) / alen;
    return interpolate(a1, a2, t);
  }

  if (d1 == 0 && on_segment(b1, a1, b2)) return a1;
  if (d2 == 0 && on_segment(b1, a2, b2)) return a2;
  if (d3 == 0 && on_segment(a1, b1, a2)) return b1;
  if (d4 == 0 && on_segment(a1, b2, a2)) return b2;
  return std::nullopt;
}

double signed_area(const Polygon& poly) {
  const auto& r = poly.ring;
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Point& p = r[i];
    const Point& q = r[(i + 1) % r.size()];
    acc += p.x * q.y - q.x * p.y;
  }
  return 0.5 * acc;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

bool point_in_polygon(const Point& p, const Polygon& poly) {
  const auto& r = poly.ring;
  bool inside = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const Point& a = r[j];
    const Point& b = r[i];
    if (point_segment_distance(p, a, b) <= kEps) return true;  // on boundary
    if ((b.y > p.y) != (a.y > p.y)) {
      const double xint = (a.x - b.x) * (p.y - b.y) / (a.y - b.y) + b.x;
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

bool polygon_is_simple(const Polygon& poly) {
  const auto& r = poly.ring;
  const std::size_t n = r.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent ring segments share a vertex by construction
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segment_intersection(r[i], r[(i + 1) % n], r[j], r[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Polyline> clip_polyline_to_polygon(const Polyline& line,
                                               const Polygon& poly) {
  std::vector<Polyline> result;
  Polyline current;

  auto flush = [&]() {
    if (current.size() >= 2 && length(current) > 0.0) {
      result.push_back(current);
    }
    current.clear();
  };

  const auto& ring = poly.ring;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Point a = line[i - 1];
    const Point b = line[i];

    // split the segment at every boundary crossing
    std::vector<double> ts{0.0, 1.0};
    for (std::size_t j = 0; j < ring.size(); ++j) {
      const Point& r1 = ring[j];
      const Point& r2 = ring[(j + 1) % ring.size()];
      if (auto x = segment_intersection(a, b, r1, r2)) {
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len2 = dx * dx + dy * dy;
        if (len2 > 0.0) {
          const double t =
              std::clamp(((x->x - a.x) * dx + (x->y - a.y) * dy) / len2, 0.0, 1.0);
          ts.push_back(t);
        }
      }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double p, double q) { return std::abs(p - q) < kEps; }),
             ts.end());

    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const Point p0 = interpolate(a, b, ts[k]);
      const Point p1 = interpolate(a, b, ts[k + 1]);
      const Point mid = interpolate(p0, p1, 0.5);
      if (point_in_polygon(mid, poly)) {
        if (current.empty()) {
          current.push_back(p0);
        } else if (!(current.back() == p0)) {
          // discontinuity within the polygon cannot happen; guard anyway
          flush();
          current.push_back(p0);
        }
        current.push_back(p1);
      } else {
        flush();
      }
    }
  }
  flush();
  return result;
}

std::optional<std::pair<double, double>> clip_segment_to_box(const Point& a,
                                                             const Point& b,
                                                             const Box& box) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;

  auto clip = [&](double p, double q) -> bool {
    if (p == 0.0) return q >= 0.0;
    const double t = q / p;
    if (p < 0.0) {
      if (t > t1) return false;
      if (t > t0) t0 = t;
    } else {
      if (t < t0) return false;
      if (t < t1) t1 = t;
    }
    return true;
  };

  if (clip(-dx, a.x - box.min.x) && clip(dx, box.max.x - a.x) &&
      clip(-dy, a.y - box.min.y) && clip(dy, box.max.y - a.y)) {
    return std::make_pair(t0, t1);
  }
  return std::nullopt;
}

double clipped_length_in_box(const Polyline& line, const Box& box) {
  double total = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (auto t = clip_segment_to_box(line[i - 1], line[i], box)) {
      total += distance(line[i - 1], line[i]) * (t->second - t->first);
    }
  }
  return total;
}

double polygon_box_intersection_area(const Polygon& poly, const Box& box) {
  // Sutherland-Hodgman against the four half-planes of the box.
  std::vector<Point> subject = poly.ring;
  auto clip_halfplane = [&](auto inside, auto intersect) {
    std::vector<Point> out;
    const std::size_t n = subject.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& cur = subject[i];
      const Point& prev = subject[(i + n - 1) % n];
      const bool cur_in = inside(cur);
      const bool prev_in = inside(prev);
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur));
      }
    }
    subject = std::move(out);
  };

  auto x_at = [](const Point& p, const Point& q, double x) {
    const double t = (x - p.x) / (q.x - p.x);
    return Point{x, p.y + (q.y - p.y) * t};
  };
  auto y_at = [](const Point& p, const Point& q, double y) {
    const double t = (y - p.y) / (q.y - p.y);
    return Point{p.x + (q.x - p.x) * t, y};
  };

  clip_halfplane([&](const Point& p) { return p.x >= box.min.x; },
                 [&](const Point& p, const Point& q) { return x_at(p, q, box.min.x); });
  if (subject.empty()) return 0.0;
  clip_halfplane([&](const Point& p) { return p.x <= box.max.x; },
                 [&](const Point& p, const Point& q) { return x_at(p, q, box.max.x); });
  if (subject.empty()) return 0.0;
  clip_halfplane([&](const Point& p) { return p.y >= box.min.y; },
                 [&](const Point& p, const Point& q) { return y_at(p, q, box.min.y); });
  if (subject.empty()) return 0.0;
  clip_halfplane([&](const Point& p) { return p.y <= box.max.y; },
                 [&](const Point& p, const Point& q) { return y_at(p, q, box.max.y); });
  if (subject.size() < 3) return 0.0;
  return polygon_area(Polygon{subject});
}

std::vector<Point> densify(const Polyline& line, double spacing) {
  std::vector<Point> pts;
  if (line.empty()) return pts;
  pts.push_back(line.front());
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double seg_len = distance(line[i - 1], line[i]);
    const int n = std::max(1, static_cast<int>(std::ceil(seg_len / spacing)));
    for (int k = 1; k <= n; ++k) {
      pts.push_back(interpolate(line[i - 1], line[i],
                                static_cast<double>(k) / n));
    }
  }
  return pts;
}

Polyline slice(const Polyline& line, double from, double to) {
  Polyline out;
  const double total = length(line);
  from = std::clamp(from, 0.0, total);
  to = std::clamp(to, from, total);

  double walked = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double seg = distance(line[i - 1], line[i]);
    const double seg_start = walked;
    const double seg_end = walked + seg;
    if (seg > 0.0 && seg_end >= from && seg_start <= to) {
      const double t0 = std::clamp((from - seg_start) / seg, 0.0, 1.0);
      const double t1 = std::clamp((to - seg_start) / seg, 0.0, 1.0);
      const Point p0 = interpolate(line[i - 1], line[i], t0);
      const Point p1 = interpolate(line[i - 1], line[i], t1);
      if (out.empty()) {
        out.push_back(p0);
      }
      if (!(out.back() == p1)) out.push_back(p1);
    }
    walked = seg_end;
  }
  if (out.size() == 1) out.push_back(out.front());
  return out;
}

Polyline reversed(Polyline line) {
  std::reverse(line.begin(), line.end());
  return line;
}

}  // namespace cyclecheck::geo
