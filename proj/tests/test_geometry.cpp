#include <doctest.h>

#include <cmath>

#include "cyclecheck/geometry.hpp"

using namespace cyclecheck::geo;

TEST_CASE("distance and length") {
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
  Polyline line{{0, 0}, {3, 0}, {3, 4}};
  CHECK(length(line) == doctest::Approx(7.0));
  CHECK(length(Polyline{}) == 0.0);
  CHECK(length(Polyline{{1, 1}}) == 0.0);
}

TEST_CASE("interpolate") {
  const Point p = interpolate({0, 0}, {10, 20}, 0.25);
  CHECK(p.x == doctest::Approx(2.5));
  CHECK(p.y == doctest::Approx(5.0));
}

TEST_CASE("bbox and expand") {
  Polyline line{{1, 2}, {-3, 5}, {4, 0}};
  const Box b = bbox(line);
  CHECK(b.min.x == -3);
  CHECK(b.min.y == 0);
  CHECK(b.max.x == 4);
  CHECK(b.max.y == 5);
  const Box e = expand(b, 1.5);
  CHECK(e.min.x == doctest::Approx(-4.5));
  CHECK(e.max.y == doctest::Approx(6.5));
  CHECK(b.contains({0, 3}));
  CHECK_FALSE(b.contains({5, 3}));
  CHECK(b.intersects(Box{{4, 5}, {9, 9}}));
  CHECK_FALSE(b.intersects(Box{{4.1, 5}, {9, 9}}));
}

TEST_CASE("point to segment distance") {
  Point closest;
  CHECK(point_segment_distance({1, 1}, {0, 0}, {2, 0}, &closest) ==
        doctest::Approx(1.0));
  CHECK(closest.x == doctest::Approx(1.0));
  CHECK(closest.y == doctest::Approx(0.0));
  // clamped to endpoint
  CHECK(point_segment_distance({-3, 4}, {0, 0}, {2, 0}) == doctest::Approx(5.0));
  // degenerate segment
  CHECK(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
}

TEST_CASE("point to polyline distance") {
  Polyline line{{0, 0}, {10, 0}, {10, 10}};
  Point closest;
  CHECK(point_polyline_distance({5, -2}, line, &closest) == doctest::Approx(2.0));
  CHECK(closest.y == doctest::Approx(0.0));
  CHECK(point_polyline_distance({12, 5}, line) == doctest::Approx(2.0));
}

TEST_CASE("segment to segment distance") {
  // crossing segments touch
  CHECK(segment_segment_distance({0, 0}, {2, 2}, {0, 2}, {2, 0}) ==
        doctest::Approx(0.0));
  // parallel
  Point pa, pb;
  CHECK(segment_segment_distance({0, 0}, {4, 0}, {1, 3}, {3, 3}, &pa, &pb) ==
        doctest::Approx(3.0));
  CHECK(pa.y == doctest::Approx(0.0));
  CHECK(pb.y == doctest::Approx(3.0));
}

TEST_CASE("polyline to polyline distance") {
  Polyline a{{0, 0}, {10, 0}};
  Polyline b{{0, 4}, {10, 4}};
  CHECK(polyline_polyline_distance(a, b) == doctest::Approx(4.0));
  Polyline c{{5, -1}, {5, 1}};
  CHECK(polyline_polyline_distance(a, c) == doctest::Approx(0.0));
}

TEST_CASE("segment intersection") {
  SUBCASE("proper crossing") {
    const auto x = segment_intersection({0, 0}, {2, 2}, {0, 2}, {2, 0});
    REQUIRE(x.has_value());
    CHECK(x->x == doctest::Approx(1.0));
    CHECK(x->y == doctest::Approx(1.0));
  }
  SUBCASE("endpoint touch") {
    const auto x = segment_intersection({0, 0}, {1, 1}, {1, 1}, {2, 0});
    REQUIRE(x.has_value());
    CHECK(x->x == doctest::Approx(1.0));
  }
  SUBCASE("T touch") {
    const auto x = segment_intersection({0, 0}, {2, 0}, {1, 0}, {1, 5});
    REQUIRE(x.has_value());
    CHECK(x->x == doctest::Approx(1.0));
    CHECK(x->y == doctest::Approx(0.0));
  }
  SUBCASE("disjoint") {
    CHECK_FALSE(segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}).has_value());
  }
  SUBCASE("collinear overlap reports midpoint of shared extent") {
    const auto x = segment_intersection({0, 0}, {4, 0}, {2, 0}, {8, 0});
    REQUIRE(x.has_value());
    CHECK(x->x == doctest::Approx(3.0));
    CHECK(x->y == doctest::Approx(0.0));
  }
  SUBCASE("collinear disjoint") {
    CHECK_FALSE(segment_intersection({0, 0}, {1, 0}, {2, 0}, {3, 0}).has_value());
  }
}

TEST_CASE("polygon area and orientation") {
  Polygon ccw{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}};
  CHECK(signed_area(ccw) == doctest::Approx(16.0));
  CHECK(polygon_area(ccw) == doctest::Approx(16.0));
  Polygon cw{{{0, 0}, {0, 4}, {4, 4}, {4, 0}}};
  CHECK(signed_area(cw) == doctest::Approx(-16.0));
  CHECK(polygon_area(cw) == doctest::Approx(16.0));
}

TEST_CASE("point in polygon includes boundary") {
  Polygon sq{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}};
  CHECK(point_in_polygon({2, 2}, sq));
  CHECK(point_in_polygon({0, 2}, sq));   // edge
  CHECK(point_in_polygon({4, 4}, sq));   // vertex
  CHECK_FALSE(point_in_polygon({5, 2}, sq));
  CHECK_FALSE(point_in_polygon({-0.001, 2}, sq));
}

TEST_CASE("polygon simplicity") {
  Polygon sq{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}};
  CHECK(polygon_is_simple(sq));
  Polygon bowtie{{{0, 0}, {4, 4}, {4, 0}, {0, 4}}};
  CHECK_FALSE(polygon_is_simple(bowtie));
}

TEST_CASE("clip polyline to polygon") {
  Polygon sq{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}};
  SUBCASE("crossing line is trimmed") {
    const auto parts = clip_polyline_to_polygon({{-5, 5}, {15, 5}}, sq);
    REQUIRE(parts.size() == 1);
    CHECK(cyclecheck::geo::length(parts[0]) == doctest::Approx(10.0));
    CHECK(parts[0].front().x == doctest::Approx(0.0));
    CHECK(parts[0].back().x == doctest::Approx(10.0));
  }
  SUBCASE("inside line is kept whole") {
    const auto parts = clip_polyline_to_polygon({{1, 1}, {2, 2}, {3, 1}}, sq);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].size() == 3);
  }
  SUBCASE("outside line vanishes") {
    CHECK(clip_polyline_to_polygon({{20, 20}, {30, 30}}, sq).empty());
  }
  SUBCASE("line leaving and re-entering splits in two") {
    const auto parts =
        clip_polyline_to_polygon({{5, 5}, {5, 15}, {8, 15}, {8, 5}}, sq);
    REQUIRE(parts.size() == 2);
    CHECK(cyclecheck::geo::length(parts[0]) == doctest::Approx(5.0));
    CHECK(cyclecheck::geo::length(parts[1]) == doctest::Approx(5.0));
  }
}

TEST_CASE("segment and polyline clipped to box") {
  const Box box{{0, 0}, {10, 10}};
  SUBCASE("param interval") {
    const auto t = clip_segment_to_box({-10, 5}, {10, 5}, box);
    REQUIRE(t.has_value());
    CHECK(t->first == doctest::Approx(0.5));
    CHECK(t->second == doctest::Approx(1.0));
  }
  SUBCASE("disjoint") {
    CHECK_FALSE(clip_segment_to_box({-5, 20}, {5, 20}, box).has_value());
  }
  SUBCASE("clipped length") {
    Polyline line{{-10, 5}, {10, 5}, {10, 20}};
    CHECK(clipped_length_in_box(line, box) == doctest::Approx(15.0));
  }
}

TEST_CASE("polygon box intersection area") {
  Polygon sq{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}};
  CHECK(polygon_box_intersection_area(sq, Box{{5, 5}, {20, 20}}) ==
        doctest::Approx(25.0));
  CHECK(polygon_box_intersection_area(sq, Box{{-5, -5}, {15, 15}}) ==
        doctest::Approx(100.0));
  CHECK(polygon_box_intersection_area(sq, Box{{20, 20}, {30, 30}}) ==
        doctest::Approx(0.0));
}

TEST_CASE("densify keeps vertices and spacing bound") {
  Polyline line{{0, 0}, {10, 0}, {10, 5}};
  const auto pts = densify(line, 3.0);
  REQUIRE(pts.size() >= 4);
  CHECK(pts.front() == Point{0, 0});
  CHECK(pts.back() == Point{10, 5});
  // every vertex survives
  bool has_corner = false;
  for (const auto& p : pts) {
    if (p == Point{10, 0}) has_corner = true;
  }
  CHECK(has_corner);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(distance(pts[i - 1], pts[i]) <= 3.0 + 1e-9);
  }
}

TEST_CASE("slice extracts arc-length range") {
  Polyline line{{0, 0}, {10, 0}, {10, 10}};
  const Polyline mid = slice(line, 5.0, 15.0);
  CHECK(length(mid) == doctest::Approx(10.0));
  CHECK(mid.front().x == doctest::Approx(5.0));
  CHECK(mid.back().y == doctest::Approx(5.0));
  // clamped
  const Polyline all = slice(line, -5.0, 100.0);
  CHECK(length(all) == doctest::Approx(20.0));
}

TEST_CASE("reversed") {
  Polyline line{{0, 0}, {1, 0}, {2, 5}};
  const Polyline r = reversed(line);
  CHECK(r.front() == Point{2, 5});
  CHECK(r.back() == Point{0, 0});
}
