#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/matching.hpp"

using namespace cyclecheck;

namespace {

EdgeRecord rec(std::string id, geo::Polyline geom,
               Protection prot = Protection::Unprotected,
               bool bidirectional = false) {
  EdgeRecord r;
  r.source_id = std::move(id);
  r.geometry = std::move(geom);
  r.protection = prot;
  r.bidirectional = bidirectional;
  return r;
}

NetworkGraph graph_of(std::vector<EdgeRecord> recs) {
  return build_graph(recs, 0.001);
}

// brute-force reference at 100x finer sampling
double hausdorff_oracle(const geo::Polyline& a, const geo::Polyline& b) {
  double worst = 0.0;
  for (const auto& p : geo::densify(a, 0.01)) {
    worst = std::max(worst, geo::point_polyline_distance(p, b));
  }
  for (const auto& p : geo::densify(b, 0.01)) {
    worst = std::max(worst, geo::point_polyline_distance(p, a));
  }
  return worst;
}

}  // namespace

TEST_CASE("segmentize: 25 m edge in 10 m pieces") {
  const auto g = graph_of({rec("a", {{0, 0}, {25, 0}})});
  const auto segs = segmentize(g, 10.0);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].length == doctest::Approx(10.0));
  CHECK(segs[1].length == doctest::Approx(10.0));
  CHECK(segs[2].length == doctest::Approx(5.0));
  CHECK(segs[0].part_index == 0);
  CHECK(segs[2].part_index == 2);
  CHECK(segs[0].segment_id == 0);
  CHECK(segs[2].segment_id == 2);
  for (const auto& s : segs) CHECK(s.edge_id == 0);
  // pieces chain: each starts where the previous ended
  CHECK(segs[0].geometry.back() == segs[1].geometry.front());
  CHECK(segs[1].geometry.back() == segs[2].geometry.front());
  CHECK(segs[0].geometry.front() == geo::Point{0, 0});
  CHECK(segs[2].geometry.back() == geo::Point{25, 0});
}

TEST_CASE("segmentize: exact and just-short edges give one piece") {
  const auto g =
      graph_of({rec("a", {{0, 0}, {10, 0}}), rec("b", {{0, 5}, {9.99, 5}})});
  const auto segs = segmentize(g, 10.0);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].length == doctest::Approx(10.0));
  CHECK(segs[0].edge_id == 0);
  CHECK(segs[1].length == doctest::Approx(9.99));
  CHECK(segs[1].edge_id == 1);
  CHECK(segs[1].segment_id == 1);
}

TEST_CASE("segmentize: lengths re-add to edge length, corners preserved") {
  // L-shaped edge, 20 m total, cut at the corner
  const auto g = graph_of({rec("a", {{0, 0}, {10, 0}, {10, 10}})});
  const auto segs = segmentize(g, 10.0);
  REQUIRE(segs.size() == 2);
  double sum = 0.0;
  for (const auto& s : segs) sum += s.length;
  const double total = g.edges()[0].geometric_length;
  CHECK(sum == doctest::Approx(total).epsilon(1e-9));
  CHECK(segs[0].geometry.back() == geo::Point{10, 0});
}

TEST_CASE("segmentize: random networks conserve length") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> coord(0.0, 500.0);
  std::vector<EdgeRecord> recs;
  for (int i = 0; i < 50; ++i) {
    geo::Polyline line{{coord(rng), coord(rng)}};
    for (int v = 0; v < 3; ++v) {
      line.push_back({line.back().x + coord(rng) / 20.0,
                      line.back().y + coord(rng) / 20.0});
    }
    recs.push_back(rec("r" + std::to_string(i), line));
  }
  const auto g = graph_of(recs);
  const auto segs = segmentize(g, 10.0);
  std::vector<double> per_edge(g.edges().size(), 0.0);
  for (const auto& s : segs) {
    CHECK(s.length > 0.0);
    CHECK(s.length <= 10.0 + 1e-9);
    per_edge[static_cast<std::size_t>(s.edge_id)] += s.length;
  }
  for (const GraphEdge& e : g.edges()) {
    CHECK(per_edge[static_cast<std::size_t>(e.edge_id)] ==
          doctest::Approx(e.geometric_length).epsilon(1e-9));
  }
}

TEST_CASE("segmentize rejects nonpositive piece length") {
  const auto g = graph_of({rec("a", {{0, 0}, {10, 0}})});
  CHECK_THROWS_AS(segmentize(g, 0.0), ConfigError);
}

TEST_CASE("undirected_hausdorff: identity, parallel offset, perpendicular") {
  const geo::Polyline a{{0, 0}, {10, 0}};
  CHECK(undirected_hausdorff(a, a) <= 1e-9);

  const geo::Polyline b{{0, 2}, {10, 2}};
  CHECK(undirected_hausdorff(a, b) == doctest::Approx(2.0));
  CHECK(undirected_hausdorff(b, a) == undirected_hausdorff(a, b));

  // perpendicular through the midpoint: farthest samples are the endpoints,
  // each 5 m from the other line
  const geo::Polyline c{{-5, 0}, {5, 0}};
  const geo::Polyline d{{0, -5}, {0, 5}};
  CHECK(undirected_hausdorff(c, d) == doctest::Approx(5.0));
  CHECK(undirected_hausdorff(c, d) ==
        doctest::Approx(hausdorff_oracle(c, d)).epsilon(1e-6));
}

TEST_CASE("undirected_hausdorff tracks a fine-grained oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coord(0.0, 30.0);
  for (int trial = 0; trial < 25; ++trial) {
    const geo::Polyline a{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    const geo::Polyline b{{coord(rng), coord(rng)},
                          {coord(rng), coord(rng)},
                          {coord(rng), coord(rng)}};
    const double mine = undirected_hausdorff(a, b);
    const double oracle = hausdorff_oracle(a, b);
    CHECK(mine == undirected_hausdorff(b, a));
    CHECK(mine <= oracle + 1e-9);          // coarse sampling cannot overshoot
    CHECK(oracle - mine <= 0.5 + 1e-9);    // and lags by at most spacing/2
  }
}

TEST_CASE("segment_angle: axis cases and reversal invariance") {
  const geo::Polyline east{{0, 0}, {10, 0}};
  const geo::Polyline east2{{5, 3}, {25, 3}};
  const geo::Polyline west{{10, 5}, {0, 5}};
  const geo::Polyline north{{2, 0}, {2, 8}};
  const geo::Polyline diag{{0, 0}, {7, 7}};
  CHECK(segment_angle(east, east2) == doctest::Approx(0.0));
  CHECK(segment_angle(east, west) == doctest::Approx(0.0));
  CHECK(segment_angle(east, north) == doctest::Approx(90.0));
  CHECK(segment_angle(east, diag) == doctest::Approx(45.0));
  CHECK(segment_angle(diag, east) == doctest::Approx(45.0));
  CHECK(segment_angle(east, geo::reversed(diag)) == doctest::Approx(45.0));
  // chord of a bent polyline, not its first leg
  const geo::Polyline bent{{0, 0}, {5, 5}, {10, 0}};
  CHECK(segment_angle(east, bent) == doctest::Approx(0.0));
}

TEST_CASE("segment_angle rejects zero chords") {
  const geo::Polyline loop{{0, 0}, {5, 5}, {10, 0}, {0, 0}};
  const geo::Polyline line{{0, 0}, {10, 0}};
  CHECK_THROWS_AS(segment_angle(loop, line), std::invalid_argument);
  CHECK_THROWS_AS(segment_angle(line, loop), std::invalid_argument);
}

TEST_CASE("match_segments: identical copy matches every segment at zero") {
  const auto g = graph_of({rec("a", {{0, 0}, {25, 0}}),
                           rec("b", {{5, 40}, {5, 18}})});
  const auto src = segmentize(g, 10.0);
  const auto tgt = segmentize(g, 10.0);
  const auto matches = match_segments(src, tgt, MatchParams{});
  REQUIRE(matches.size() == src.size());
  for (std::size_t i = 0; i < matches.size(); ++i) {
    REQUIRE(matches[i].matched_id.has_value());
    CHECK(*matches[i].matched_id == src[i].segment_id);
    CHECK(matches[i].hausdorff <= 1e-9);
    CHECK(matches[i].angle <= 1e-9);
  }
}

TEST_CASE("match_segments: 1 m lateral shift matches with hausdorff 1") {
  const auto g = graph_of({rec("a", {{0, 0}, {30, 0}})});
  const auto g2 = graph_of({rec("a", {{0, 1}, {30, 1}})});
  const auto src = segmentize(g, 10.0);
  const auto tgt = segmentize(g2, 10.0);
  const auto matches = match_segments(src, tgt, MatchParams{});
  REQUIRE(matches.size() == 3);
  for (const auto& m : matches) {
    REQUIRE(m.matched_id.has_value());
    CHECK(m.hausdorff == doctest::Approx(1.0));
    CHECK(m.angle == doctest::Approx(0.0));
  }
}

TEST_CASE("match_segments: nothing inside the buffer stays unmatched") {
  const auto g = graph_of({rec("a", {{0, 0}, {10, 0}})});
  const auto g2 = graph_of({rec("a", {{0, 20}, {10, 20}})});
  const auto matches =
      match_segments(segmentize(g, 10.0), segmentize(g2, 10.0), MatchParams{});
  REQUIRE(matches.size() == 1);
  CHECK(!matches[0].matched_id.has_value());
}

TEST_CASE("match_segments: hausdorff tie broken by angle, then id") {
  MatchParams params;
  SUBCASE("angle decides") {
    const auto g = graph_of({rec("src", {{0, 0}, {10, 0}})});
    // both candidates have hausdorff exactly 2; the slanted one comes first
    // in id order but loses on angle
    const auto tg = graph_of(
        {rec("slanted", {{0, -2}, {10, 0}}), rec("flat", {{0, 2}, {10, 2}})});
    const auto matches =
        match_segments(segmentize(g, 30.0), segmentize(tg, 30.0), params);
    REQUIRE(matches.size() == 1);
    REQUIRE(matches[0].matched_id.has_value());
    CHECK(*matches[0].matched_id == 1);
    CHECK(matches[0].hausdorff == doctest::Approx(2.0));
    CHECK(matches[0].angle == doctest::Approx(0.0));
  }
  SUBCASE("full tie goes to the lower target id") {
    const auto g = graph_of({rec("src", {{0, 0}, {10, 0}})});
    const auto tg = graph_of(
        {rec("above", {{0, 2}, {10, 2}}), rec("below", {{0, -2}, {10, -2}})});
    const auto matches =
        match_segments(segmentize(g, 30.0), segmentize(tg, 30.0), params);
    REQUIRE(matches.size() == 1);
    REQUIRE(matches[0].matched_id.has_value());
    CHECK(*matches[0].matched_id == 0);
  }
}

TEST_CASE("match_segments: a target may serve several sources") {
  const auto g = graph_of(
      {rec("s1", {{0, 1}, {10, 1}}), rec("s2", {{0, -1}, {10, -1}})});
  const auto tg = graph_of({rec("t", {{0, 0}, {10, 0}})});
  const auto matches =
      match_segments(segmentize(g, 30.0), segmentize(tg, 30.0), MatchParams{});
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].matched_id == matches[1].matched_id);
}

TEST_CASE("match_segments: zero-chord segments neither match nor throw") {
  // closed square ring collapses to one self-loop edge; one 40 m piece with
  // identical first and last vertex
  const auto loop = simplify(graph_of({rec("r", {{0, 0}, {10, 0}, {10, 10},
                                                 {0, 10}, {0, 0}})}));
  REQUIRE(loop.edges().size() == 1);
  REQUIRE(loop.edges()[0].is_self_loop());
  const auto loop_segs = segmentize(loop, 100.0);
  REQUIRE(loop_segs.size() == 1);
  REQUIRE(loop_segs[0].geometry.front() == loop_segs[0].geometry.back());

  const auto line = graph_of({rec("l", {{0, 0}, {10, 0}})});
  const auto line_segs = segmentize(line, 100.0);

  const auto fwd = match_segments(loop_segs, line_segs, MatchParams{});
  REQUIRE(fwd.size() == 1);
  CHECK(!fwd[0].matched_id.has_value());
  const auto rev = match_segments(line_segs, loop_segs, MatchParams{});
  REQUIRE(rev.size() == 1);
  CHECK(!rev[0].matched_id.has_value());
}

TEST_CASE("match_segments: every reported match respects both thresholds") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coord(0.0, 200.0);
  std::uniform_real_distribution<double> jitter(-6.0, 6.0);
  std::vector<EdgeRecord> src_recs, tgt_recs;
  for (int i = 0; i < 30; ++i) {
    const geo::Point p{coord(rng), coord(rng)};
    const geo::Point q{p.x + coord(rng) / 10.0, p.y + coord(rng) / 10.0};
    src_recs.push_back(rec("s" + std::to_string(i), {p, q}));
    tgt_recs.push_back(rec("t" + std::to_string(i),
                           {{p.x + jitter(rng), p.y + jitter(rng)},
                            {q.x + jitter(rng), q.y + jitter(rng)}}));
  }
  const auto src = segmentize(graph_of(src_recs), 10.0);
  const auto tgt = segmentize(graph_of(tgt_recs), 10.0);
  MatchParams params;
  const auto matches = match_segments(src, tgt, params);
  REQUIRE(matches.size() == src.size());
  std::size_t matched = 0;
  for (const auto& m : matches) {
    if (!m.matched_id) continue;
    ++matched;
    CHECK(m.hausdorff <= params.hausdorff_threshold);
    CHECK(m.angle <= params.angle_threshold);
  }
  CHECK(matched > 0);
}

TEST_CASE("match_segments: rigid translation leaves decisions unchanged") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::vector<EdgeRecord> src_recs, tgt_recs, src_recs2, tgt_recs2;
  const double dx = 10000.0, dy = -2500.0;
  for (int i = 0; i < 15; ++i) {
    const geo::Point p{coord(rng), coord(rng)};
    const geo::Point q{p.x + 5.0 + coord(rng) / 10.0, p.y + coord(rng) / 10.0};
    const geo::Point tp{p.x + 1.0, p.y - 0.5};
    const geo::Point tq{q.x + 1.0, q.y - 0.5};
    src_recs.push_back(rec("s" + std::to_string(i), {p, q}));
    tgt_recs.push_back(rec("t" + std::to_string(i), {tp, tq}));
    src_recs2.push_back(
        rec("s" + std::to_string(i), {{p.x + dx, p.y + dy}, {q.x + dx, q.y + dy}}));
    tgt_recs2.push_back(
        rec("t" + std::to_string(i), {{tp.x + dx, tp.y + dy}, {tq.x + dx, tq.y + dy}}));
  }
  const auto m1 = match_segments(segmentize(graph_of(src_recs), 10.0),
                                 segmentize(graph_of(tgt_recs), 10.0),
                                 MatchParams{});
  const auto m2 = match_segments(segmentize(graph_of(src_recs2), 10.0),
                                 segmentize(graph_of(tgt_recs2), 10.0),
                                 MatchParams{});
  REQUIRE(m1.size() == m2.size());
  for (std::size_t i = 0; i < m1.size(); ++i) {
    CHECK(m1[i].matched_id == m2[i].matched_id);
  }
}

TEST_CASE("aggregate_matches: full match, fraction 1") {
  const auto g = graph_of({rec("a", {{0, 0}, {25, 0}})});
  const auto src = segmentize(g, 10.0);
  const auto matches = match_segments(src, src, MatchParams{});
  const auto summaries =
      aggregate_matches(matches, src, src, g, g, {"protection"}, 0.5);
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].matched_fraction == doctest::Approx(1.0));
  CHECK(summaries[0].matched);
  REQUIRE(summaries[0].attribute_agreement.size() == 1);
  CHECK(summaries[0].attribute_agreement[0].first == "protection");
  CHECK(summaries[0].attribute_agreement[0].second == Agreement::Agree);
}

TEST_CASE("aggregate_matches: one of three segments is below a 0.5 cut") {
  const auto g = graph_of({rec("a", {{0, 0}, {30, 0}})});
  const auto tg = graph_of({rec("t", {{0, 1}, {10, 1}})});
  MatchParams params;
  params.hausdorff_threshold = 5.0;  // keeps far segments from matching
  const auto src = segmentize(g, 10.0);
  const auto tgt = segmentize(tg, 10.0);
  const auto matches = match_segments(src, tgt, params);
  REQUIRE(matches.size() == 3);
  CHECK(matches[0].matched_id.has_value());
  CHECK(!matches[1].matched_id.has_value());
  CHECK(!matches[2].matched_id.has_value());
  const auto summaries = aggregate_matches(matches, src, tgt, g, tg, {}, 0.5);
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].matched_fraction == doctest::Approx(1.0 / 3.0));
  CHECK(!summaries[0].matched);
}

TEST_CASE("aggregate_matches: attribute agreement against the counterpart") {
  SUBCASE("differing protection disagrees") {
    const auto g =
        graph_of({rec("a", {{0, 0}, {20, 0}}, Protection::Protected)});
    const auto tg =
        graph_of({rec("t", {{0, 1}, {20, 1}}, Protection::Unprotected)});
    const auto src = segmentize(g, 10.0);
    const auto tgt = segmentize(tg, 10.0);
    const auto matches = match_segments(src, tgt, MatchParams{});
    const auto summaries = aggregate_matches(
        matches, src, tgt, g, tg, {"protection", "bidirectional"}, 0.5);
    REQUIRE(summaries.size() == 1);
    CHECK(summaries[0].matched);
    CHECK(summaries[0].attribute_agreement[0].second == Agreement::Disagree);
    CHECK(summaries[0].attribute_agreement[1].second == Agreement::Agree);
  }
  SUBCASE("unmatched edges are unknown") {
    const auto g = graph_of({rec("a", {{0, 0}, {20, 0}})});
    const auto tg = graph_of({rec("t", {{0, 50}, {20, 50}})});
    const auto src = segmentize(g, 10.0);
    const auto tgt = segmentize(tg, 10.0);
    const auto matches = match_segments(src, tgt, MatchParams{});
    const auto summaries =
        aggregate_matches(matches, src, tgt, g, tg, {"protection"}, 0.5);
    CHECK(!summaries[0].matched);
    CHECK(summaries[0].attribute_agreement[0].second == Agreement::Unknown);
  }
  SUBCASE("length-weighted majority wins") {
    // 30 m protected source; 20 m of protected counterpart outvotes 10 m of
    // unprotected counterpart
    const auto g =
        graph_of({rec("a", {{0, 0}, {30, 0}}, Protection::Protected)});
    const auto tg = graph_of(
        {rec("t1", {{0, 1}, {20, 1}}, Protection::Protected),
         rec("t2", {{20.5, -1}, {30, -1}}, Protection::Unprotected)});
    const auto src = segmentize(g, 10.0);
    const auto tgt = segmentize(tg, 10.0);
    MatchParams params;
    params.hausdorff_threshold = 4.0;
    const auto matches = match_segments(src, tgt, params);
    const auto summaries =
        aggregate_matches(matches, src, tgt, g, tg, {"protection"}, 0.5);
    REQUIRE(summaries.size() == 1);
    CHECK(summaries[0].matched);
    CHECK(summaries[0].attribute_agreement[0].second == Agreement::Agree);
  }
}

TEST_CASE("aggregate_matches validates inputs") {
  const auto g = graph_of({rec("a", {{0, 0}, {10, 0}})});
  const auto src = segmentize(g, 10.0);
  const auto matches = match_segments(src, src, MatchParams{});
  CHECK_THROWS_AS(aggregate_matches(matches, src, src, g, g, {}, 0.0),
                  ConfigError);
  CHECK_THROWS_AS(aggregate_matches(matches, src, src, g, g, {}, 1.5),
                  ConfigError);
  CHECK_THROWS_AS(
      aggregate_matches(matches, src, src, g, g, {"surface"}, 0.5),
      ConfigError);
}

TEST_CASE("match params validation") {
  const auto g = graph_of({rec("a", {{0, 0}, {10, 0}})});
  const auto segs = segmentize(g, 10.0);
  MatchParams params;
  params.buffer_distance = 0.0;
  CHECK_THROWS_AS(match_segments(segs, segs, params), ConfigError);
}

TEST_CASE("unmatched_report collects both directions") {
  SUBCASE("identical data sets leave both layers empty") {
    const auto g = graph_of({rec("a", {{0, 0}, {25, 0}})});
    const auto segs = segmentize(g, 10.0);
    const auto matches = match_segments(segs, segs, MatchParams{});
    const auto summary = aggregate_matches(matches, segs, segs, g, g, {}, 0.5);
    const auto report = unmatched_report(summary, summary);
    CHECK(report.unmatched_a.empty());
    CHECK(report.unmatched_b.empty());
  }
  SUBCASE("one-sided edges land in their own layer") {
    const auto a = graph_of(
        {rec("shared", {{0, 0}, {20, 0}}), rec("only_a", {{0, 100}, {20, 100}})});
    const auto b = graph_of({rec("shared", {{0, 0}, {20, 0}})});
    const auto sa = segmentize(a, 10.0);
    const auto sb = segmentize(b, 10.0);
    const auto ma = match_segments(sa, sb, MatchParams{});
    const auto mb = match_segments(sb, sa, MatchParams{});
    const auto sum_a = aggregate_matches(ma, sa, sb, a, b, {}, 0.5);
    const auto sum_b = aggregate_matches(mb, sb, sa, b, a, {}, 0.5);
    const auto report = unmatched_report(sum_a, sum_b);
    REQUIRE(report.unmatched_a.size() == 1);
    CHECK(report.unmatched_a[0] == 1);
    CHECK(report.unmatched_b.empty());
  }
}

TEST_CASE("agreement names") {
  CHECK(to_string(Agreement::Agree) == "agree");
  CHECK(to_string(Agreement::Disagree) == "disagree");
  CHECK(to_string(Agreement::Unknown) == "unknown");
}
