#include <doctest.h>

#include <string>
#include <vector>

#include "cyclecheck/errors.hpp"
#include "cyclecheck/tags.hpp"

using namespace cyclecheck;

namespace {

StudyArea square_area(double size) {
  StudyArea a;
  a.boundary.ring = {{0, 0}, {size, 0}, {size, size}, {0, size}};
  a.crs_label = "local";
  a.declared_unit = "meter";
  return a;
}

EdgeRecord tagged_edge(std::string id, geo::Polyline geom, TagMap tags,
                       bool bidirectional = false) {
  EdgeRecord r;
  r.source_id = std::move(id);
  r.geometry = std::move(geom);
  r.tags = std::move(tags);
  r.bidirectional = bidirectional;
  return r;
}

NetworkGraph graph_of(std::vector<EdgeRecord> recs) {
  return build_graph(recs, 0.001);
}

ContradictionRule equals_rule(std::string k1, std::string v1, std::string k2,
                              std::string v2) {
  ContradictionRule r;
  r.first = {std::move(k1), PredicateOp::Equals, {std::move(v1)}};
  r.second = {std::move(k2), PredicateOp::Equals, {std::move(v2)}};
  return r;
}

}  // namespace

TEST_CASE("missing_tags: tagged edge gets no flag and full coverage") {
  const auto g = graph_of(
      {tagged_edge("a", {{10, 50}, {90, 50}}, {{"surface", "asphalt"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface"};
  const auto res = missing_tags(g, cfg, grid);
  CHECK(res.flags.empty());
  REQUIRE(res.coverage.size() == 1);
  const double* pct = res.coverage[0].get("coverage_surface_pct");
  REQUIRE(pct != nullptr);
  CHECK(*pct == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("missing_tags: edge without the key gets one flag per key") {
  const auto g =
      graph_of({tagged_edge("a", {{10, 50}, {90, 50}}, {{"highway", "cycleway"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface", "lit"};
  const auto res = missing_tags(g, cfg, grid);
  REQUIRE(res.flags.size() == 2);
  CHECK(res.flags[0].edge_id == 0);
  CHECK(res.flags[0].kind == TagFlagKind::MissingTag);
  CHECK(res.flags[0].detail == "surface");
  CHECK(res.flags[0].rule_index == 0);
  CHECK(res.flags[1].detail == "lit");
  CHECK(res.flags[1].rule_index == 1);
}

TEST_CASE("missing_tags: 60 m tagged plus 40 m untagged gives 60% coverage") {
  const auto g = graph_of(
      {tagged_edge("t", {{10, 20}, {70, 20}}, {{"surface", "asphalt"}}),
       tagged_edge("u", {{10, 80}, {50, 80}}, {{"highway", "cycleway"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface"};
  const auto res = missing_tags(g, cfg, grid);
  REQUIRE(res.coverage.size() == 1);
  const double pct = *res.coverage[0].get("coverage_surface_pct");
  CHECK(pct == doctest::Approx(60.0).epsilon(1e-12));
  // coverage plus its complement closes to 100 exactly up to rounding
  CHECK(pct + (100.0 - pct) == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("missing_tags: coverage weights by infrastructure length") {
  // 50 m tagged bidirectional (counts 100) + 50 m untagged one-way (counts 50)
  const auto g = graph_of(
      {tagged_edge("t", {{10, 20}, {60, 20}}, {{"surface", "asphalt"}}, true),
       tagged_edge("u", {{10, 80}, {60, 80}}, {})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface"};
  const auto res = missing_tags(g, cfg, grid);
  REQUIRE(res.coverage.size() == 1);
  CHECK(*res.coverage[0].get("coverage_surface_pct") ==
        doctest::Approx(100.0 * 100.0 / 150.0).epsilon(1e-12));
}

TEST_CASE("missing_tags: merged edge counts a key present iff in all constituents") {
  const auto g0 = graph_of(
      {tagged_edge("a", {{0, 10}, {50, 10}},
                   {{"surface", "asphalt"}, {"lit", "yes"}}),
       tagged_edge("b", {{50, 10}, {100, 10}}, {{"surface", "asphalt"}})});
  const auto g = simplify(g0);
  REQUIRE(g.edges().size() == 1);
  REQUIRE(g.edges()[0].tag_sets.size() == 2);
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface", "lit"};
  const auto res = missing_tags(g, cfg, grid);
  REQUIRE(res.flags.size() == 1);
  CHECK(res.flags[0].detail == "lit");
  REQUIRE(res.coverage.size() == 1);
  CHECK(*res.coverage[0].get("coverage_surface_pct") == doctest::Approx(100.0));
  CHECK(*res.coverage[0].get("coverage_lit_pct") == doctest::Approx(0.0));
}

TEST_CASE("missing_tags: per-cell accumulation splits across cells") {
  // 200x200 area, 100 m cells: tagged edge crosses cells 0 and 1, untagged
  // edge stays in cell 0.
  const auto g = graph_of(
      {tagged_edge("t", {{50, 50}, {150, 50}}, {{"surface", "asphalt"}}),
       tagged_edge("u", {{10, 80}, {60, 80}}, {})});
  const auto grid = make_grid(square_area(200.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface"};
  const auto res = missing_tags(g, cfg, grid);
  REQUIRE(res.coverage.size() == 2);
  CHECK(res.coverage[0].cell_id == 0);
  // cell 0: 50 m tagged + 50 m untagged
  CHECK(*res.coverage[0].get("coverage_surface_pct") ==
        doctest::Approx(50.0).epsilon(1e-12));
  // cell 1: 50 m tagged only
  CHECK(res.coverage[1].cell_id == 1);
  CHECK(*res.coverage[1].get("coverage_surface_pct") ==
        doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("missing_tags: flag order is (edge_id, key index)") {
  const auto g = graph_of(
      {tagged_edge("a", {{10, 20}, {30, 20}}, {{"surface", "x"}}),
       tagged_edge("b", {{10, 40}, {30, 40}}, {{"lit", "yes"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  cfg.tags_of_interest = {"surface", "lit"};
  const auto res = missing_tags(g, cfg, grid);
  REQUIRE(res.flags.size() == 2);
  CHECK(res.flags[0].edge_id == 0);
  CHECK(res.flags[0].detail == "lit");
  CHECK(res.flags[1].edge_id == 1);
  CHECK(res.flags[1].detail == "surface");
}

TEST_CASE("missing_tags: configuration and input errors") {
  const auto grid = make_grid(square_area(100.0), 100.0);
  TagAnalysisConfig cfg;
  SUBCASE("empty key list") {
    const auto g = graph_of({tagged_edge("a", {{10, 20}, {30, 20}}, {})});
    CHECK_THROWS_AS(missing_tags(g, cfg, grid), ConfigError);
  }
  SUBCASE("untagged graph with edges") {
    cfg.tags_of_interest = {"surface"};
    const auto g = graph_of({tagged_edge("a", {{10, 20}, {30, 20}}, {}),
                             tagged_edge("b", {{10, 40}, {30, 40}}, {})});
    CHECK_THROWS_WITH_AS(missing_tags(g, cfg, grid),
                         doctest::Contains("requires tagged input"), ConfigError);
  }
  SUBCASE("empty graph is fine") {
    cfg.tags_of_interest = {"surface"};
    const NetworkGraph g;
    const auto res = missing_tags(g, cfg, grid);
    CHECK(res.flags.empty());
    CHECK(res.coverage.empty());
  }
}

TEST_CASE("contradictions: rule fires only when both sides match") {
  TagAnalysisConfig cfg;
  cfg.contradiction_rules = {equals_rule("cycleway", "track", "bicycle", "no")};
  SUBCASE("both tags present") {
    const auto g = graph_of({tagged_edge(
        "a", {{0, 0}, {10, 0}}, {{"cycleway", "track"}, {"bicycle", "no"}})});
    const auto flags = contradictions(g, cfg);
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].edge_id == 0);
    CHECK(flags[0].kind == TagFlagKind::Contradiction);
    CHECK(flags[0].detail == "cycleway=track vs bicycle=no");
    CHECK(flags[0].rule_index == 0);
  }
  SUBCASE("one side only") {
    const auto g =
        graph_of({tagged_edge("a", {{0, 0}, {10, 0}}, {{"cycleway", "track"}})});
    CHECK(contradictions(g, cfg).empty());
  }
}

TEST_CASE("contradictions: merged edges evaluate against the tag union") {
  TagAnalysisConfig cfg;
  cfg.contradiction_rules = {equals_rule("cycleway", "track", "bicycle", "no")};
  const auto g0 = graph_of(
      {tagged_edge("a", {{0, 0}, {50, 0}}, {{"cycleway", "track"}}),
       tagged_edge("b", {{50, 0}, {100, 0}}, {{"bicycle", "no"}})});
  const auto g = simplify(g0);
  REQUIRE(g.edges().size() == 1);
  const auto flags = contradictions(g, cfg);
  REQUIRE(flags.size() == 1);
  CHECK(flags[0].edge_id == 0);
}

TEST_CASE("contradictions: one flag per matching rule") {
  TagAnalysisConfig cfg;
  cfg.contradiction_rules = {
      equals_rule("cycleway", "track", "bicycle", "no"),
      equals_rule("highway", "cycleway", "access", "private")};
  const auto g = graph_of({tagged_edge("a", {{0, 0}, {10, 0}},
                                       {{"cycleway", "track"},
                                        {"bicycle", "no"},
                                        {"highway", "cycleway"},
                                        {"access", "private"}})});
  const auto flags = contradictions(g, cfg);
  REQUIRE(flags.size() == 2);
  CHECK(flags[0].rule_index == 0);
  CHECK(flags[1].rule_index == 1);
}

TEST_CASE("contradictions: adding tags never removes a flag") {
  TagAnalysisConfig cfg;
  ContradictionRule r;
  r.first = {"cycleway", PredicateOp::Exists, {}};
  r.second = {"bicycle", PredicateOp::NotEquals, {"yes"}};
  cfg.contradiction_rules = {r};

  TagMap base = {{"cycleway", "track"}, {"bicycle", "no"}};
  const auto g1 = graph_of({tagged_edge("a", {{0, 0}, {10, 0}}, base)});
  REQUIRE(contradictions(g1, cfg).size() == 1);

  TagMap more = base;
  more["surface"] = "asphalt";
  more["lit"] = "yes";
  const auto g2 = graph_of({tagged_edge("a", {{0, 0}, {10, 0}}, more)});
  CHECK(contradictions(g2, cfg).size() == 1);
}

TEST_CASE("contradictions: absent key never matches a side") {
  TagAnalysisConfig cfg;
  ContradictionRule r;
  r.first = {"cycleway", PredicateOp::Exists, {}};
  r.second = {"bicycle", PredicateOp::NotEquals, {"yes"}};
  cfg.contradiction_rules = {r};
  // bicycle absent: the not-equals side does not fire
  const auto g =
      graph_of({tagged_edge("a", {{0, 0}, {10, 0}}, {{"cycleway", "track"}})});
  CHECK(contradictions(g, cfg).empty());
}

TEST_CASE("contradictions: rule validation") {
  const auto g =
      graph_of({tagged_edge("a", {{0, 0}, {10, 0}}, {{"cycleway", "track"}})});
  TagAnalysisConfig cfg;
  SUBCASE("identical sides rejected") {
    cfg.contradiction_rules = {
        equals_rule("cycleway", "track", "cycleway", "track")};
    CHECK_THROWS_WITH_AS(contradictions(g, cfg),
                         doctest::Contains("identical sides"), ConfigError);
  }
  SUBCASE("equals without value rejected") {
    ContradictionRule r;
    r.first = {"cycleway", PredicateOp::Equals, {}};
    r.second = {"bicycle", PredicateOp::Equals, {"no"}};
    cfg.contradiction_rules = {r};
    CHECK_THROWS_AS(contradictions(g, cfg), ConfigError);
  }
  SUBCASE("empty key rejected") {
    ContradictionRule r;
    r.first = {"", PredicateOp::Exists, {}};
    r.second = {"bicycle", PredicateOp::Equals, {"no"}};
    cfg.contradiction_rules = {r};
    CHECK_THROWS_AS(contradictions(g, cfg), ConfigError);
  }
  SUBCASE("no rules means no flags") {
    CHECK(contradictions(g, cfg).empty());
  }
}

TEST_CASE("tag_patterns: single pattern dominates at 100%") {
  const auto g = graph_of(
      {tagged_edge("a", {{10, 20}, {80, 20}}, {{"highway", "cycleway"}}),
       tagged_edge("b", {{10, 80}, {40, 80}}, {{"highway", "cycleway"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  const auto pats = tag_patterns(g, {"highway"}, grid);
  REQUIRE(pats.size() == 1);
  CHECK(pats[0].cell_id == 0);
  CHECK(pats[0].dominant == "cycleway");
  CHECK(pats[0].share_pct == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("tag_patterns: 70/30 split picks the longer pattern") {
  const auto g = graph_of(
      {tagged_edge("a", {{10, 20}, {80, 20}}, {{"highway", "cycleway"}}),
       tagged_edge("b", {{10, 80}, {40, 80}}, {{"highway", "path"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  const auto pats = tag_patterns(g, {"highway"}, grid);
  REQUIRE(pats.size() == 1);
  CHECK(pats[0].dominant == "cycleway");
  CHECK(pats[0].share_pct == doctest::Approx(70.0).epsilon(1e-12));
  CHECK(pats[0].length_m == doctest::Approx(70.0).epsilon(1e-12));
}

TEST_CASE("tag_patterns: placeholder values for absent and mixed keys") {
  SUBCASE("absent key") {
    const auto g = graph_of(
        {tagged_edge("a", {{10, 20}, {80, 20}}, {{"highway", "cycleway"}})});
    const auto grid = make_grid(square_area(100.0), 100.0);
    const auto pats = tag_patterns(g, {"highway", "surface"}, grid);
    REQUIRE(pats.size() == 1);
    CHECK(pats[0].dominant == "cycleway|<missing>");
  }
  SUBCASE("mixed values across merged constituents") {
    const auto g0 = graph_of(
        {tagged_edge("a", {{0, 10}, {50, 10}},
                     {{"highway", "cycleway"}, {"surface", "asphalt"}}),
         tagged_edge("b", {{50, 10}, {100, 10}},
                     {{"highway", "cycleway"}, {"surface", "gravel"}})});
    const auto g = simplify(g0);
    REQUIRE(g.edges().size() == 1);
    const auto grid = make_grid(square_area(100.0), 100.0);
    const auto pats = tag_patterns(g, {"highway", "surface"}, grid);
    REQUIRE(pats.size() == 1);
    CHECK(pats[0].dominant == "cycleway|<mixed>");
  }
}

TEST_CASE("tag_patterns: equal lengths tie to the smaller combination") {
  const auto g = graph_of(
      {tagged_edge("a", {{10, 20}, {60, 20}}, {{"highway", "path"}}),
       tagged_edge("b", {{10, 80}, {60, 80}}, {{"highway", "cycleway"}})});
  const auto grid = make_grid(square_area(100.0), 100.0);
  const auto pats = tag_patterns(g, {"highway"}, grid);
  REQUIRE(pats.size() == 1);
  CHECK(pats[0].dominant == "cycleway");
  CHECK(pats[0].share_pct == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("tag_patterns: empty cells carry no entry") {
  const auto g = graph_of(
      {tagged_edge("a", {{10, 20}, {80, 20}}, {{"highway", "cycleway"}})});
  const auto grid = make_grid(square_area(200.0), 100.0);
  REQUIRE(grid.cells.size() == 4);
  const auto pats = tag_patterns(g, {"highway"}, grid);
  REQUIRE(pats.size() == 1);
  CHECK(pats[0].cell_id == 0);
}

TEST_CASE("tag_patterns: empty key list rejected") {
  const NetworkGraph g;
  const auto grid = make_grid(square_area(100.0), 100.0);
  CHECK_THROWS_AS(tag_patterns(g, {}, grid), ConfigError);
}

TEST_CASE("tag flag kind names") {
  CHECK(to_string(TagFlagKind::MissingTag) == "missing_tag");
  CHECK(to_string(TagFlagKind::Contradiction) == "contradiction");
  CHECK(to_string(TagFlagKind::Pattern) == "pattern");
}
