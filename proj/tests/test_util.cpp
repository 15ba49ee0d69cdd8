#include <doctest.h>

#include <atomic>
#include <string>
#include <vector>

#include "cyclecheck/digest.hpp"
#include "cyclecheck/parallel.hpp"
#include "cyclecheck/runlog.hpp"
#include "cyclecheck/spatial_index.hpp"

using namespace cyclecheck;

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("run log renders sequence numbers at output time") {
  RunLog a;
  a.info("start", "osm");
  a.warn("degenerate_way_dropped", "way 7");
  RunLog b;
  b.info("start", "reference");
  a.append(b);
  const std::string out = a.to_jsonl();
  CHECK(out ==
        "{\"seq\":1,\"level\":\"info\",\"event\":\"start\",\"detail\":\"osm\"}\n"
        "{\"seq\":2,\"level\":\"warn\",\"event\":\"degenerate_way_dropped\","
        "\"detail\":\"way 7\"}\n"
        "{\"seq\":3,\"level\":\"info\",\"event\":\"start\",\"detail\":"
        "\"reference\"}\n");
  CHECK(a.has_warnings());
  CHECK_FALSE(b.has_warnings());
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);
  // n == 0 is fine
  parallel_for(0, 4, [&](std::size_t) { FAIL("must not run"); });
}

TEST_CASE("spatial index returns sorted ids") {
  std::vector<std::pair<geo::Box, std::uint32_t>> items;
  for (std::uint32_t i = 0; i < 100; ++i) {
    const double x = static_cast<double>(i % 10) * 10.0;
    const double y = static_cast<double>(i / 10) * 10.0;
    items.push_back({geo::Box{{x, y}, {x + 5, y + 5}}, 99 - i});
  }
  SpatialIndex index(items);
  CHECK(index.size() == 100);
  const auto hits = index.query(geo::Box{{0, 0}, {25, 25}});
  REQUIRE(!hits.empty());
  for (std::size_t i = 1; i < hits.size(); ++i) CHECK(hits[i - 1] < hits[i]);
  // a query well outside everything
  CHECK(index.query(geo::Box{{1000, 1000}, {1001, 1001}}).empty());
}
