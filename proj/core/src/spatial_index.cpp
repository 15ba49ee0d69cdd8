#include "cyclecheck/spatial_index.hpp"

#include <algorithm>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace cyclecheck {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using BgPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using BgBox = bg::model::box<BgPoint>;
using Entry = std::pair<BgBox, std::uint32_t>;

namespace {

BgBox to_bg(const geo::Box& b) {
  return BgBox{BgPoint{b.min.x, b.min.y}, BgPoint{b.max.x, b.max.y}};
}

}  // namespace

struct SpatialIndex::Impl {
  bgi::rtree<Entry, bgi::rstar<16>> tree;
};

SpatialIndex::SpatialIndex() : impl_(std::make_unique<Impl>()) {}

SpatialIndex::SpatialIndex(
    const std::vector<std::pair<geo::Box, std::uint32_t>>& items)
    : impl_(std::make_unique<Impl>()) {
  std::vector<Entry> entries;
  entries.reserve(items.size());
  for (const auto& [box, id] : items) {
    entries.emplace_back(to_bg(box), id);
  }
  impl_->tree = bgi::rtree<Entry, bgi::rstar<16>>(entries);
}

SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex&&) noexcept = default;
SpatialIndex& SpatialIndex::operator=(SpatialIndex&&) noexcept = default;

std::vector<std::uint32_t> SpatialIndex::query(const geo::Box& box) const {
  std::vector<std::uint32_t> ids;
  for (auto it = impl_->tree.qbegin(bgi::intersects(to_bg(box)));
       it != impl_->tree.qend(); ++it) {
    ids.push_back(it->second);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t SpatialIndex::size() const { return impl_->tree.size(); }

}  // namespace cyclecheck
