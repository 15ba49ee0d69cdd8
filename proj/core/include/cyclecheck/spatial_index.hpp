#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "cyclecheck/geometry.hpp"

namespace cyclecheck {

/// Read-only R-tree over bounding boxes. Query results are sorted by id so
/// downstream iteration order never depends on tree internals.
class SpatialIndex {
 public:
  SpatialIndex();
  explicit SpatialIndex(const std::vector<std::pair<geo::Box, std::uint32_t>>& items);
  ~SpatialIndex();

  SpatialIndex(SpatialIndex&&) noexcept;
  SpatialIndex& operator=(SpatialIndex&&) noexcept;
  SpatialIndex(const SpatialIndex&) = delete;
  SpatialIndex& operator=(const SpatialIndex&) = delete;

  std::vector<std::uint32_t> query(const geo::Box& box) const;
  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cyclecheck
