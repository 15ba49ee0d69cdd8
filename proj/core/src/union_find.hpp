#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace cyclecheck {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // lower index wins so representatives are first-appearance stable
    if (a < b) parent[b] = a; else parent[a] = b;
  }
};

}  // namespace cyclecheck
