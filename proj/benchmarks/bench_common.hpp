#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "inspect/mesh.hpp"

namespace bench {

/// UV sphere of radius `r` with `rings` x `segments` quads.
inline inspect::TriangleMesh sphere(double r, int rings, int segments) {
  inspect::TriangleMesh mesh;
  for (int i = 0; i <= rings; ++i) {
    const double phi = std::numbers::pi * i / rings;
    for (int j = 0; j < segments; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / segments;
      mesh.vertices.push_back({r * std::sin(phi) * std::cos(theta), r * std::cos(phi),
                               r * std::sin(phi) * std::sin(theta)});
    }
  }
  auto at = [segments](int i, int j) {
    return static_cast<std::uint32_t>(i * segments + (j % segments));
  };
  for (int i = 0; i < rings; ++i) {
    for (int j = 0; j < segments; ++j) {
      mesh.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      mesh.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return mesh;
}

}  // namespace bench
