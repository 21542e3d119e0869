#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "inspect/vec3.hpp"

namespace inspect {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle soup in model-local meters. Degenerate triangles are kept.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string source_name;

  bool empty() const { return vertices.empty() || triangles.empty(); }

  std::array<Vec3, 3> corners(const Triangle& t) const {
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }
};

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 extent() const { return max - min; }
  double diagonal() const { return length(max - min); }
  double max_extent() const;
  bool contains(const Vec3& p) const;
  Aabb inflated(double r) const { return {min - Vec3{r, r, r}, max + Vec3{r, r, r}}; }
};

/// Reads the OBJ subset: `v x y z` and `f i j k ...` (1-based, negative
/// relative, `i/j/k` slash forms). Other records are skipped. Polygons are
/// fan-triangulated from their first vertex.
/// Throws ParseError carrying the 1-based line number.
TriangleMesh parse_obj(std::istream& in, std::string source_name = {});

/// Opens and parses `path`; throws FileError naming the path when unreadable.
TriangleMesh load_obj(const std::filesystem::path& path);

/// Writes `v`/`f` records with round-trip precision.
void write_obj(const TriangleMesh& mesh, std::ostream& out);

/// Multiplies every vertex by `factor` (unit conversion to meters).
void scale_vertices(TriangleMesh& mesh, double factor);

/// Throws EmptyMesh when there are no vertices.
Aabb mesh_aabb(const TriangleMesh& mesh);

/// Exact distance from `p` to the closed triangle (a, b, c). Degenerate
/// triangles are treated as their longest segment or a point.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

inline double point_triangle_distance(const Vec3& p, const std::array<Vec3, 3>& tri) {
  return point_triangle_distance(p, tri[0], tri[1], tri[2]);
}

/// Closest point of segment [a, b] to p.
Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b);

}  // namespace inspect
