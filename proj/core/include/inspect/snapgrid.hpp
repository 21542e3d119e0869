#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "inspect/mesh.hpp"
#include "inspect/vec3.hpp"

namespace inspect {

/// Regular candidate lattice: origin + (i, j, k) * step.
struct Lattice {
  Vec3 origin;
  double step = 0.0;
  std::array<std::size_t, 3> counts{0, 0, 0};

  std::size_t size() const { return counts[0] * counts[1] * counts[2]; }
  Vec3 point(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin.x + static_cast<double>(i) * step, origin.y + static_cast<double>(j) * step,
            origin.z + static_cast<double>(k) * step};
  }
};

/// Lattice spanning the mesh AABB inflated by `point_radius`, anchored at the
/// inflated minimum corner.
Lattice lattice_around(const Aabb& box, double step, double point_radius);

struct SnapHit {
  std::size_t index = 0;
  Vec3 point;
  double distance = 0.0;
};

/// Lattice points retained near the mesh surface, in x-major lattice order.
class SnapGrid {
 public:
  SnapGrid() = default;
  SnapGrid(std::vector<Vec3> points, double step, double point_radius, double snap_radius);

  const std::vector<Vec3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double step() const { return step_; }
  double point_radius() const { return point_radius_; }
  double snap_radius() const { return snap_radius_; }

  /// Nearest retained point within snap_radius of `p`; ties go to the lowest index.
  std::optional<SnapHit> query(const Vec3& p) const;

 private:
  struct CellKey {
    std::int64_t i, j, k;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& c) const noexcept;
  };

  CellKey cell_of(const Vec3& p) const;

  std::vector<Vec3> points_;
  double step_ = 0.0;
  double point_radius_ = 0.0;
  double snap_radius_ = 0.0;
  double cell_size_ = 1.0;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

/// Hard cap on candidate count; larger lattices throw NonPositiveParameter("step").
inline constexpr std::size_t kMaxLatticeCandidates = 64'000'000;

/// Keeps every lattice candidate within `point_radius` of some triangle.
/// Throws EmptyMesh and NonPositiveParameter.
SnapGrid generate_snap_grid(const TriangleMesh& mesh, double step, double point_radius,
                            double snap_radius);

/// Same pruning over an explicitly supplied lattice.
SnapGrid generate_snap_grid(const TriangleMesh& mesh, const Lattice& lattice,
                            double point_radius, double snap_radius);

inline std::optional<SnapHit> snap_query(const SnapGrid& grid, const Vec3& p) {
  return grid.query(p);
}

/// One `x y z` line per point with 6 decimals.
void write_grid_dump(const SnapGrid& grid, std::ostream& out);

}  // namespace inspect
