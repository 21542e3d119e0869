#include "inspect/snapgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "inspect/errors.hpp"

namespace inspect {

namespace {

std::size_t axis_count(double span, double step) {
  return static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) throw NonPositiveParameter(name);
}

// Uniform bins over triangles. A triangle is stored in every cell its
// radius-inflated AABB touches, so a point within `radius` of it always
// finds it in the point's own cell.
class TriangleBins {
 public:
  TriangleBins(const TriangleMesh& mesh, double radius, double preferred_cell) {
    const double pad = radius * (1.0 + 1e-9) + 1e-12;
    boxes_.reserve(mesh.triangles.size());
    bool first = true;
    for (const Triangle& t : mesh.triangles) {
      const auto [a, b, c] = mesh.corners(t);
      Aabb box{component_min(a, component_min(b, c)), component_max(a, component_max(b, c))};
      box = box.inflated(pad);
      boxes_.push_back(box);
      region_ = first ? box : Aabb{component_min(region_.min, box.min),
                                   component_max(region_.max, box.max)};
      first = false;
    }
    const Vec3 span = region_.extent();
    constexpr double kMaxCellsPerAxis = 64.0;
    cell_ = std::max({preferred_cell, span.x / kMaxCellsPerAxis, span.y / kMaxCellsPerAxis,
                      span.z / kMaxCellsPerAxis, 1e-12});
    dims_ = {cells_along(span.x), cells_along(span.y), cells_along(span.z)};
    bins_.resize(dims_[0] * dims_[1] * dims_[2]);
    for (std::uint32_t ti = 0; ti < boxes_.size(); ++ti) {
      const auto lo = cell_index(boxes_[ti].min);
      const auto hi = cell_index(boxes_[ti].max);
      for (std::size_t i = lo[0]; i <= hi[0]; ++i)
        for (std::size_t j = lo[1]; j <= hi[1]; ++j)
          for (std::size_t k = lo[2]; k <= hi[2]; ++k) bins_[flat(i, j, k)].push_back(ti);
    }
  }

  // Triangle indices that may lie within radius of p; empty outside the region.
  const std::vector<std::uint32_t>* candidates(const Vec3& p) const {
    if (!region_.contains(p)) return nullptr;
    const auto c = cell_index(p);
    return &bins_[flat(c[0], c[1], c[2])];
  }

 private:
  std::size_t cells_along(double span) const {
    return static_cast<std::size_t>(std::floor(span / cell_)) + 1;
  }

  std::array<std::size_t, 3> cell_index(const Vec3& p) const {
    auto axis = [&](double v, double lo, std::size_t dim) {
      const double f = std::floor((v - lo) / cell_);
      return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(dim - 1)));
    };
    return {axis(p.x, region_.min.x, dims_[0]), axis(p.y, region_.min.y, dims_[1]),
            axis(p.z, region_.min.z, dims_[2])};
  }

  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * dims_[1] + j) * dims_[2] + k;
  }

  std::vector<Aabb> boxes_;
  Aabb region_;
  double cell_ = 1.0;
  std::array<std::size_t, 3> dims_{1, 1, 1};
  std::vector<std::vector<std::uint32_t>> bins_;
};

}  // namespace

Lattice lattice_around(const Aabb& box, double step, double point_radius) {
  require_positive(step, "step");
  require_positive(point_radius, "point_radius");
  const Aabb inflated = box.inflated(point_radius);
  const Vec3 span = inflated.extent();
  Lattice lattice{inflated.min, step,
                  {axis_count(span.x, step), axis_count(span.y, step), axis_count(span.z, step)}};
  const double total = static_cast<double>(lattice.counts[0]) *
                       static_cast<double>(lattice.counts[1]) *
                       static_cast<double>(lattice.counts[2]);
  if (total > static_cast<double>(kMaxLatticeCandidates)) {
    throw NonPositiveParameter("step (lattice too dense: " + std::to_string(total) +
                               " candidates)");
  }
  return lattice;
}

SnapGrid generate_snap_grid(const TriangleMesh& mesh, double step, double point_radius,
                            double snap_radius) {
  if (mesh.empty()) throw EmptyMesh();
  return generate_snap_grid(mesh, lattice_around(mesh_aabb(mesh), step, point_radius),
                            point_radius, snap_radius);
}

SnapGrid generate_snap_grid(const TriangleMesh& mesh, const Lattice& lattice,
                            double point_radius, double snap_radius) {
  if (mesh.empty()) throw EmptyMesh();
  require_positive(lattice.step, "step");
  require_positive(point_radius, "point_radius");
  require_positive(snap_radius, "snap_radius");

  const TriangleBins bins(mesh, point_radius, std::max(2.0 * point_radius, lattice.step));
  std::vector<Vec3> kept;
  for (std::size_t i = 0; i < lattice.counts[0]; ++i) {
    for (std::size_t j = 0; j < lattice.counts[1]; ++j) {
      for (std::size_t k = 0; k < lattice.counts[2]; ++k) {
        const Vec3 p = lattice.point(i, j, k);
        const auto* tris = bins.candidates(p);
        if (tris == nullptr) continue;
        for (const std::uint32_t ti : *tris) {
          if (point_triangle_distance(p, mesh.corners(mesh.triangles[ti])) <= point_radius) {
            kept.push_back(p);
            break;
          }
        }
      }
    }
  }
  return SnapGrid(std::move(kept), lattice.step, point_radius, snap_radius);
}

SnapGrid::SnapGrid(std::vector<Vec3> points, double step, double point_radius,
                   double snap_radius)
    : points_(std::move(points)),
      step_(step),
      point_radius_(point_radius),
      snap_radius_(snap_radius),
      cell_size_(snap_radius > 0.0 ? snap_radius : 1.0) {
  for (std::uint32_t i = 0; i < points_.size(); ++i) cells_[cell_of(points_[i])].push_back(i);
}

std::size_t SnapGrid::CellHash::operator()(const CellKey& c) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (const std::int64_t v : {c.i, c.j, c.k}) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

SnapGrid::CellKey SnapGrid::cell_of(const Vec3& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.z / cell_size_))};
}

std::optional<SnapHit> SnapGrid::query(const Vec3& p) const {
  if (points_.empty() || !is_finite(p)) return std::nullopt;
  const double pad = snap_radius_ * (1.0 + 1e-9);
  const Vec3 r{pad, pad, pad};
  const CellKey lo = cell_of(p - r);
  const CellKey hi = cell_of(p + r);
  std::optional<SnapHit> best;
  for (std::int64_t i = lo.i; i <= hi.i; ++i) {
    for (std::int64_t j = lo.j; j <= hi.j; ++j) {
      for (std::int64_t k = lo.k; k <= hi.k; ++k) {
        const auto it = cells_.find({i, j, k});
        if (it == cells_.end()) continue;
        for (const std::uint32_t idx : it->second) {
          const double d = distance(p, points_[idx]);
          if (d > snap_radius_) continue;
          if (!best || d < best->distance || (d == best->distance && idx < best->index)) {
            best = SnapHit{idx, points_[idx], d};
          }
        }
      }
    }
  }
  return best;
}

void write_grid_dump(const SnapGrid& grid, std::ostream& out) {
  char line[128];
  for (const Vec3& p : grid.points()) {
    std::snprintf(line, sizeof line, "%.6f %.6f %.6f\n", p.x, p.y, p.z);
    out << line;
  }
}

}  // namespace inspect
