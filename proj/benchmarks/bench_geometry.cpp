#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bench_common.hpp"
#include "inspect/config.hpp"
#include "inspect/snapgrid.hpp"

namespace {

using inspect::Vec3;

void BM_PointTriangleDistance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<Vec3, 4>> cases(1024);
  for (auto& c : cases) {
    for (auto& v : c) v = {u(rng), u(rng), u(rng)};
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& c = cases[i++ & 1023];
    benchmark::DoNotOptimize(inspect::point_triangle_distance(c[0], c[1], c[2], c[3]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PointTriangleDistance);

// Grid over a sphere with the default step (max extent / 50), varying tessellation.
void BM_GenerateSnapGrid(benchmark::State& state) {
  const int rings = static_cast<int>(state.range(0));
  const inspect::TriangleMesh mesh = bench::sphere(1.0, rings, 2 * rings);
  const auto params = inspect::resolve_grid_params({}, inspect::mesh_aabb(mesh));
  std::size_t points = 0;
  for (auto _ : state) {
    const auto grid =
        inspect::generate_snap_grid(mesh, params.step, params.point_radius, params.snap_radius);
    points = grid.size();
    benchmark::DoNotOptimize(points);
  }
  state.counters["triangles"] = static_cast<double>(mesh.triangles.size());
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_GenerateSnapGrid)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SnapQuery(benchmark::State& state) {
  const inspect::TriangleMesh mesh = bench::sphere(1.0, 64, 128);
  const auto params = inspect::resolve_grid_params({}, inspect::mesh_aabb(mesh));
  const auto grid =
      inspect::generate_snap_grid(mesh, params.step, params.point_radius, params.snap_radius);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.1, 1.1);
  std::vector<Vec3> probes(4096);
  for (auto& p : probes) p = {u(rng), u(rng), u(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid.query(probes[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
  state.counters["grid_points"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_SnapQuery);

}  // namespace
