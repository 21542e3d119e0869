#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bench_common.hpp"
#include "inspect/session.hpp"

namespace {

using inspect::HandFrame;
using inspect::InputFrame;
using inspect::Vec3;

HandFrame pinch(const Vec3& at) {
  HandFrame h;
  h.palm_center = at + Vec3{0.0, 0.0, 0.05};
  h.thumb_tip = at - Vec3{0.005, 0.0, 0.0};
  h.index_tip = at + Vec3{0.005, 0.0, 0.0};
  h.index_curl = 0.5;
  return h;
}

// Manipulate-mode stream: a menu press, then alternating two-hand turns.
std::vector<InputFrame> manipulation_stream(const inspect::SessionConfig& cfg, int n) {
  std::vector<InputFrame> frames;
  const Vec3 anchor{-0.3, 1.1, -0.1};
  HandFrame palm;
  palm.palm_center = anchor;
  palm.palm_normal = {0.0, 1.0, 0.0};
  palm.thumb_tip = anchor - Vec3{0.03, 0.0, 0.0};
  palm.index_tip = anchor + Vec3{0.03, 0.0, 0.0};
  HandFrame point;
  point.index_tip = inspect::menu_button_center(anchor, inspect::MenuButton::Manipulate, cfg.gestures);
  point.palm_center = point.index_tip + Vec3{0.0, 0.0, 0.05};
  point.thumb_tip = point.index_tip + Vec3{0.04, -0.03, 0.02};
  point.index_curl = 0.1;
  frames.push_back({0, {0, 1.6, 0.8}, {0, 0, -1}, palm, point});
  for (int i = 1; i <= n; ++i) {
    const double a = 0.01 * i;
    const Vec3 m{0.0, 1.2, -0.5};
    const Vec3 h{0.2 * std::cos(a), 0.0, 0.2 * std::sin(a)};
    frames.push_back({100 * i, {0, 1.6, 0.8}, {0, 0, -1}, pinch(m - h), pinch(m + h)});
  }
  return frames;
}

void BM_ApplyFrames(benchmark::State& state) {
  inspect::SessionConfig cfg;
  cfg.log_path.clear();
  cfg.metrics_path.clear();
  const inspect::TriangleMesh mesh = bench::sphere(1.0, 16, 32);
  const auto frames = manipulation_stream(cfg, 1000);
  for (auto _ : state) {
    state.PauseTiming();
    inspect::Session session(cfg, mesh);
    state.ResumeTiming();
    for (const InputFrame& f : frames) benchmark::DoNotOptimize(session.apply(f));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames.size()));
}
BENCHMARK(BM_ApplyFrames)->Unit(benchmark::kMillisecond);

}  // namespace
