#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "inspect/interact.hpp"
#include "inspect/manipulate.hpp"
#include "inspect/measure.hpp"

namespace inspect {

/// Unset values derive from the mesh: step = max extent / 50,
/// point_radius = step / 2, snap_radius = 1.5 * step.
struct GridSettings {
  std::optional<double> step;
  std::optional<double> point_radius;
  std::optional<double> snap_radius;
  bool snapping_enabled = true;
};

struct ResolvedGridParams {
  double step = 0.0;
  double point_radius = 0.0;
  double snap_radius = 0.0;
};

ResolvedGridParams resolve_grid_params(const GridSettings& settings, const Aabb& mesh_box);

struct SessionConfig {
  std::filesystem::path mesh_path;
  double meters_per_model_unit = 1.0;
  ModelPose default_pose{{0.0, 1.0, -0.6}, 0.0, 0.05};
  GridSettings grid;
  GestureThresholds gestures;
  ManipulationLimits limits;
  DragTuning drag;
  double marker_radius = 0.02;  // world meters, gaze pick radius
  double hover_reach = 0.15;    // world meters
  std::filesystem::path log_path = "measurements.csv";
  std::filesystem::path metrics_path = "metrics.json";
  bool snapshot_snap_points = false;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// `key = value` lines; `#` starts a comment; every key is optional.
/// Unknown keys and malformed values throw ConfigError with the line number.
SessionConfig parse_config(std::istream& in, SessionConfig base = {});
SessionConfig load_config(const std::filesystem::path& path, SessionConfig base = {});

}  // namespace inspect
