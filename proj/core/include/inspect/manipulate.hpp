#pragma once

#include "inspect/vec3.hpp"

namespace inspect {

/// World placement of the model: world = R_y(yaw) * (scale * local) + position.
/// R_y is the right-handed rotation about world +Y.
struct ModelPose {
  Vec3 position;
  double yaw = 0.0;  // radians, accumulated without wrapping
  double scale = 0.05;

  friend bool operator==(const ModelPose&, const ModelPose&) = default;
};

struct ManipulationLimits {
  double drag_gain = 1.0;
  double scale_min = 0.001;
  double scale_max = 2.0;
  double epsilon = 1e-9;  // m; degenerate hand-separation cutoff
};

Vec3 rotate_yaw(const Vec3& v, double yaw);

Vec3 local_to_world(const ModelPose& pose, const Vec3& local);
Vec3 world_to_local(const ModelPose& pose, const Vec3& world);

/// Translates the model by the hand's displacement times drag_gain.
ModelPose apply_one_hand_drag(const ModelPose& pose, const Vec3& hand_prev,
                              const Vec3& hand_curr, const ManipulationLimits& limits);

/// Simultaneous rotate/scale/translate from two pinch points. Rotation is the
/// signed X-Z angle between successive (right - left) vectors, the scale ratio
/// is the 3D separation ratio, and the pivot is the hands' midpoint: the model
/// point under the old midpoint ends up under the new one.
ModelPose apply_two_hand_transform(const ModelPose& pose, const Vec3& left_prev,
                                   const Vec3& right_prev, const Vec3& left_curr,
                                   const Vec3& right_curr, const ManipulationLimits& limits);

/// Signed rotation about +Y carrying the X-Z projection of `from` onto `to`;
/// zero when either projection is shorter than `epsilon`.
double yaw_between(const Vec3& from, const Vec3& to, double epsilon);

/// Session-level manipulation extents, reported in nominal (world) units.
struct ManipMetrics {
  double total_displacement = 0.0;
  double max_rotation_deg = 0.0;
  double scale_min_seen = 0.0;
  double scale_max_seen = 0.0;
  double initial_yaw = 0.0;

  static ManipMetrics starting_at(const ModelPose& initial) {
    return {0.0, 0.0, initial.scale, initial.scale, initial.yaw};
  }
};

ManipMetrics update_metrics(ManipMetrics metrics, const ModelPose& before,
                            const ModelPose& after);

}  // namespace inspect
