#include "inspect/manipulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace inspect {

Vec3 rotate_yaw(const Vec3& v, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

Vec3 local_to_world(const ModelPose& pose, const Vec3& local) {
  return rotate_yaw(local * pose.scale, pose.yaw) + pose.position;
}

Vec3 world_to_local(const ModelPose& pose, const Vec3& world) {
  return rotate_yaw(world - pose.position, -pose.yaw) / pose.scale;
}

ModelPose apply_one_hand_drag(const ModelPose& pose, const Vec3& hand_prev,
                              const Vec3& hand_curr, const ManipulationLimits& limits) {
  ModelPose next = pose;
  next.position += (hand_curr - hand_prev) * limits.drag_gain;
  return next;
}

double yaw_between(const Vec3& from, const Vec3& to, double epsilon) {
  const double fx = from.x, fz = from.z;
  const double tx = to.x, tz = to.z;
  if (std::hypot(fx, fz) < epsilon || std::hypot(tx, tz) < epsilon) return 0.0;
  // (from x to) . y_hat for vectors in the X-Z plane.
  const double cross_y = fz * tx - fx * tz;
  const double dot_xz = fx * tx + fz * tz;
  return std::atan2(cross_y, dot_xz);
}

ModelPose apply_two_hand_transform(const ModelPose& pose, const Vec3& left_prev,
                                   const Vec3& right_prev, const Vec3& left_curr,
                                   const Vec3& right_curr, const ManipulationLimits& limits) {
  const Vec3 mid_prev = midpoint(left_prev, right_prev);
  const Vec3 mid_curr = midpoint(left_curr, right_curr);
  const Vec3 span_prev = right_prev - left_prev;
  const Vec3 span_curr = right_curr - left_curr;

  const double sep_prev = length(span_prev);
  const double ratio = sep_prev < limits.epsilon ? 1.0 : length(span_curr) / sep_prev;

  const Vec3 pivot_local = world_to_local(pose, mid_prev);

  ModelPose next = pose;
  next.yaw = pose.yaw + yaw_between(span_prev, span_curr, limits.epsilon);
  next.scale = std::clamp(pose.scale * ratio, limits.scale_min, limits.scale_max);
  next.position = mid_curr - rotate_yaw(pivot_local * next.scale, next.yaw);
  return next;
}

ManipMetrics update_metrics(ManipMetrics metrics, const ModelPose& before,
                            const ModelPose& after) {
  metrics.total_displacement += distance(after.position, before.position);
  const double rotation_deg =
      std::abs(after.yaw - metrics.initial_yaw) * 180.0 / std::numbers::pi;
  metrics.max_rotation_deg = std::max(metrics.max_rotation_deg, rotation_deg);
  metrics.scale_min_seen = std::min(metrics.scale_min_seen, after.scale);
  metrics.scale_max_seen = std::max(metrics.scale_max_seen, after.scale);
  return metrics;
}

}  // namespace inspect
