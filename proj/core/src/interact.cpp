#include "inspect/interact.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace inspect {

namespace {

double cos_deg(double degrees) { return std::cos(degrees * std::numbers::pi / 180.0); }

bool is_pinching(const HandFrame& h, const GestureThresholds& cfg) {
  return distance(h.thumb_tip, h.index_tip) < cfg.pinch_threshold;
}

bool is_thumbs_up(const HandFrame& h, const GestureThresholds& cfg) {
  return dot(h.thumb_dir, kWorldUp) >= cos_deg(cfg.thumbs_up_angle_deg) &&
         h.index_curl >= cfg.curl_min;
}

struct ButtonSlot {
  int column;
  int row;
};

constexpr ButtonSlot slot_of(MenuButton b) {
  switch (b) {
    case MenuButton::Reset: return {0, 0};
    case MenuButton::Help: return {1, 0};
    case MenuButton::RemoveMarker: return {0, 1};
    case MenuButton::AddMarker: return {1, 1};
    case MenuButton::Manipulate: return {0, 2};
  }
  return {0, 0};
}

Mode toggled(Mode current, Mode target) {
  return current == target ? Mode::Measure : target;
}

}  // namespace

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Measure: return "measure";
    case Mode::Manipulate: return "manipulate";
    case Mode::AddMarker: return "add_marker";
    case Mode::RemoveMarker: return "remove_marker";
  }
  return "measure";
}

std::string_view to_string(MenuButton b) {
  switch (b) {
    case MenuButton::Reset: return "reset";
    case MenuButton::Help: return "help";
    case MenuButton::RemoveMarker: return "remove_marker";
    case MenuButton::AddMarker: return "add_marker";
    case MenuButton::Manipulate: return "manipulate";
  }
  return "reset";
}

GestureSet classify_gestures(const std::optional<HandFrame>& left,
                             const std::optional<HandFrame>& right,
                             const GestureThresholds& cfg) {
  GestureSet g;
  if (left) {
    g.pinch_left = is_pinching(*left, cfg);
    g.palm_up_left = dot(left->palm_normal, kWorldUp) >= cos_deg(cfg.palm_up_angle_deg);
    g.thumbs_up_left = is_thumbs_up(*left, cfg);
    g.point_left = left->index_curl <= cfg.point_curl_max && !g.pinch_left;
  }
  if (right) {
    g.pinch_right = is_pinching(*right, cfg);
    g.thumbs_up_right = is_thumbs_up(*right, cfg);
    g.point_right = right->index_curl <= cfg.point_curl_max && !g.pinch_right;
  }
  if (g.pinch_left && g.pinch_right) {
    g.double_pinch = distance(left->pinch_point(), right->pinch_point()) < cfg.cluster_radius;
  }
  return g;
}

std::optional<long long> gaze_pick(const GazeRay& ray, std::span<const PickTarget> targets,
                                   double pick_slop) {
  const Vec3 dir = normalized(ray.direction);
  std::optional<long long> best;
  double best_t = std::numeric_limits<double>::infinity();
  for (const PickTarget& target : targets) {
    const Vec3 to_center = target.center - ray.origin;
    const double t = dot(to_center, dir);
    if (!(t > 0.0)) continue;
    const double perpendicular = length(to_center - dir * t);
    if (perpendicular > pick_slop * target.radius) continue;
    if (t < best_t) {
      best_t = t;
      best = target.id;
    }
  }
  return best;
}

Vec3 menu_button_center(const Vec3& palm_anchor, MenuButton button,
                        const GestureThresholds& cfg) {
  const double pitch = 1.5 * cfg.button_size;
  const ButtonSlot s = slot_of(button);
  return palm_anchor + Vec3{(s.column - 0.5) * pitch, cfg.button_size, (s.row - 1) * pitch};
}

std::optional<MenuButton> button_at(const Vec3& palm_anchor, const Vec3& tip,
                                    const GestureThresholds& cfg) {
  const double half = 0.5 * cfg.button_size;
  for (const MenuButton b : kMenuButtons) {
    const Vec3 d = tip - menu_button_center(palm_anchor, b, cfg);
    if (std::abs(d.x) <= half && std::abs(d.y) <= half && std::abs(d.z) <= half) return b;
  }
  return std::nullopt;
}

MenuStep step_menu(const MenuState& previous, const GestureSet& gestures,
                   const std::optional<Vec3>& pointer_tip,
                   const std::optional<Vec3>& palm_anchor, const GestureThresholds& cfg) {
  MenuStep step;
  step.state = previous;
  step.menu_visible = gestures.palm_up_left && palm_anchor.has_value();

  std::optional<MenuButton> contact;
  if (step.menu_visible && pointer_tip) contact = button_at(*palm_anchor, *pointer_tip, cfg);
  step.state.contact = contact;
  if (!contact || contact == previous.contact) return step;

  step.pressed = contact;
  switch (*contact) {
    case MenuButton::Reset: step.reset = true; break;
    case MenuButton::Help: step.state.help_visible = !previous.help_visible; break;
    case MenuButton::RemoveMarker:
      step.state.mode = toggled(previous.mode, Mode::RemoveMarker);
      break;
    case MenuButton::AddMarker: step.state.mode = toggled(previous.mode, Mode::AddMarker); break;
    case MenuButton::Manipulate:
      step.state.mode = toggled(previous.mode, Mode::Manipulate);
      break;
  }
  return step;
}

}  // namespace inspect
