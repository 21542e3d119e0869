#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "inspect/vec3.hpp"

namespace inspect {

enum class Side { Left, Right };

constexpr Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
std::string_view to_string(Side s);

/// Sensor-agnostic hand sample in world meters.
struct HandFrame {
  Vec3 palm_center;
  Vec3 palm_normal{0.0, -1.0, 0.0};
  Vec3 thumb_tip;
  Vec3 index_tip;
  Vec3 thumb_dir{1.0, 0.0, 0.0};
  double index_curl = 0.0;  // 0 extended, 1 fully curled

  /// Point between thumb and index tips; the hand's "grab" location.
  Vec3 pinch_point() const { return midpoint(thumb_tip, index_tip); }

  friend bool operator==(const HandFrame&, const HandFrame&) = default;
};

struct GestureThresholds {
  double pinch_threshold = 0.025;  // m
  double cluster_radius = 0.08;    // m
  double palm_up_angle_deg = 30.0;
  double thumbs_up_angle_deg = 25.0;
  double curl_min = 0.7;
  double point_curl_max = 0.3;
  double pick_slop = 1.5;
  double button_size = 0.04;  // m
};

struct GestureSet {
  bool pinch_left = false;
  bool pinch_right = false;
  bool double_pinch = false;
  bool palm_up_left = false;
  bool thumbs_up_left = false;
  bool thumbs_up_right = false;
  bool point_left = false;
  bool point_right = false;

  bool pinch(Side s) const { return s == Side::Left ? pinch_left : pinch_right; }
  bool thumbs_up(Side s) const { return s == Side::Left ? thumbs_up_left : thumbs_up_right; }
  bool point(Side s) const { return s == Side::Left ? point_left : point_right; }

  friend bool operator==(const GestureSet&, const GestureSet&) = default;
};

/// Stateless per-frame classification; an absent hand contributes no gestures.
GestureSet classify_gestures(const std::optional<HandFrame>& left,
                             const std::optional<HandFrame>& right,
                             const GestureThresholds& cfg);

struct GazeRay {
  Vec3 origin;
  Vec3 direction{0.0, 0.0, -1.0};
};

struct PickTarget {
  long long id = 0;
  Vec3 center;
  double radius = 0.0;
};

/// Nearest target ahead of the ray whose perpendicular distance is within
/// pick_slop * radius. Equal along-ray parameters resolve to the earlier target.
std::optional<long long> gaze_pick(const GazeRay& ray, std::span<const PickTarget> targets,
                                   double pick_slop);

enum class Mode { Measure, Manipulate, AddMarker, RemoveMarker };

std::string_view to_string(Mode m);

enum class MenuButton { Reset, Help, RemoveMarker, AddMarker, Manipulate };

inline constexpr std::array<MenuButton, 5> kMenuButtons{
    MenuButton::Reset, MenuButton::Help, MenuButton::RemoveMarker, MenuButton::AddMarker,
    MenuButton::Manipulate};

std::string_view to_string(MenuButton b);

/// Button cube centers laid out in a 2 x 3 grid above the left palm:
///   row 0: reset, help;  row 1: remove, add;  row 2: manipulate.
Vec3 menu_button_center(const Vec3& palm_anchor, MenuButton button, const GestureThresholds& cfg);

/// Button whose cube contains `tip`, if any.
std::optional<MenuButton> button_at(const Vec3& palm_anchor, const Vec3& tip,
                                    const GestureThresholds& cfg);

struct MenuState {
  Mode mode = Mode::Measure;
  bool help_visible = false;
  std::optional<MenuButton> contact;  // button the pointer was inside last frame

  friend bool operator==(const MenuState&, const MenuState&) = default;
};

struct MenuStep {
  MenuState state;
  std::optional<MenuButton> pressed;
  bool reset = false;
  bool menu_visible = false;
};

/// Menu transition for one frame. A press fires when the pointer enters a
/// button cube (rising edge) while the palm menu is visible. Mode buttons
/// toggle: pressing the active mode's button returns to Measure.
MenuStep step_menu(const MenuState& previous, const GestureSet& gestures,
                   const std::optional<Vec3>& pointer_tip,
                   const std::optional<Vec3>& palm_anchor, const GestureThresholds& cfg);

}  // namespace inspect
