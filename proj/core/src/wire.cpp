#include "inspect/wire.hpp"

#include <cmath>
#include <numbers>

#include "inspect/errors.hpp"

namespace inspect::wire {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

[[noreturn]] void fail(std::size_t line, const std::string& what) { throw ReplayError(line, what); }

const json& field(const json& obj, const char* name, std::size_t line) {
  if (!obj.is_object()) fail(line, "expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) fail(line, std::string("missing field '") + name + "'");
  return *it;
}

Vec3 read_vec(const json& obj, const char* name, std::size_t line) {
  const json& a = field(obj, name, line);
  if (!a.is_array() || a.size() != 3) fail(line, std::string("'") + name + "' must be [x, y, z]");
  Vec3 v;
  double* out[3] = {&v.x, &v.y, &v.z};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!a[i].is_number()) fail(line, std::string("'") + name + "' has a non-numeric entry");
    *out[i] = a[i].get<double>();
  }
  if (!is_finite(v)) fail(line, std::string("'") + name + "' is not finite");
  return v;
}

Vec3 read_unit(const json& obj, const char* name, std::size_t line) {
  const Vec3 v = read_vec(obj, name, line);
  if (std::abs(length(v) - 1.0) > 1e-6) fail(line, std::string("'") + name + "' is not a unit vector");
  return v;
}

std::optional<HandFrame> read_hand(const json& frame, const char* name, std::size_t line) {
  const auto it = frame.find(name);
  if (it == frame.end() || it->is_null()) return std::nullopt;
  const json& h = *it;
  HandFrame hand;
  hand.palm_center = read_vec(h, "palm_center", line);
  hand.palm_normal = read_unit(h, "palm_normal", line);
  hand.thumb_tip = read_vec(h, "thumb_tip", line);
  hand.index_tip = read_vec(h, "index_tip", line);
  hand.thumb_dir = read_unit(h, "thumb_dir", line);
  const json& curl = field(h, "index_curl", line);
  if (!curl.is_number()) fail(line, "'index_curl' must be a number");
  hand.index_curl = curl.get<double>();
  if (!(hand.index_curl >= 0.0 && hand.index_curl <= 1.0)) fail(line, "'index_curl' outside [0, 1]");
  return hand;
}

json hand_json(const std::optional<HandFrame>& hand) {
  if (!hand) return nullptr;
  return {{"palm_center", vec(hand->palm_center)}, {"palm_normal", vec(hand->palm_normal)},
          {"thumb_tip", vec(hand->thumb_tip)},     {"index_tip", vec(hand->index_tip)},
          {"thumb_dir", vec(hand->thumb_dir)},     {"index_curl", hand->index_curl}};
}

json optional_id(const std::optional<long long>& id) {
  return id ? json(*id) : json(nullptr);
}

}  // namespace

json frame_to_json(const InputFrame& frame) {
  return {{"t_ms", frame.t_ms},
          {"head", {{"position", vec(frame.head_position)}, {"forward", vec(frame.head_forward)}}},
          {"left", hand_json(frame.left)},
          {"right", hand_json(frame.right)}};
}

InputFrame frame_from_json(const json& j, std::size_t line) {
  InputFrame frame;
  const json& t = field(j, "t_ms", line);
  if (!t.is_number_integer()) fail(line, "'t_ms' must be an integer");
  frame.t_ms = t.get<TimestampMs>();
  const json& head = field(j, "head", line);
  frame.head_position = read_vec(head, "position", line);
  frame.head_forward = read_unit(head, "forward", line);
  frame.left = read_hand(j, "left", line);
  frame.right = read_hand(j, "right", line);
  return frame;
}

InputFrame parse_frame(std::string_view text, std::size_t line) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) fail(line, "malformed JSON");
  return frame_from_json(j, line);
}

std::string frame_line(const InputFrame& frame) { return frame_to_json(frame).dump(); }

json snapshot_to_json(const Snapshot& s) {
  json markers = json::array();
  for (const MarkerView& m : s.markers) {
    markers.push_back({{"id", m.id},
                       {"world", vec(m.world)},
                       {"local", vec(m.local)},
                       {"halo", to_string(m.halo)},
                       {"grabbed_by", m.grabbed_by ? json(to_string(*m.grabbed_by)) : json(nullptr)}});
  }
  json rulers = json::array();
  for (const RulerView& r : s.rulers) {
    rulers.push_back({{"id", r.id},
                      {"a", r.a},
                      {"b", r.b},
                      {"length_m", r.length_m},
                      {"text", format_length(r.length_m)}});
  }
  json hud_entries = json::array();
  for (const HudEntry& e : s.hud.entries) {
    hud_entries.push_back({{"seq", e.seq},
                           {"event", to_string(e.event)},
                           {"ruler_id", e.ruler_id},
                           {"length_m", e.length_m},
                           {"text", e.text}});
  }
  json buttons = json::array();
  for (const MenuButtonView& b : s.menu_buttons) {
    buttons.push_back({{"button", to_string(b.button)}, {"center", vec(b.center)}});
  }
  const GestureSet& g = s.gestures;
  json out = {
      {"type", "snapshot"},
      {"t_ms", s.t_ms},
      {"mode", to_string(s.mode)},
      {"help_visible", s.help_visible},
      {"menu_visible", s.menu_visible},
      {"menu_buttons", buttons},
      {"pose",
       {{"position", vec(s.pose.position)}, {"yaw", s.pose.yaw}, {"scale", s.pose.scale}}},
      {"markers", markers},
      {"rulers", rulers},
      {"hud", {{"scale", s.hud.scale}, {"scale_text", s.hud.scale_text}, {"entries", hud_entries}}},
      {"snap_point_count", s.snap_point_count},
      {"gestures",
       {{"pinch_left", g.pinch_left},
        {"pinch_right", g.pinch_right},
        {"double_pinch", g.double_pinch},
        {"palm_up_left", g.palm_up_left},
        {"thumbs_up_left", g.thumbs_up_left},
        {"thumbs_up_right", g.thumbs_up_right},
        {"point_left", g.point_left},
        {"point_right", g.point_right}}},
      {"gaze_target", optional_id(s.gaze_target)},
      {"last_seq", s.last_seq},
      {"notices", s.notices},
  };
  if (!s.snap_points.empty()) {
    json points = json::array();
    for (const Vec3& p : s.snap_points) points.push_back(vec(p));
    out["snap_points"] = std::move(points);
  }
  return out;
}

json config_to_json(const SessionConfig& c) {
  const auto optional_number = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {
      {"mesh", c.mesh_path.string()},
      {"meters_per_model_unit", c.meters_per_model_unit},
      {"default_pose",
       {{"position", vec(c.default_pose.position)},
        {"yaw_deg", c.default_pose.yaw * 180.0 / std::numbers::pi},
        {"scale", c.default_pose.scale}}},
      {"grid",
       {{"step", optional_number(c.grid.step)},
        {"point_radius", optional_number(c.grid.point_radius)},
        {"snap_radius", optional_number(c.grid.snap_radius)},
        {"snapping_enabled", c.grid.snapping_enabled}}},
      {"gestures",
       {{"pinch_threshold", c.gestures.pinch_threshold},
        {"cluster_radius", c.gestures.cluster_radius},
        {"palm_up_angle_deg", c.gestures.palm_up_angle_deg},
        {"thumbs_up_angle_deg", c.gestures.thumbs_up_angle_deg},
        {"curl_min", c.gestures.curl_min},
        {"point_curl_max", c.gestures.point_curl_max},
        {"pick_slop", c.gestures.pick_slop},
        {"button_size", c.gestures.button_size}}},
      {"limits",
       {{"drag_gain", c.limits.drag_gain},
        {"scale_min", c.limits.scale_min},
        {"scale_max", c.limits.scale_max}}},
      {"release_timeout_ms", c.drag.release_timeout_ms},
      {"marker_radius", c.marker_radius},
      {"hover_reach", c.hover_reach},
  };
}

json hello_to_json(const Session& session) {
  const TriangleMesh& mesh = session.mesh();
  json vertices = json::array();
  for (const Vec3& v : mesh.vertices) vertices.push_back(vec(v));
  json triangles = json::array();
  for (const Triangle& t : mesh.triangles) triangles.push_back({t[0], t[1], t[2]});
  json points = json::array();
  for (const Vec3& p : session.grid().points()) points.push_back(vec(p));
  const SnapGrid& grid = session.grid();
  return {{"type", "hello"},
          {"mesh",
           {{"source_name", mesh.source_name}, {"vertices", vertices}, {"triangles", triangles}}},
          {"grid",
           {{"snapping_enabled", session.config().grid.snapping_enabled},
            {"step", grid.step()},
            {"point_radius", grid.point_radius()},
            {"snap_radius", grid.snap_radius()},
            {"points", points}}},
          {"config", config_to_json(session.config())},
          {"snapshot", snapshot_to_json(session.snapshot())}};
}

json error_to_json(std::string_view message) {
  return {{"type", "error"}, {"message", message}};
}

}  // namespace inspect::wire
