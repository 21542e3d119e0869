#include "inspect/session.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "inspect/errors.hpp"
#include "inspect/wire.hpp"

namespace inspect {

namespace {

std::optional<Vec3> pinch_point(const std::optional<HandFrame>& hand) {
  if (!hand) return std::nullopt;
  return hand->pinch_point();
}

const std::optional<HandFrame>& hand_of(const InputFrame& f, Side s) {
  return s == Side::Left ? f.left : f.right;
}

SnapGrid build_grid(const SessionConfig& config, const TriangleMesh& mesh) {
  if (mesh.empty()) throw EmptyMesh();
  if (!config.grid.snapping_enabled) return {};
  const ResolvedGridParams p = resolve_grid_params(config.grid, mesh_aabb(mesh));
  return generate_snap_grid(mesh, p.step, p.point_radius, p.snap_radius);
}

}  // namespace

Session::Session(SessionConfig config, TriangleMesh mesh)
    : config_(std::move(config)), mesh_(std::move(mesh)) {
  config_.validate();
  grid_ = build_grid(config_, mesh_);
  pose_ = config_.default_pose;
  metrics_ = ManipMetrics::starting_at(pose_);
  if (!config_.log_path.empty()) {
    log_writer_ = std::make_unique<CsvLogWriter>(config_.log_path);
    CsvLogWriter* writer = log_writer_.get();
    measure_.log().set_sink([writer](const LogRecord& r) { writer->write(r); });
  }
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() = default;

const SnapGrid* Session::active_grid() const {
  return config_.grid.snapping_enabled ? &grid_ : nullptr;
}

bool Session::rising(const GestureSet& g, Side side) const {
  return g.pinch(side) && !prev_gestures_.pinch(side);
}

Snapshot Session::apply(const InputFrame& frame) {
  if (last_t_ && frame.t_ms < *last_t_) throw FrameOrderError(*last_t_, frame.t_ms);
  last_t_ = frame.t_ms;
  notices_.clear();

  const GestureSet g = classify_gestures(frame.left, frame.right, config_.gestures);

  const std::optional<Vec3> anchor =
      frame.left ? std::optional<Vec3>(frame.left->palm_center) : std::nullopt;
  const std::optional<Vec3> pointer =
      frame.right ? std::optional<Vec3>(frame.right->index_tip) : std::nullopt;
  const MenuStep menu_step = step_menu(menu_, g, pointer, anchor, config_.gestures);
  const Mode previous_mode = menu_.mode;
  menu_ = menu_step.state;
  menu_visible_ = menu_step.menu_visible;
  menu_anchor_ = menu_visible_ ? anchor : std::nullopt;

  if (menu_step.pressed) notices_.push_back("pressed:" + std::string(to_string(*menu_step.pressed)));
  if (menu_.mode != previous_mode) {
    release_all_grabs(frame.t_ms);
    measure_.clear_selection();
  }
  if (menu_step.reset) handle_reset(frame.t_ms);

  std::vector<PickTarget> targets;
  targets.reserve(measure_.markers().size());
  for (const auto& [id, m] : measure_.markers()) {
    targets.push_back({id, local_to_world(pose_, m.position), config_.marker_radius});
  }
  const GazeRay ray{frame.head_position, frame.head_forward};
  gaze_target_ = gaze_pick(ray, targets, config_.gestures.pick_slop);

  // A menu press consumes the frame.
  if (!menu_step.pressed) {
    switch (menu_.mode) {
      case Mode::Manipulate: dispatch_manipulate(frame, g); break;
      case Mode::AddMarker: dispatch_add_marker(frame, g, gaze_target_); break;
      case Mode::RemoveMarker: dispatch_remove_marker(g, gaze_target_, frame.t_ms); break;
      case Mode::Measure: dispatch_measure(g, gaze_target_, frame.t_ms); break;
    }
  }
  if (gaze_target_ && measure_.find_marker(*gaze_target_) == nullptr) gaze_target_.reset();
  update_halos(frame, gaze_target_);

  prev_gestures_ = g;
  prev_pinch_left_ = pinch_point(frame.left);
  prev_pinch_right_ = pinch_point(frame.right);
  return snapshot();
}

void Session::handle_reset(TimestampMs t) {
  pose_ = config_.default_pose;
  measure_.reset(t);
}

void Session::release_all_grabs(TimestampMs t) {
  for (const Side side : {Side::Left, Side::Right}) {
    if (const auto id = measure_.grabbed_by(side)) {
      GestureSet release;
      (side == Side::Left ? release.thumbs_up_left : release.thumbs_up_right) = true;
      measure_.drag_marker_step(*id, side, std::nullopt, release, t, pose_, active_grid(),
                                config_.drag);
    }
  }
}

void Session::dispatch_manipulate(const InputFrame& frame, const GestureSet& g) {
  const ModelPose before = pose_;
  bool applied = false;
  const auto left_now = pinch_point(frame.left);
  const auto right_now = pinch_point(frame.right);
  if (g.pinch_left && g.pinch_right && prev_gestures_.pinch_left && prev_gestures_.pinch_right &&
      prev_pinch_left_ && prev_pinch_right_) {
    pose_ = apply_two_hand_transform(pose_, *prev_pinch_left_, *prev_pinch_right_, *left_now,
                                     *right_now, config_.limits);
    applied = true;
  } else {
    for (const Side side : {Side::Left, Side::Right}) {
      const auto& prev = side == Side::Left ? prev_pinch_left_ : prev_pinch_right_;
      const auto& now = side == Side::Left ? left_now : right_now;
      if (g.pinch(side) && prev_gestures_.pinch(side) && !g.pinch(other(side)) && prev && now) {
        pose_ = apply_one_hand_drag(pose_, *prev, *now, config_.limits);
        applied = true;
      }
    }
  }
  if (applied) metrics_ = update_metrics(metrics_, before, pose_);
}

void Session::dispatch_add_marker(const InputFrame& frame, const GestureSet& g,
                                  std::optional<MarkerId> gazed) {
  const bool double_rising = g.double_pinch && !prev_gestures_.double_pinch;
  if (double_rising) {
    const MarkerId id = create_marker(measure_, *frame.left, *frame.right, pose_, active_grid());
    notices_.push_back("marker_created:" + std::to_string(id));
  } else {
    for (const Side side : {Side::Left, Side::Right}) {
      if (!rising(g, side)) continue;
      const Vec3 pinch = hand_of(frame, side)->pinch_point();
      std::optional<MarkerId> target = measure_.grabbed_by(side);
      if (!target) target = gazed;
      if (!target) continue;
      const GrabStatus status =
          measure_.begin_grab(*target, side, pinch, pose_, frame.t_ms, config_.drag);
      if (status == GrabStatus::GrabConflict) notices_.push_back("grab_conflict");
    }
  }
  for (const Side side : {Side::Left, Side::Right}) {
    const auto id = measure_.grabbed_by(side);
    if (!id) continue;
    if (measure_.drag_marker_step(*id, side, pinch_point(hand_of(frame, side)), g, frame.t_ms,
                                  pose_, active_grid(), config_.drag)) {
      notices_.push_back("marker_released:" + std::to_string(*id));
    }
  }
}

void Session::dispatch_remove_marker(const GestureSet& g, std::optional<MarkerId> gazed,
                                     TimestampMs t) {
  if (!(g.double_pinch && !prev_gestures_.double_pinch) || !gazed) return;
  measure_.remove_marker(*gazed, t);
  notices_.push_back("marker_removed:" + std::to_string(*gazed));
}

void Session::dispatch_measure(const GestureSet& g, std::optional<MarkerId> gazed,
                               TimestampMs t) {
  if (!gazed || !(rising(g, Side::Left) || rising(g, Side::Right))) return;
  const ClickOutcome outcome = measure_.click_marker(*gazed, t);
  if (outcome.result == ClickResult::Rejected) {
    notices_.push_back(std::string(to_string(outcome.connect_status)));
  }
}

void Session::update_halos(const InputFrame& frame, std::optional<MarkerId> gazed) {
  measure_.clear_hover_halos();
  if (!gazed) return;
  const Marker* m = measure_.find_marker(*gazed);
  if (m == nullptr || m->halo == Halo::Selected) return;
  const Vec3 world = local_to_world(pose_, m->position);
  std::optional<Side> nearest;
  double best = config_.hover_reach;
  for (const Side side : {Side::Left, Side::Right}) {
    const auto p = pinch_point(hand_of(frame, side));
    if (!p) continue;
    const double d = distance(*p, world);
    if (d <= best && (!nearest || d < best)) {
      best = d;
      nearest = side;
    }
  }
  if (nearest) measure_.set_halo(*gazed, *nearest == Side::Left ? Halo::HoverLeft : Halo::HoverRight);
}

Snapshot Session::snapshot() const {
  Snapshot s;
  s.t_ms = last_t_.value_or(0);
  s.mode = menu_.mode;
  s.help_visible = menu_.help_visible;
  s.menu_visible = menu_visible_;
  s.pose = pose_;
  s.gestures = prev_gestures_;
  s.gaze_target = gaze_target_;
  s.last_seq = measure_.log().last_seq();
  s.notices = notices_;
  s.hud = hud_legend(measure_.log(), pose_.scale);
  if (menu_anchor_) {
    for (const MenuButton b : kMenuButtons) {
      s.menu_buttons.push_back({b, menu_button_center(*menu_anchor_, b, config_.gestures)});
    }
  }
  for (const auto& [id, m] : measure_.markers()) {
    s.markers.push_back({id, local_to_world(pose_, m.position), m.position, m.halo, m.grabbed_by});
  }
  for (const auto& [id, r] : measure_.rulers()) s.rulers.push_back({id, r.a, r.b, r.length_m});
  if (const SnapGrid* grid = active_grid()) {
    s.snap_point_count = grid->size();
    if (config_.snapshot_snap_points) {
      s.snap_points.reserve(grid->size());
      for (const Vec3& p : grid->points()) s.snap_points.push_back(local_to_world(pose_, p));
    }
  }
  return s;
}

void Session::write_metrics(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open metrics file for writing: " + path.string());
  out << metrics_json(metrics_);
}

std::string metrics_json(const ManipMetrics& m) {
  const nlohmann::ordered_json j = {{"total_displacement_nominal", m.total_displacement},
                                    {"max_rotation_deg", m.max_rotation_deg},
                                    {"scale_min", m.scale_min_seen},
                                    {"scale_max", m.scale_max_seen}};
  return j.dump(2) + "\n";
}

Session new_session(const SessionConfig& config) {
  if (config.mesh_path.empty()) throw ConfigError("no mesh path configured");
  TriangleMesh mesh = load_obj(config.mesh_path);
  if (config.meters_per_model_unit != 1.0) scale_vertices(mesh, config.meters_per_model_unit);
  return Session(config, std::move(mesh));
}

std::vector<InputFrame> read_frames(std::istream& in) {
  std::vector<InputFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    frames.push_back(wire::parse_frame(line, line_no));
  }
  return frames;
}

std::vector<InputFrame> load_frames(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open frames file: " + path.string());
  return read_frames(in);
}

void write_frames(const std::vector<InputFrame>& frames, std::ostream& out) {
  for (const InputFrame& f : frames) out << wire::frame_line(f) << '\n';
}

ReplayResult replay(SessionConfig config, const std::filesystem::path& frames_path,
                    const std::filesystem::path& log_path,
                    const std::filesystem::path& metrics_path) {
  const std::vector<InputFrame> frames = load_frames(frames_path);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].t_ms < frames[i - 1].t_ms) throw FrameOrderError(frames[i - 1].t_ms, frames[i].t_ms);
  }
  if (!log_path.empty()) config.log_path = log_path;
  if (!metrics_path.empty()) config.metrics_path = metrics_path;
  Session session = new_session(config);
  ReplayResult result;
  result.last = session.snapshot();
  for (const InputFrame& f : frames) {
    result.last = session.apply(f);
    ++result.frames;
  }
  result.records = session.measure().log().records().size();
  if (!config.metrics_path.empty()) session.write_metrics(config.metrics_path);
  return result;
}

}  // namespace inspect
