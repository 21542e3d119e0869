#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inspect/config.hpp"
#include "inspect/interact.hpp"
#include "inspect/manipulate.hpp"
#include "inspect/measure.hpp"
#include "inspect/mesh.hpp"
#include "inspect/snapgrid.hpp"

namespace inspect {

/// One replayable input sample; the only thing that drives a Session.
struct InputFrame {
  TimestampMs t_ms = 0;
  Vec3 head_position;
  Vec3 head_forward{0.0, 0.0, -1.0};
  std::optional<HandFrame> left;
  std::optional<HandFrame> right;

  friend bool operator==(const InputFrame&, const InputFrame&) = default;
};

struct MarkerView {
  MarkerId id = 0;
  Vec3 world;
  Vec3 local;
  Halo halo = Halo::None;
  std::optional<Side> grabbed_by;
};

struct RulerView {
  RulerId id = 0;
  MarkerId a = 0;
  MarkerId b = 0;
  double length_m = 0.0;
};

struct MenuButtonView {
  MenuButton button = MenuButton::Reset;
  Vec3 center;
};

/// Immutable view of the engine after one frame.
struct Snapshot {
  TimestampMs t_ms = 0;
  Mode mode = Mode::Measure;
  bool help_visible = false;
  bool menu_visible = false;
  std::vector<MenuButtonView> menu_buttons;
  ModelPose pose;
  std::vector<MarkerView> markers;
  std::vector<RulerView> rulers;
  HudLegend hud;
  std::size_t snap_point_count = 0;
  std::vector<Vec3> snap_points;  // world, only when requested by config
  GestureSet gestures;
  std::optional<MarkerId> gaze_target;
  std::uint64_t last_seq = 0;
  std::vector<std::string> notices;
};

/// Event-sourced inspection engine: a pure fold over InputFrames given the
/// config and mesh. Not thread-safe; callers serialize apply().
class Session {
 public:
  /// Takes an already-loaded mesh (meters). Creates the log file when
  /// config.log_path is non-empty.
  Session(SessionConfig config, TriangleMesh mesh);

  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

  Snapshot apply(const InputFrame& frame);
  Snapshot snapshot() const;

  const SessionConfig& config() const { return config_; }
  const TriangleMesh& mesh() const { return mesh_; }
  const SnapGrid& grid() const { return grid_; }
  const MeasureState& measure() const { return measure_; }
  const ModelPose& pose() const { return pose_; }
  const MenuState& menu() const { return menu_; }
  const ManipMetrics& metrics() const { return metrics_; }
  std::optional<TimestampMs> last_frame_time() const { return last_t_; }

  void write_metrics(const std::filesystem::path& path) const;

 private:
  const SnapGrid* active_grid() const;
  void handle_reset(TimestampMs t);
  void release_all_grabs(TimestampMs t);
  void dispatch_manipulate(const InputFrame& frame, const GestureSet& g);
  void dispatch_add_marker(const InputFrame& frame, const GestureSet& g,
                           std::optional<MarkerId> gazed);
  void dispatch_remove_marker(const GestureSet& g, std::optional<MarkerId> gazed,
                              TimestampMs t);
  void dispatch_measure(const GestureSet& g, std::optional<MarkerId> gazed, TimestampMs t);
  void update_halos(const InputFrame& frame, std::optional<MarkerId> gazed);
  bool rising(const GestureSet& g, Side side) const;

  SessionConfig config_;
  TriangleMesh mesh_;
  SnapGrid grid_;
  std::unique_ptr<CsvLogWriter> log_writer_;

  ModelPose pose_;
  MenuState menu_;
  MeasureState measure_;
  ManipMetrics metrics_;

  std::optional<TimestampMs> last_t_;
  GestureSet prev_gestures_;
  std::optional<Vec3> prev_pinch_left_;
  std::optional<Vec3> prev_pinch_right_;
  bool menu_visible_ = false;
  std::optional<Vec3> menu_anchor_;
  std::optional<MarkerId> gaze_target_;
  std::vector<std::string> notices_;
};

/// Loads the mesh named by config.mesh_path (scaled by
/// meters_per_model_unit), builds the snap grid and opens the log.
Session new_session(const SessionConfig& config);

/// Pretty-printed metrics object: displacement, peak rotation and scale extrema.
std::string metrics_json(const ManipMetrics& metrics);

struct ReplayResult {
  std::size_t frames = 0;
  std::size_t records = 0;
  Snapshot last;
};

/// Reads a JSON-lines frame stream (blank lines skipped); throws ReplayError
/// with the 1-based line on malformed records.
std::vector<InputFrame> read_frames(std::istream& in);
std::vector<InputFrame> load_frames(const std::filesystem::path& path);
void write_frames(const std::vector<InputFrame>& frames, std::ostream& out);

/// Offline replay. Log and metrics paths override the config's.
ReplayResult replay(SessionConfig config, const std::filesystem::path& frames_path,
                    const std::filesystem::path& log_path,
                    const std::filesystem::path& metrics_path);

}  // namespace inspect
