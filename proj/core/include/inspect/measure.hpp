#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inspect/interact.hpp"
#include "inspect/manipulate.hpp"
#include "inspect/snapgrid.hpp"
#include "inspect/vec3.hpp"

namespace inspect {

using MarkerId = long long;
using RulerId = long long;
using TimestampMs = std::int64_t;

/// Rulers a single marker may hold.
inline constexpr std::size_t kMaxMarkerDegree = 3;

enum class Halo { None, HoverLeft, HoverRight, Selected };
std::string_view to_string(Halo h);

struct Marker {
  MarkerId id = 0;
  Vec3 position;  // model-local meters
  Halo halo = Halo::None;
  std::optional<Side> grabbed_by;
  std::optional<TimestampMs> release_deadline;
  Vec3 grab_offset;  // marker minus hand, model-local, fixed at grab time
};

struct Ruler {
  RulerId id = 0;
  MarkerId a = 0;
  MarkerId b = 0;
  double length_m = 0.0;
  double logged_length_m = 0.0;  // length carried by the latest log record
};

enum class LogEvent { Created, Updated, Removed, SessionReset };
std::string_view to_string(LogEvent e);

struct LogRecord {
  std::uint64_t seq = 0;
  TimestampMs t_ms = 0;
  LogEvent event = LogEvent::Created;
  std::optional<RulerId> ruler_id;
  std::optional<MarkerId> marker_a;
  std::optional<MarkerId> marker_b;
  std::optional<double> length_m;
};

/// Fixed three-decimal rendering used by the log file and the HUD.
std::string format_length(double meters);

inline constexpr std::string_view kLogHeader = "seq,t_ms,event,ruler_id,marker_a,marker_b,length_m";

/// One CSV row without the trailing newline.
std::string format_log_row(const LogRecord& record);

/// Append-only record sequence; seq numbers are dense starting at 1.
/// Every appended record is forwarded to the optional sink.
class MeasureLog {
 public:
  using Sink = std::function<void(const LogRecord&)>;

  const LogRecord& append(LogRecord record);
  const std::vector<LogRecord>& records() const { return records_; }
  std::uint64_t last_seq() const { return records_.empty() ? 0 : records_.back().seq; }
  void set_sink(Sink sink) { sink_ = std::move(sink); }

 private:
  std::vector<LogRecord> records_;
  Sink sink_;
};

/// Writes the CSV header on open and one flushed row per record.
class CsvLogWriter {
 public:
  explicit CsvLogWriter(const std::filesystem::path& path);
  void write(const LogRecord& record);

 private:
  std::ofstream out_;
};

enum class ConnectStatus { Created, SelfLoop, DuplicateRuler, DegreeExceeded, UnknownMarker };
std::string_view to_string(ConnectStatus s);

struct ConnectOutcome {
  ConnectStatus status = ConnectStatus::UnknownMarker;
  std::optional<Ruler> ruler;
};

enum class ClickResult { Selected, Cancelled, Connected, Rejected, UnknownMarker };

struct ClickOutcome {
  ClickResult result = ClickResult::UnknownMarker;
  ConnectStatus connect_status = ConnectStatus::UnknownMarker;
};

enum class GrabStatus { Grabbed, Regrabbed, GrabConflict, UnknownMarker };
std::string_view to_string(GrabStatus s);

struct DragTuning {
  TimestampMs release_timeout_ms = 2000;
};

/// Markers, rulers, selection and the measurement log. Ruler lengths are
/// computed from model-local positions only; the model pose never enters.
class MeasureState {
 public:
  const std::map<MarkerId, Marker>& markers() const { return markers_; }
  const std::map<RulerId, Ruler>& rulers() const { return rulers_; }
  const MeasureLog& log() const { return log_; }
  MeasureLog& log() { return log_; }
  std::optional<MarkerId> selection() const { return selection_; }
  void clear_selection();

  const Marker* find_marker(MarkerId id) const;
  Marker* find_marker(MarkerId id);

  MarkerId add_marker(const Vec3& local_position);

  /// Moves a marker and refreshes incident ruler lengths (no log record).
  void move_marker(MarkerId id, const Vec3& local_position);

  std::size_t degree(MarkerId id) const;
  std::vector<RulerId> incident_rulers(MarkerId id) const;

  /// Creates a ruler and appends CREATED. Clears any pending selection.
  ConnectOutcome connect_markers(MarkerId first, MarkerId second, TimestampMs t_ms);

  /// Measure-mode gaze+pinch on a marker: select, cancel, or connect.
  ClickOutcome click_marker(MarkerId id, TimestampMs t_ms);

  /// Removes the marker and its rulers, one REMOVED record per ruler.
  /// Returns the number of rulers removed.
  std::size_t remove_marker(MarkerId id, TimestampMs t_ms);

  /// Appends UPDATED for every incident ruler whose length differs from
  /// the length last logged for it.
  std::size_t emit_updates(MarkerId id, TimestampMs t_ms);

  /// Clears markers, rulers and selection and appends SESSION_RESET. The log
  /// and the id counters survive.
  void reset(TimestampMs t_ms);

  GrabStatus begin_grab(MarkerId id, Side side, const Vec3& pinch_world, const ModelPose& pose,
                        TimestampMs t_ms, const DragTuning& tuning);

  /// Advances a grabbed marker by one frame. Returns true when it was released.
  bool drag_marker_step(MarkerId id, Side side, const std::optional<Vec3>& pinch_world,
                        const GestureSet& gestures, TimestampMs t_ms, const ModelPose& pose,
                        const SnapGrid* grid, const DragTuning& tuning);

  /// Marker currently held by `side`, if any.
  std::optional<MarkerId> grabbed_by(Side side) const;

  void set_halo(MarkerId id, Halo halo);
  void clear_hover_halos();

 private:
  void refresh_lengths(MarkerId id);
  void release(Marker& marker, TimestampMs t_ms);

  std::map<MarkerId, Marker> markers_;
  std::map<RulerId, Ruler> rulers_;
  std::optional<MarkerId> selection_;
  MeasureLog log_;
  MarkerId next_marker_id_ = 1;
  RulerId next_ruler_id_ = 1;
};

/// Snaps a model-local point to the grid when one is supplied and in range.
Vec3 snap_local(const SnapGrid* grid, const Vec3& local);

/// New marker between the two hands' pinch points, stored model-local and
/// snapped.
MarkerId create_marker(MeasureState& state, const HandFrame& left, const HandFrame& right,
                       const ModelPose& pose, const SnapGrid* grid);

struct HudEntry {
  std::uint64_t seq = 0;
  LogEvent event = LogEvent::Created;
  RulerId ruler_id = 0;
  double length_m = 0.0;
  std::string text;  // e.g. "7.128 m"
};

struct HudLegend {
  double scale = 0.0;
  std::string scale_text;  // three decimals
  std::vector<HudEntry> entries;  // oldest first, at most three
};

inline constexpr std::size_t kHudEntries = 3;

HudLegend hud_legend(const MeasureLog& log, double current_scale);

}  // namespace inspect
