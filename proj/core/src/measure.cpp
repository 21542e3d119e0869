#include "inspect/measure.hpp"

#include <algorithm>
#include <cstdio>

#include "inspect/errors.hpp"

namespace inspect {

std::string_view to_string(Halo h) {
  switch (h) {
    case Halo::None: return "none";
    case Halo::HoverLeft: return "hover_left";
    case Halo::HoverRight: return "hover_right";
    case Halo::Selected: return "selected";
  }
  return "none";
}

std::string_view to_string(LogEvent e) {
  switch (e) {
    case LogEvent::Created: return "CREATED";
    case LogEvent::Updated: return "UPDATED";
    case LogEvent::Removed: return "REMOVED";
    case LogEvent::SessionReset: return "SESSION_RESET";
  }
  return "CREATED";
}

std::string_view to_string(ConnectStatus s) {
  switch (s) {
    case ConnectStatus::Created: return "created";
    case ConnectStatus::SelfLoop: return "self_loop";
    case ConnectStatus::DuplicateRuler: return "duplicate_ruler";
    case ConnectStatus::DegreeExceeded: return "degree_exceeded";
    case ConnectStatus::UnknownMarker: return "unknown_marker";
  }
  return "unknown_marker";
}

std::string_view to_string(GrabStatus s) {
  switch (s) {
    case GrabStatus::Grabbed: return "grabbed";
    case GrabStatus::Regrabbed: return "regrabbed";
    case GrabStatus::GrabConflict: return "grab_conflict";
    case GrabStatus::UnknownMarker: return "unknown_marker";
  }
  return "unknown_marker";
}

std::string format_length(double meters) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", meters);
  return buf;
}

std::string format_log_row(const LogRecord& r) {
  std::string row = std::to_string(r.seq) + ',' + std::to_string(r.t_ms) + ',' +
                    std::string(to_string(r.event)) + ',';
  auto append_id = [&row](const std::optional<long long>& v) {
    if (v) row += std::to_string(*v);
    row += ',';
  };
  append_id(r.ruler_id);
  append_id(r.marker_a);
  append_id(r.marker_b);
  if (r.length_m) row += format_length(*r.length_m);
  return row;
}

const LogRecord& MeasureLog::append(LogRecord record) {
  record.seq = last_seq() + 1;
  records_.push_back(record);
  if (sink_) sink_(records_.back());
  return records_.back();
}

CsvLogWriter::CsvLogWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) throw FileError("cannot open log file for writing: " + path.string());
  out_ << kLogHeader << '\n';
  out_.flush();
}

void CsvLogWriter::write(const LogRecord& record) {
  out_ << format_log_row(record) << '\n';
  out_.flush();
}

const Marker* MeasureState::find_marker(MarkerId id) const {
  const auto it = markers_.find(id);
  return it == markers_.end() ? nullptr : &it->second;
}

Marker* MeasureState::find_marker(MarkerId id) {
  const auto it = markers_.find(id);
  return it == markers_.end() ? nullptr : &it->second;
}

MarkerId MeasureState::add_marker(const Vec3& local_position) {
  const MarkerId id = next_marker_id_++;
  markers_.emplace(id, Marker{.id = id, .position = local_position});
  return id;
}

void MeasureState::move_marker(MarkerId id, const Vec3& local_position) {
  Marker* m = find_marker(id);
  if (m == nullptr) return;
  m->position = local_position;
  refresh_lengths(id);
}

void MeasureState::refresh_lengths(MarkerId id) {
  for (auto& [rid, ruler] : rulers_) {
    if (ruler.a != id && ruler.b != id) continue;
    ruler.length_m = distance(markers_.at(ruler.a).position, markers_.at(ruler.b).position);
  }
}

std::size_t MeasureState::degree(MarkerId id) const {
  return static_cast<std::size_t>(std::count_if(rulers_.begin(), rulers_.end(), [id](const auto& kv) {
    return kv.second.a == id || kv.second.b == id;
  }));
}

std::vector<RulerId> MeasureState::incident_rulers(MarkerId id) const {
  std::vector<RulerId> out;
  for (const auto& [rid, ruler] : rulers_) {
    if (ruler.a == id || ruler.b == id) out.push_back(rid);
  }
  return out;
}

void MeasureState::clear_selection() {
  if (!selection_) return;
  if (Marker* m = find_marker(*selection_)) m->halo = Halo::None;
  selection_.reset();
}

ConnectOutcome MeasureState::connect_markers(MarkerId first, MarkerId second, TimestampMs t_ms) {
  clear_selection();
  const Marker* a = find_marker(first);
  const Marker* b = find_marker(second);
  if (a == nullptr || b == nullptr) return {ConnectStatus::UnknownMarker, std::nullopt};
  if (first == second) return {ConnectStatus::SelfLoop, std::nullopt};
  for (const auto& [rid, r] : rulers_) {
    if ((r.a == first && r.b == second) || (r.a == second && r.b == first)) {
      return {ConnectStatus::DuplicateRuler, std::nullopt};
    }
  }
  if (degree(first) >= kMaxMarkerDegree || degree(second) >= kMaxMarkerDegree) {
    return {ConnectStatus::DegreeExceeded, std::nullopt};
  }
  Ruler ruler{.id = next_ruler_id_++, .a = first, .b = second};
  ruler.length_m = distance(a->position, b->position);
  ruler.logged_length_m = ruler.length_m;
  rulers_.emplace(ruler.id, ruler);
  log_.append({.t_ms = t_ms,
               .event = LogEvent::Created,
               .ruler_id = ruler.id,
               .marker_a = first,
               .marker_b = second,
               .length_m = ruler.length_m});
  return {ConnectStatus::Created, ruler};
}

ClickOutcome MeasureState::click_marker(MarkerId id, TimestampMs t_ms) {
  if (find_marker(id) == nullptr) return {ClickResult::UnknownMarker, ConnectStatus::UnknownMarker};
  if (!selection_) {
    selection_ = id;
    find_marker(id)->halo = Halo::Selected;
    return {ClickResult::Selected, ConnectStatus::Created};
  }
  const ConnectOutcome outcome = connect_markers(*selection_, id, t_ms);
  switch (outcome.status) {
    case ConnectStatus::Created: return {ClickResult::Connected, outcome.status};
    case ConnectStatus::SelfLoop: return {ClickResult::Cancelled, outcome.status};
    default: return {ClickResult::Rejected, outcome.status};
  }
}

std::size_t MeasureState::remove_marker(MarkerId id, TimestampMs t_ms) {
  if (find_marker(id) == nullptr) return 0;
  std::size_t removed = 0;
  for (auto it = rulers_.begin(); it != rulers_.end();) {
    const Ruler& r = it->second;
    if (r.a == id || r.b == id) {
      log_.append({.t_ms = t_ms,
                   .event = LogEvent::Removed,
                   .ruler_id = r.id,
                   .marker_a = r.a,
                   .marker_b = r.b,
                   .length_m = r.length_m});
      it = rulers_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  if (selection_ == id) selection_.reset();
  markers_.erase(id);
  return removed;
}

std::size_t MeasureState::emit_updates(MarkerId id, TimestampMs t_ms) {
  std::size_t emitted = 0;
  for (auto& [rid, r] : rulers_) {
    if (r.a != id && r.b != id) continue;
    if (r.length_m == r.logged_length_m) continue;
    r.logged_length_m = r.length_m;
    log_.append({.t_ms = t_ms,
                 .event = LogEvent::Updated,
                 .ruler_id = r.id,
                 .marker_a = r.a,
                 .marker_b = r.b,
                 .length_m = r.length_m});
    ++emitted;
  }
  return emitted;
}

void MeasureState::reset(TimestampMs t_ms) {
  markers_.clear();
  rulers_.clear();
  selection_.reset();
  log_.append({.t_ms = t_ms, .event = LogEvent::SessionReset});
}

GrabStatus MeasureState::begin_grab(MarkerId id, Side side, const Vec3& pinch_world,
                                    const ModelPose& pose, TimestampMs t_ms,
                                    const DragTuning& tuning) {
  Marker* m = find_marker(id);
  if (m == nullptr) return GrabStatus::UnknownMarker;
  if (m->grabbed_by && *m->grabbed_by != side) return GrabStatus::GrabConflict;
  const bool already = m->grabbed_by.has_value();
  m->grabbed_by = side;
  m->grab_offset = m->position - world_to_local(pose, pinch_world);
  m->release_deadline = t_ms + tuning.release_timeout_ms;
  return already ? GrabStatus::Regrabbed : GrabStatus::Grabbed;
}

bool MeasureState::drag_marker_step(MarkerId id, Side side,
                                    const std::optional<Vec3>& pinch_world,
                                    const GestureSet& gestures, TimestampMs t_ms,
                                    const ModelPose& pose, const SnapGrid* grid,
                                    const DragTuning& tuning) {
  Marker* m = find_marker(id);
  if (m == nullptr || m->grabbed_by != side) return false;
  if (gestures.thumbs_up(side)) {
    release(*m, t_ms);
    return true;
  }
  if (gestures.pinch(side) && pinch_world) {
    const Vec3 target = snap_local(grid, world_to_local(pose, *pinch_world) + m->grab_offset);
    m->position = target;
    refresh_lengths(id);
    m->release_deadline = t_ms + tuning.release_timeout_ms;
    return false;
  }
  if (m->release_deadline && t_ms >= *m->release_deadline) {
    release(*m, t_ms);
    return true;
  }
  return false;
}

void MeasureState::release(Marker& marker, TimestampMs t_ms) {
  marker.grabbed_by.reset();
  marker.release_deadline.reset();
  emit_updates(marker.id, t_ms);
}

std::optional<MarkerId> MeasureState::grabbed_by(Side side) const {
  for (const auto& [id, m] : markers_) {
    if (m.grabbed_by == side) return id;
  }
  return std::nullopt;
}

void MeasureState::set_halo(MarkerId id, Halo halo) {
  if (Marker* m = find_marker(id)) m->halo = halo;
}

void MeasureState::clear_hover_halos() {
  for (auto& [id, m] : markers_) {
    if (m.halo != Halo::Selected) m.halo = Halo::None;
  }
}

Vec3 snap_local(const SnapGrid* grid, const Vec3& local) {
  if (grid == nullptr) return local;
  if (const auto hit = grid->query(local)) return hit->point;
  return local;
}

MarkerId create_marker(MeasureState& state, const HandFrame& left, const HandFrame& right,
                       const ModelPose& pose, const SnapGrid* grid) {
  const Vec3 world = midpoint(left.pinch_point(), right.pinch_point());
  return state.add_marker(snap_local(grid, world_to_local(pose, world)));
}

HudLegend hud_legend(const MeasureLog& log, double current_scale) {
  HudLegend hud;
  hud.scale = current_scale;
  hud.scale_text = format_length(current_scale);
  const auto& records = log.records();
  for (auto it = records.rbegin(); it != records.rend() && hud.entries.size() < kHudEntries;
       ++it) {
    if (it->event != LogEvent::Created && it->event != LogEvent::Updated) continue;
    hud.entries.push_back({.seq = it->seq,
                           .event = it->event,
                           .ruler_id = it->ruler_id.value_or(0),
                           .length_m = it->length_m.value_or(0.0),
                           .text = format_length(it->length_m.value_or(0.0)) + " m"});
  }
  std::reverse(hud.entries.begin(), hud.entries.end());
  return hud;
}

}  // namespace inspect
