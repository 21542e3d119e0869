#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "inspect/session.hpp"

namespace inspect::wire {

// Frame record:
//   {"t_ms": 120, "head": {"position": [x,y,z], "forward": [x,y,z]},
//    "left": <hand>|null, "right": <hand>|null}
// Hand:
//   {"palm_center": [..], "palm_normal": [..], "thumb_tip": [..],
//    "index_tip": [..], "thumb_dir": [..], "index_curl": 0.0}

nlohmann::json frame_to_json(const InputFrame& frame);

/// Validates shape, finiteness and unit vectors (within 1e-6).
/// Throws ReplayError(line, ...) on any violation.
InputFrame frame_from_json(const nlohmann::json& j, std::size_t line = 0);

/// Parses one frame record from text.
InputFrame parse_frame(std::string_view text, std::size_t line = 0);

/// Compact single-line encoding used for frames files.
std::string frame_line(const InputFrame& frame);

nlohmann::json snapshot_to_json(const Snapshot& snapshot);

/// Per-connection greeting: mesh, snap grid (model-local), config echo and
/// the current snapshot.
nlohmann::json hello_to_json(const Session& session);

nlohmann::json error_to_json(std::string_view message);

nlohmann::json config_to_json(const SessionConfig& config);

}  // namespace inspect::wire
