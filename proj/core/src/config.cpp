#include "inspect/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

#include "inspect/errors.hpp"

namespace inspect {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

double to_number(const std::string& text, std::size_t line, const std::string& key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ConfigError("config line " + std::to_string(line) + ": '" + key +
                      "' expects a number, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& text, std::size_t line, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config line " + std::to_string(line) + ": '" + key +
                    "' expects true/false, got '" + text + "'");
}

Vec3 to_vec3(const std::string& text, std::size_t line, const std::string& key) {
  std::istringstream in(text);
  std::string a, b, c, extra;
  if (!(in >> a >> b >> c) || (in >> extra)) {
    throw ConfigError("config line " + std::to_string(line) + ": '" + key +
                      "' expects three numbers");
  }
  return {to_number(a, line, key), to_number(b, line, key), to_number(c, line, key)};
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("config value must be positive: ") + name);
  }
}

}  // namespace

ResolvedGridParams resolve_grid_params(const GridSettings& settings, const Aabb& mesh_box) {
  ResolvedGridParams p;
  p.step = settings.step.value_or(mesh_box.max_extent() / 50.0);
  if (!(p.step > 0.0)) throw NonPositiveParameter("step (mesh has zero extent)");
  p.point_radius = settings.point_radius.value_or(p.step / 2.0);
  p.snap_radius = settings.snap_radius.value_or(1.5 * p.step);
  return p;
}

void SessionConfig::validate() const {
  require_positive(meters_per_model_unit, "meters_per_model_unit");
  require_positive(default_pose.scale, "default_scale");
  if (grid.step) require_positive(*grid.step, "grid_step");
  if (grid.point_radius) require_positive(*grid.point_radius, "point_radius");
  if (grid.snap_radius) require_positive(*grid.snap_radius, "snap_radius");
  require_positive(gestures.pinch_threshold, "pinch_threshold");
  require_positive(gestures.cluster_radius, "cluster_radius");
  require_positive(gestures.palm_up_angle_deg, "palm_up_angle_deg");
  require_positive(gestures.thumbs_up_angle_deg, "thumbs_up_angle_deg");
  require_positive(gestures.curl_min, "curl_min");
  require_positive(gestures.point_curl_max, "point_curl_max");
  require_positive(gestures.pick_slop, "pick_slop");
  require_positive(gestures.button_size, "button_size");
  require_positive(limits.drag_gain, "drag_gain");
  require_positive(limits.scale_min, "scale_min");
  require_positive(limits.scale_max, "scale_max");
  if (limits.scale_min > limits.scale_max) throw ConfigError("scale_min exceeds scale_max");
  if (default_pose.scale < limits.scale_min || default_pose.scale > limits.scale_max) {
    throw ConfigError("default_scale outside [scale_min, scale_max]");
  }
  if (drag.release_timeout_ms <= 0) throw ConfigError("config value must be positive: release_timeout_ms");
  require_positive(marker_radius, "marker_radius");
  require_positive(hover_reach, "hover_reach");
}

SessionConfig parse_config(std::istream& in, SessionConfig cfg) {
  using Setter = std::function<void(const std::string&, std::size_t, const std::string&)>;
  auto number = [](double& field) -> Setter {
    return [&field](const std::string& v, std::size_t line, const std::string& key) {
      field = to_number(v, line, key);
    };
  };
  auto optional_number = [](std::optional<double>& field) -> Setter {
    return [&field](const std::string& v, std::size_t line, const std::string& key) {
      field = to_number(v, line, key);
    };
  };
  auto flag = [](bool& field) -> Setter {
    return [&field](const std::string& v, std::size_t line, const std::string& key) {
      field = to_bool(v, line, key);
    };
  };
  auto path = [](std::filesystem::path& field) -> Setter {
    return [&field](const std::string& v, std::size_t, const std::string&) { field = v; };
  };

  const std::unordered_map<std::string, Setter> setters{
      {"mesh", path(cfg.mesh_path)},
      {"meters_per_model_unit", number(cfg.meters_per_model_unit)},
      {"default_position",
       [&cfg](const std::string& v, std::size_t line, const std::string& key) {
         cfg.default_pose.position = to_vec3(v, line, key);
       }},
      {"default_yaw_deg",
       [&cfg](const std::string& v, std::size_t line, const std::string& key) {
         cfg.default_pose.yaw = to_number(v, line, key) * std::numbers::pi / 180.0;
       }},
      {"default_scale", number(cfg.default_pose.scale)},
      {"grid_step", optional_number(cfg.grid.step)},
      {"point_radius", optional_number(cfg.grid.point_radius)},
      {"snap_radius", optional_number(cfg.grid.snap_radius)},
      {"snapping_enabled", flag(cfg.grid.snapping_enabled)},
      {"pinch_threshold", number(cfg.gestures.pinch_threshold)},
      {"cluster_radius", number(cfg.gestures.cluster_radius)},
      {"palm_up_angle_deg", number(cfg.gestures.palm_up_angle_deg)},
      {"thumbs_up_angle_deg", number(cfg.gestures.thumbs_up_angle_deg)},
      {"curl_min", number(cfg.gestures.curl_min)},
      {"point_curl_max", number(cfg.gestures.point_curl_max)},
      {"pick_slop", number(cfg.gestures.pick_slop)},
      {"button_size", number(cfg.gestures.button_size)},
      {"drag_gain", number(cfg.limits.drag_gain)},
      {"scale_min", number(cfg.limits.scale_min)},
      {"scale_max", number(cfg.limits.scale_max)},
      {"marker_radius", number(cfg.marker_radius)},
      {"hover_reach", number(cfg.hover_reach)},
      {"release_timeout_ms",
       [&cfg](const std::string& v, std::size_t line, const std::string& key) {
         const double ms = to_number(v, line, key);
         if (ms != std::floor(ms)) {
           throw ConfigError("config line " + std::to_string(line) + ": '" + key +
                             "' expects an integer");
         }
         cfg.drag.release_timeout_ms = static_cast<TimestampMs>(ms);
       }},
      {"log_path", path(cfg.log_path)},
      {"metrics_path", path(cfg.metrics_path)},
      {"snapshot_snap_points", flag(cfg.snapshot_snap_points)},
  };

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view view = raw;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const std::string content = trim(view);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    it->second(value, line, key);
  }
  cfg.validate();
  return cfg;
}

SessionConfig load_config(const std::filesystem::path& path, SessionConfig base) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open config file: " + path.string());
  return parse_config(in, std::move(base));
}

}  // namespace inspect
