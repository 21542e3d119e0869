#include "inspect/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "inspect/errors.hpp"

namespace inspect {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

double parse_coordinate(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(line, "non-numeric coordinate '" + std::string(token) + "'");
  }
  return value;
}

std::uint32_t parse_face_index(std::string_view token, std::size_t vertex_count,
                               std::size_t line) {
  const std::string_view head = token.substr(0, token.find('/'));
  long long raw = 0;
  const char* first = head.data();
  const char* last = first + head.size();
  if (!head.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, raw);
  if (head.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(line, "malformed face index '" + std::string(token) + "'");
  }
  if (raw == 0) throw ParseError(line, "face index 0 is not valid in OBJ");
  const long long count = static_cast<long long>(vertex_count);
  const long long resolved = raw > 0 ? raw - 1 : count + raw;
  if (resolved < 0 || resolved >= count) {
    throw ParseError(line, "face index " + std::to_string(raw) + " out of range (" +
                               std::to_string(vertex_count) + " vertices)");
  }
  return static_cast<std::uint32_t>(resolved);
}

}  // namespace

double Aabb::max_extent() const {
  const Vec3 e = extent();
  return std::max({e.x, e.y, e.z});
}

bool Aabb::contains(const Vec3& p) const {
  return p.x >= min.x && p.y >= min.y && p.z >= min.z && p.x <= max.x && p.y <= max.y &&
         p.z <= max.z;
}

TriangleMesh parse_obj(std::istream& in, std::string source_name) {
  TriangleMesh mesh;
  mesh.source_name = std::move(source_name);
  std::string buffer;
  std::size_t line_no = 0;
  std::vector<std::uint32_t> polygon;
  while (std::getline(in, buffer)) {
    ++line_no;
    std::string_view line = buffer;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;

    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw ParseError(line_no, "vertex needs 3 coordinates");
      mesh.vertices.push_back({parse_coordinate(tokens[1], line_no),
                               parse_coordinate(tokens[2], line_no),
                               parse_coordinate(tokens[3], line_no)});
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) throw ParseError(line_no, "face needs at least 3 vertices");
      polygon.clear();
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        polygon.push_back(parse_face_index(tokens[i], mesh.vertices.size(), line_no));
      }
      for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
        mesh.triangles.push_back({polygon[0], polygon[i], polygon[i + 1]});
      }
    }
  }
  return mesh;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open mesh file: " + path.string());
  return parse_obj(in, path.filename().string());
}

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const Triangle& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
  out.precision(old_precision);
}

void scale_vertices(TriangleMesh& mesh, double factor) {
  for (Vec3& v : mesh.vertices) v *= factor;
}

Aabb mesh_aabb(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw EmptyMesh();
  Aabb box{mesh.vertices.front(), mesh.vertices.front()};
  for (const Vec3& v : mesh.vertices) {
    box.min = component_min(box.min, v);
    box.max = component_max(box.max, v);
  }
  return box;
}

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = length_squared(ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

// Voronoi-region walk over the triangle's vertices, edges and face.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const double n2 = length_squared(cross(ab, ac));
  // Collinear or coincident corners: the triangle is the union of its edges.
  if (n2 <= 1e-24 * length_squared(ab) * length_squared(ac) || n2 == 0.0) {
    const double d1 = distance(p, closest_point_on_segment(p, a, b));
    const double d2 = distance(p, closest_point_on_segment(p, b, c));
    const double d3 = distance(p, closest_point_on_segment(p, c, a));
    return std::min({d1, d2, d3});
  }

  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return length(ap);

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return length(bp);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return distance(p, a + ab * v);
  }

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return length(cp);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return distance(p, a + ac * w);
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return distance(p, b + (c - b) * w);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return distance(p, a + ab * v + ac * w);
}

}  // namespace inspect
