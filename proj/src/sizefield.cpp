#include "coastpca/sizefield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "coastpca/errors.hpp"
#include "coastpca/io_util.hpp"

namespace coastpca {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Nearest point on segment [a, b] to pt, using a local tangent plane at pt
// to find the foot of the perpendicular.
GeoPoint nearest_on_segment(const GeoPoint& pt, const GeoPoint& a,
                            const GeoPoint& b) {
  const double cosphi = std::cos(pt.lat * kDegToRad);
  const double ax = (a.lon - pt.lon) * cosphi;
  const double ay = a.lat - pt.lat;
  const double bx = (b.lon - pt.lon) * cosphi;
  const double by = b.lat - pt.lat;
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(-(ax * dx + ay * dy) / len2, 0.0, 1.0);
  return {a.lon + t * (b.lon - a.lon), a.lat + t * (b.lat - a.lat)};
}

}  // namespace

void validate_rule(const GradationRule& r) {
  if (!(r.h_min > 0.0) || !(r.h_min <= r.h_max))
    throw invalid_argument_error("gradation rule '" + r.class_id +
                                 "': need 0 < h_min <= h_max");
  if (r.plateau < 0.0)
    throw invalid_argument_error("gradation rule '" + r.class_id +
                                 "': plateau must be non-negative");
  if (!(r.ramp > 0.0))
    throw invalid_argument_error("gradation rule '" + r.class_id +
                                 "': ramp must be positive");
}

double rule_size_at(const GradationRule& r, double d) {
  if (d <= r.plateau) return r.h_min;
  if (d < r.plateau + r.ramp)
    return r.h_min + (d - r.plateau) / r.ramp * (r.h_max - r.h_min);
  return r.h_max;
}

double distance_to_contours(const GeoPoint& pt,
                            const std::vector<Contour>& contours) {
  double best = std::numeric_limits<double>::infinity();
  for (const Contour& c : contours) {
    const std::size_t nseg = c.closed ? c.points.size() : c.points.size() - 1;
    for (std::size_t u = 0; u < nseg; ++u) {
      const GeoPoint& a = c.points[u];
      const GeoPoint& b = c.points[(u + 1) % c.points.size()];
      const GeoPoint nearest = nearest_on_segment(pt, a, b);
      best = std::min(best, great_circle_deg(pt, nearest));
    }
  }
  return best;
}

double evaluate_size(
    const GeoPoint& pt,
    const std::vector<std::pair<GradationRule, std::vector<Contour>>>& rules) {
  if (rules.empty())
    throw invalid_argument_error("evaluate_size: empty rule set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [rule, contours] : rules) {
    validate_rule(rule);
    if (contours.empty())
      throw invalid_argument_error("evaluate_size: rule '" + rule.class_id +
                                   "' has no contours");
    best = std::min(best, rule_size_at(rule, distance_to_contours(pt, contours)));
  }
  return best;
}

namespace {

bool coincide(const GeoPoint& a, const GeoPoint& b) {
  return std::abs(a.lon - b.lon) <= 1e-9 && std::abs(a.lat - b.lat) <= 1e-9;
}

// Drops zero-length steps and snaps junctions to bit-identical points so
// that point ids in the file line up with BoundaryLoop::vertices().
BoundaryLoop normalize_loop(const BoundaryLoop& loop) {
  BoundaryLoop out;
  out.closed = loop.closed;
  out.island = loop.island;
  for (const BoundarySegment& seg : loop.segments) {
    BoundarySegment cleaned;
    cleaned.origin = seg.origin;
    cleaned.source_id = seg.source_id;
    for (const GeoPoint& pt : seg.points) {
      GeoPoint q = pt;
      if (!out.segments.empty() && cleaned.points.empty() &&
          coincide(out.segments.back().points.back(), q))
        q = out.segments.back().points.back();
      if (!cleaned.points.empty() && coincide(cleaned.points.back(), q))
        continue;
      cleaned.points.push_back(q);
    }
    if (cleaned.points.size() >= 2) out.segments.push_back(std::move(cleaned));
  }
  if (!out.segments.empty()) {
    GeoPoint& last = out.segments.back().points.back();
    const GeoPoint& first = out.segments.front().points.front();
    if (coincide(last, first)) last = first;
  }
  return out;
}

}  // namespace

void write_geo_file(const std::vector<BoundaryLoop>& loops,
                    const std::vector<GradationRule>& rules,
                    const std::map<std::string, std::string>& class_by_source_id,
                    const std::filesystem::path& path,
                    const GeoExportOptions& options) {
  for (const GradationRule& r : rules) validate_rule(r);

  std::vector<BoundaryLoop> normalized;
  normalized.reserve(loops.size());
  for (const BoundaryLoop& loop : loops) {
    BoundaryLoop n = normalize_loop(loop);
    if (!loop_is_closed(n))
      throw invalid_argument_error(
          "write_geo_file: refusing to export an unclosed loop");
    for (const BoundarySegment& seg : n.segments)
      for (const GeoPoint& pt : seg.points)
        if (!std::isfinite(pt.lon) || !std::isfinite(pt.lat))
          throw invalid_argument_error(
              "write_geo_file: refusing to export a non-finite coordinate");
    normalized.push_back(std::move(n));
  }

  std::ostringstream out;
  out << "// domain boundaries and mesh size fields\n";

  std::map<std::pair<double, double>, int> point_ids;
  int next_point = 1;
  auto point_id = [&](const GeoPoint& pt) {
    const auto key = std::make_pair(pt.lon, pt.lat);
    auto it = point_ids.find(key);
    if (it != point_ids.end()) return it->second;
    point_ids.emplace(key, next_point);
    out << "Point(" << next_point << ") = {" << format_double(pt.lon) << ", "
        << format_double(pt.lat) << ", 0};\n";
    return next_point++;
  };

  int next_curve = 1;
  int next_loop = 1;
  int next_surface = 1;
  struct CurveRec {
    int id;
    std::string cls;
  };
  std::vector<CurveRec> curves;
  std::vector<int> loop_ids;

  for (const BoundaryLoop& loop : normalized) {
    std::vector<int> curve_ids;
    for (const BoundarySegment& seg : loop.segments) {
      std::vector<int> chain;
      chain.reserve(seg.points.size());
      for (const GeoPoint& pt : seg.points) chain.push_back(point_id(pt));
      const int cid = next_curve++;
      out << (chain.size() == 2 ? "Line(" : "Spline(") << cid << ") = {";
      for (std::size_t i = 0; i < chain.size(); ++i)
        out << (i ? ", " : "") << chain[i];
      out << "};\n";
      std::string cls;
      if (auto it = class_by_source_id.find(seg.source_id);
          it != class_by_source_id.end())
        cls = it->second;
      curves.push_back({cid, cls});
      curve_ids.push_back(cid);
    }
    const int lid = 1000 + next_loop++;
    loop_ids.push_back(lid);
    out << "Line Loop(" << lid << ") = {";
    for (std::size_t i = 0; i < curve_ids.size(); ++i)
      out << (i ? ", " : "") << curve_ids[i];
    out << "};\n";
  }

  // One plane surface per outer loop, with contained islands as holes.
  std::vector<std::vector<GeoPoint>> outer_polys;
  for (std::size_t i = 0; i < normalized.size(); ++i)
    if (!normalized[i].island) outer_polys.push_back(normalized[i].vertices());
  std::size_t outer_seen = 0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (normalized[i].island) continue;
    std::vector<int> members{loop_ids[i]};
    for (std::size_t j = 0; j < normalized.size(); ++j) {
      if (!normalized[j].island) continue;
      const GeoPoint probe = normalized[j].segments.front().points.front();
      const auto& poly = outer_polys[outer_seen];
      bool in = false;
      for (std::size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
        if ((poly[a].lat > probe.lat) != (poly[b].lat > probe.lat)) {
          const double xint =
              poly[b].lon + (probe.lat - poly[b].lat) *
                                (poly[a].lon - poly[b].lon) /
                                (poly[a].lat - poly[b].lat);
          if (probe.lon < xint) in = !in;
        }
      }
      if (in) members.push_back(loop_ids[j]);
    }
    out << "Plane Surface(" << 2000 + next_surface++ << ") = {";
    for (std::size_t m = 0; m < members.size(); ++m)
      out << (m ? ", " : "") << members[m];
    out << "};\n";
    ++outer_seen;
  }

  // Size fields: Distance + Threshold per rule, combined by a Min field.
  int next_field = 1;
  if (rules.empty()) {
    const int fid = next_field++;
    out << "Field[" << fid << "] = MathEval;\n";
    out << "Field[" << fid << "].F = \"" << format_double(options.fallback_h_max)
        << "\";\n";
    out << "Background Field = " << fid << ";\n";
  } else {
    std::vector<int> threshold_ids;
    for (const GradationRule& rule : rules) {
      const int dist_id = next_field++;
      out << "Field[" << dist_id << "] = Distance;\n";
      out << "Field[" << dist_id << "].CurvesList = {";
      bool firstc = true;
      for (const CurveRec& rec : curves) {
        if (rec.cls != rule.class_id) continue;
        out << (firstc ? "" : ", ") << rec.id;
        firstc = false;
      }
      out << "};\n";
      const int thr_id = next_field++;
      threshold_ids.push_back(thr_id);
      out << "Field[" << thr_id << "] = Threshold;\n";
      out << "Field[" << thr_id << "].InField = " << dist_id << ";\n";
      out << "Field[" << thr_id << "].DistMin = " << format_double(rule.plateau)
          << ";\n";
      out << "Field[" << thr_id
          << "].DistMax = " << format_double(rule.plateau + rule.ramp) << ";\n";
      out << "Field[" << thr_id << "].SizeMin = " << format_double(rule.h_min)
          << ";\n";
      out << "Field[" << thr_id << "].SizeMax = " << format_double(rule.h_max)
          << ";\n";
    }
    const int min_id = next_field++;
    out << "Field[" << min_id << "] = Min;\n";
    out << "Field[" << min_id << "].FieldsList = {";
    for (std::size_t i = 0; i < threshold_ids.size(); ++i)
      out << (i ? ", " : "") << threshold_ids[i];
    out << "};\n";
    out << "Background Field = " << min_id << ";\n";
  }

  atomic_write_file(path, out.str());

  // Self-check: the file must parse back to the same loop vertices.
  const GeoFile parsed = read_geo_file(path);
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const std::vector<GeoPoint> expect = normalized[i].vertices();
    const std::vector<GeoPoint> got = parsed.loop_vertices(loop_ids[i]);
    if (expect.size() != got.size())
      throw error("write_geo_file: round-trip vertex count mismatch on loop " +
                  std::to_string(loop_ids[i]));
    for (std::size_t v = 0; v < expect.size(); ++v)
      if (!(expect[v] == got[v]))
        throw error("write_geo_file: round-trip coordinate mismatch on loop " +
                    std::to_string(loop_ids[i]));
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Parses "(id)" out of "Name(id) = ...".
int parse_id(std::string_view line, std::size_t open, std::size_t close) {
  return std::atoi(std::string(line.substr(open + 1, close - open - 1)).c_str());
}

std::vector<double> parse_brace_list(std::string_view line,
                                     const std::string& context) {
  const std::size_t open = line.find('{');
  const std::size_t close = line.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open)
    throw parse_error("geo: malformed braces in " + context);
  std::vector<double> values;
  std::string body(line.substr(open + 1, close - open - 1));
  std::istringstream ss(body);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const std::string t(trim(token));
    if (t.empty()) continue;
    char* endp = nullptr;
    const double v = std::strtod(t.c_str(), &endp);
    if (endp == t.c_str())
      throw parse_error("geo: bad number '" + t + "' in " + context);
    values.push_back(v);
  }
  return values;
}

std::vector<int> to_ints(const std::vector<double>& v) {
  std::vector<int> out;
  out.reserve(v.size());
  for (double d : v) out.push_back(static_cast<int>(d));
  return out;
}

}  // namespace

GeoFile read_geo_file(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  GeoFile geo;
  std::istringstream stream(content);
  std::string raw;
  int lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    if (const std::size_t slash = raw.find("//"); slash != std::string::npos)
      raw.erase(slash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const std::string context = "line " + std::to_string(lineno);

    auto starts = [&](std::string_view prefix) {
      return line.substr(0, prefix.size()) == prefix;
    };

    if (starts("Point(")) {
      const int id = parse_id(line, line.find('('), line.find(')'));
      const auto vals = parse_brace_list(line, context);
      if (vals.size() < 2) throw parse_error("geo: point needs >= 2 coords, " + context);
      geo.points[id] = {vals[0], vals[1], vals.size() > 2 ? vals[2] : 0.0};
    } else if (starts("Line Loop(") || starts("Curve Loop(")) {
      const int id = parse_id(line, line.find('('), line.find(')'));
      geo.loops[id] = to_ints(parse_brace_list(line, context));
    } else if (starts("Line(") || starts("Spline(")) {
      const int id = parse_id(line, line.find('('), line.find(')'));
      geo.curves[id] = to_ints(parse_brace_list(line, context));
    } else if (starts("Plane Surface(")) {
      const int id = parse_id(line, line.find('('), line.find(')'));
      geo.surfaces[id] = to_ints(parse_brace_list(line, context));
    } else if (starts("Background Field")) {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        throw parse_error("geo: malformed Background Field, " + context);
      geo.background_field =
          std::atoi(std::string(trim(line.substr(eq + 1))).c_str());
    } else if (starts("Field[")) {
      const std::size_t open = line.find('[');
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos)
        throw parse_error("geo: malformed field id, " + context);
      const int id =
          std::atoi(std::string(line.substr(open + 1, close - open - 1)).c_str());
      const std::string_view rest = trim(line.substr(close + 1));
      if (rest.empty())
        throw parse_error("geo: malformed field statement, " + context);
      if (rest.front() == '=') {
        std::string kind(trim(rest.substr(1)));
        if (!kind.empty() && kind.back() == ';') kind.pop_back();
        geo.fields[id].kind = std::string(trim(kind));
      } else if (rest.front() == '.') {
        const std::size_t eq = rest.find('=');
        if (eq == std::string_view::npos)
          throw parse_error("geo: malformed field property, " + context);
        const std::string prop(trim(rest.substr(1, eq - 1)));
        std::string_view value = trim(rest.substr(eq + 1));
        if (!value.empty() && value.back() == ';') value.remove_suffix(1);
        value = trim(value);
        if (!value.empty() && value.front() == '"') {
          geo.fields[id].expr =
              std::string(value.substr(1, value.rfind('"') - 1));
        } else if (!value.empty() && value.front() == '{') {
          geo.fields[id].lists[prop] = parse_brace_list(value, context);
        } else {
          char* endp = nullptr;
          geo.fields[id].scalars[prop] =
              std::strtod(std::string(value).c_str(), &endp);
        }
      } else {
        throw parse_error("geo: unrecognized field statement, " + context);
      }
    } else {
      throw parse_error("geo: unrecognized statement '" +
                        std::string(line.substr(0, 24)) + "', " + context);
    }
  }
  return geo;
}

std::vector<GeoPoint> GeoFile::loop_vertices(int loop_id) const {
  const auto lit = loops.find(loop_id);
  if (lit == loops.end())
    throw invalid_argument_error("geo: no loop with id " +
                                 std::to_string(loop_id));
  std::vector<int> ids;
  for (int curve_id : lit->second) {
    const auto cit = curves.find(std::abs(curve_id));
    if (cit == curves.end())
      throw parse_error("geo: loop " + std::to_string(loop_id) +
                        " references missing curve " + std::to_string(curve_id));
    std::vector<int> chain = cit->second;
    if (curve_id < 0) std::reverse(chain.begin(), chain.end());
    if (!ids.empty() && !chain.empty() && chain.front() != ids.back() &&
        chain.back() == ids.back())
      std::reverse(chain.begin(), chain.end());
    for (int pid : chain) {
      if (!ids.empty() && pid == ids.back()) continue;
      ids.push_back(pid);
    }
  }
  if (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
  std::vector<GeoPoint> out;
  out.reserve(ids.size());
  for (int pid : ids) {
    const auto pit = points.find(pid);
    if (pit == points.end())
      throw parse_error("geo: missing point " + std::to_string(pid));
    out.push_back({pit->second[0], pit->second[1]});
  }
  return out;
}

}  // namespace coastpca
