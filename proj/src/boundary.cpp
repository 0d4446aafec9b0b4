#include "coastpca/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "coastpca/errors.hpp"

namespace coastpca {

namespace {

constexpr double kCoincideTol = 1e-9;  // degrees, per coordinate
constexpr double kSnapTol = 1e-9;      // intersection parameter

bool points_coincide(const GeoPoint& a, const GeoPoint& b,
                     double tol = kCoincideTol) {
  return std::abs(a.lon - b.lon) <= tol && std::abs(a.lat - b.lat) <= tol;
}

struct Intersection {
  double t = 0.0;  // along the first segment
  double s = 0.0;  // along the second segment
  bool t_snapped = false;
  bool s_snapped = false;
};

// Planar segment-segment intersection in lon/lat. Parameters within
// kSnapTol of a segment end snap onto it. Parallel segments yield nothing
// (transversal crossings are a precondition).
std::optional<Intersection> segment_intersection(const GeoPoint& p0,
                                                 const GeoPoint& p1,
                                                 const GeoPoint& q0,
                                                 const GeoPoint& q1) {
  const double d1x = p1.lon - p0.lon;
  const double d1y = p1.lat - p0.lat;
  const double d2x = q1.lon - q0.lon;
  const double d2y = q1.lat - q0.lat;
  const double cross = d1x * d2y - d1y * d2x;
  const double scale =
      (std::abs(d1x) + std::abs(d1y)) * (std::abs(d2x) + std::abs(d2y));
  if (std::abs(cross) <= 1e-14 * scale) return std::nullopt;
  const double ex = q0.lon - p0.lon;
  const double ey = q0.lat - p0.lat;
  Intersection hit;
  hit.t = (ex * d2y - ey * d2x) / cross;
  hit.s = (ex * d1y - ey * d1x) / cross;
  auto snap = [](double& v, bool& flag) {
    if (std::abs(v) <= kSnapTol) {
      flag = v != 0.0;
      v = 0.0;
    } else if (std::abs(v - 1.0) <= kSnapTol) {
      flag = v != 1.0;
      v = 1.0;
    }
  };
  snap(hit.t, hit.t_snapped);
  snap(hit.s, hit.s_snapped);
  if (hit.t < 0.0 || hit.t > 1.0 || hit.s < 0.0 || hit.s > 1.0)
    return std::nullopt;
  return hit;
}

struct LineHit {
  double line_param = 0.0;
  int contour = -1;
  double contour_param = 0.0;
  GeoPoint point;
};

struct Cut {
  double param = 0.0;  // position along the contour
  int piece = -1;
  int end = -1;  // 0 = piece front, 1 = piece back
};

struct PieceEnd {
  bool on_contour = false;
  int contour = -1;
  double param = 0.0;
};

struct Piece {
  std::string id;
  std::vector<GeoPoint> pts;
  PieceEnd ends[2];
};

bool point_in_polygon(const GeoPoint& pt, const std::vector<GeoPoint>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].lat > pt.lat) != (poly[j].lat > pt.lat)) {
      const double xint = poly[j].lon + (pt.lat - poly[j].lat) *
                                            (poly[i].lon - poly[j].lon) /
                                            (poly[i].lat - poly[j].lat);
      if (pt.lon < xint) in = !in;
    }
  }
  return in;
}

void reverse_loop(BoundaryLoop& loop) {
  std::reverse(loop.segments.begin(), loop.segments.end());
  for (BoundarySegment& seg : loop.segments)
    std::reverse(seg.points.begin(), seg.points.end());
}

double polygon_area(const std::vector<GeoPoint>& v) {
  double acc = 0.0;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
    acc += v[j].lon * v[i].lat - v[i].lon * v[j].lat;
  return acc / 2.0;
}

// --- planar arrangement of trimmed pieces and shoreline arcs -------------

struct Edge {
  bool is_piece = false;
  int piece_idx = -1;
  std::string source_id;
  int u = -1, v = -1;           // vertex ids
  std::vector<GeoPoint> pts;    // from u to v
};

struct Arrangement {
  std::vector<GeoPoint> vertices;
  std::vector<Edge> edges;

  int vertex_for(const GeoPoint& pt) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (points_coincide(vertices[i], pt)) return static_cast<int>(i);
    vertices.push_back(pt);
    return static_cast<int>(vertices.size()) - 1;
  }
};

// Directed edge id: edge index * 2 + dir (0 = u->v, 1 = v->u).
int head_of(const Edge& e, int dir) { return dir == 0 ? e.v : e.u; }
int tail_of(const Edge& e, int dir) { return dir == 0 ? e.u : e.v; }

double outgoing_angle(const Arrangement& arr, int edge, int dir) {
  const Edge& e = arr.edges[edge];
  const GeoPoint& from = arr.vertices[tail_of(e, dir)];
  if (dir == 0) {
    for (const GeoPoint& pt : e.pts)
      if (!points_coincide(pt, from, 1e-12))
        return std::atan2(pt.lat - from.lat, pt.lon - from.lon);
  } else {
    for (auto it = e.pts.rbegin(); it != e.pts.rend(); ++it)
      if (!points_coincide(*it, from, 1e-12))
        return std::atan2(it->lat - from.lat, it->lon - from.lon);
  }
  return 0.0;
}

}  // namespace

std::vector<GeoPoint> BoundaryLoop::vertices() const {
  std::vector<GeoPoint> out;
  for (const BoundarySegment& seg : segments) {
    for (const GeoPoint& pt : seg.points) {
      if (!out.empty() && points_coincide(out.back(), pt)) continue;
      out.push_back(pt);
    }
  }
  if (out.size() > 1 && points_coincide(out.front(), out.back()))
    out.pop_back();
  return out;
}

double signed_area(const BoundaryLoop& loop) {
  return polygon_area(loop.vertices());
}

bool loop_is_closed(const BoundaryLoop& loop, double tol) {
  if (loop.segments.empty()) return false;
  for (const BoundarySegment& seg : loop.segments)
    if (seg.points.size() < 2) return false;
  for (std::size_t i = 0; i + 1 < loop.segments.size(); ++i)
    if (!points_coincide(loop.segments[i].points.back(),
                         loop.segments[i + 1].points.front(), tol))
      return false;
  return points_coincide(loop.segments.back().points.back(),
                         loop.segments.front().points.front(), tol);
}

TrimResult trim_to_domain(const std::vector<Contour>& shorelines,
                          const std::vector<OpenLine>& open_lines) {
  TrimResult result;
  for (const Contour& c : shorelines) validate_contour(c);

  // Intersect every open line with every shoreline segment, then trim the
  // line to [first hit, last hit].
  std::vector<Piece> pieces;
  std::vector<std::vector<Cut>> cuts(shorelines.size());
  for (std::size_t li = 0; li < open_lines.size(); ++li) {
    const OpenLine& line = open_lines[li];
    if (line.points.size() < 2)
      throw invalid_argument_error("open line '" + line.id +
                                   "' has fewer than 2 points");
    std::vector<LineHit> hits;
    for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
      const GeoPoint& a = line.points[i];
      const GeoPoint& b = line.points[i + 1];
      for (std::size_t ci = 0; ci < shorelines.size(); ++ci) {
        const Contour& c = shorelines[ci];
        const std::size_t nseg =
            c.closed ? c.points.size() : c.points.size() - 1;
        for (std::size_t u = 0; u < nseg; ++u) {
          const GeoPoint& q0 = c.points[u];
          const GeoPoint& q1 = c.points[(u + 1) % c.points.size()];
          const auto hit = segment_intersection(a, b, q0, q1);
          if (!hit) continue;
          LineHit h;
          h.line_param = static_cast<double>(i) + hit->t;
          h.contour = static_cast<int>(ci);
          h.contour_param = static_cast<double>(u) + hit->s;
          if (c.closed && h.contour_param >= static_cast<double>(nseg))
            h.contour_param -= static_cast<double>(nseg);
          if (hit->s_snapped || hit->s == 0.0 || hit->s == 1.0) {
            h.point = hit->s == 0.0 ? q0 : q1;
          } else if (hit->t_snapped || hit->t == 0.0 || hit->t == 1.0) {
            h.point = hit->t == 0.0 ? a : b;
          } else {
            h.point = {a.lon + hit->t * (b.lon - a.lon),
                       a.lat + hit->t * (b.lat - a.lat)};
          }
          if (hit->s_snapped || hit->t_snapped)
            result.warnings.push_back(
                "near-tangential crossing of line '" + line.id +
                "' and contour '" + c.id + "' snapped to a segment endpoint");
          hits.push_back(h);
        }
      }
    }
    std::sort(hits.begin(), hits.end(),
              [](const LineHit& x, const LineHit& y) {
                if (x.line_param != y.line_param)
                  return x.line_param < y.line_param;
                if (x.contour != y.contour) return x.contour < y.contour;
                return x.contour_param < y.contour_param;
              });
    // Crossings at shared vertices register twice; keep the first.
    std::vector<LineHit> dedup;
    for (const LineHit& h : hits) {
      if (!dedup.empty() &&
          (h.line_param - dedup.back().line_param) < kSnapTol &&
          points_coincide(h.point, dedup.back().point))
        continue;
      dedup.push_back(h);
    }

    Piece piece;
    piece.id = line.id;
    if (dedup.empty()) {
      piece.pts = line.points;
    } else if (dedup.size() == 1) {
      throw unclosable_domain_error(
          "open line '" + line.id +
          "' intersects the shorelines only once and cannot close the domain");
    } else {
      const LineHit& first = dedup.front();
      const LineHit& last = dedup.back();
      piece.pts.push_back(first.point);
      for (std::size_t v = 0; v < line.points.size(); ++v) {
        const double pos = static_cast<double>(v);
        if (pos > first.line_param + kSnapTol &&
            pos < last.line_param - kSnapTol)
          piece.pts.push_back(line.points[v]);
      }
      piece.pts.push_back(last.point);
      if (piece.pts.size() < 2 ||
          points_coincide(piece.pts.front(), piece.pts.back()))
        throw unclosable_domain_error("open line '" + line.id +
                                      "' collapses after trimming");
      piece.ends[0] = {true, first.contour, first.contour_param};
      piece.ends[1] = {true, last.contour, last.contour_param};
      cuts[first.contour].push_back(
          {first.contour_param, static_cast<int>(pieces.size()), 0});
      cuts[last.contour].push_back(
          {last.contour_param, static_cast<int>(pieces.size()), 1});
    }
    pieces.push_back(std::move(piece));
  }

  // Untrimmed pieces must join other pieces endpoint-to-endpoint.
  for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
    for (int e = 0; e < 2; ++e) {
      if (pieces[pi].ends[e].on_contour) continue;
      const GeoPoint& pt =
          e == 0 ? pieces[pi].pts.front() : pieces[pi].pts.back();
      int matches = 0;
      for (std::size_t pj = 0; pj < pieces.size(); ++pj) {
        for (int f = 0; f < 2; ++f) {
          if (pj == pi && f == e) continue;
          if (pieces[pj].ends[f].on_contour) continue;
          const GeoPoint& qt =
              f == 0 ? pieces[pj].pts.front() : pieces[pj].pts.back();
          if (points_coincide(pt, qt)) ++matches;
        }
      }
      if (matches == 0)
        throw unclosable_domain_error(
            "open line '" + pieces[pi].id +
            "' has a free endpoint that meets neither a shoreline nor "
            "another open line");
      if (matches > 1)
        result.warnings.push_back("endpoint of open line '" + pieces[pi].id +
                                  "' coincides with more than one other line");
    }
  }

  // Build the arrangement: pieces plus shoreline arcs between consecutive
  // cuts. Loops are the bounded faces, traced with the interior on the left.
  Arrangement arr;
  for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
    Edge e;
    e.is_piece = true;
    e.piece_idx = static_cast<int>(pi);
    e.source_id = pieces[pi].id;
    e.pts = pieces[pi].pts;
    e.u = arr.vertex_for(e.pts.front());
    e.v = arr.vertex_for(e.pts.back());
    e.pts.front() = arr.vertices[e.u];
    e.pts.back() = arr.vertices[e.v];
    arr.edges.push_back(std::move(e));
  }
  for (std::size_t ci = 0; ci < shorelines.size(); ++ci) {
    if (cuts[ci].empty()) continue;
    const Contour& c = shorelines[ci];
    auto& list = cuts[ci];
    std::sort(list.begin(), list.end(), [](const Cut& a, const Cut& b) {
      if (a.param != b.param) return a.param < b.param;
      if (a.piece != b.piece) return a.piece < b.piece;
      return a.end < b.end;
    });
    const double nseg =
        static_cast<double>(c.closed ? c.points.size() : c.points.size() - 1);
    const std::size_t count = list.size();
    const std::size_t arc_count = c.closed ? count : count - 1;
    for (std::size_t pos = 0; pos < arc_count; ++pos) {
      const std::size_t next_pos = (pos + 1) % count;
      const Cut& from = list[pos];
      const Cut& to = list[next_pos];
      const GeoPoint from_pt = from.end == 0 ? pieces[from.piece].pts.front()
                                             : pieces[from.piece].pts.back();
      const GeoPoint to_pt = to.end == 0 ? pieces[to.piece].pts.front()
                                         : pieces[to.piece].pts.back();
      Edge e;
      e.is_piece = false;
      e.source_id = c.id;
      e.u = arr.vertex_for(from_pt);
      e.v = arr.vertex_for(to_pt);
      e.pts.push_back(arr.vertices[e.u]);
      double span = to.param - from.param;
      if (c.closed && next_pos <= pos) span += nseg;
      for (double step = std::floor(from.param) + 1.0;
           step - from.param < span - kSnapTol; step += 1.0) {
        if (step - from.param <= kSnapTol) continue;
        std::size_t idx = static_cast<std::size_t>(step);
        if (c.closed) idx %= c.points.size();
        e.pts.push_back(c.points[idx]);
      }
      e.pts.push_back(arr.vertices[e.v]);
      double len = 0.0;
      for (std::size_t i = 0; i + 1 < e.pts.size(); ++i)
        len += std::abs(e.pts[i + 1].lon - e.pts[i].lon) +
               std::abs(e.pts[i + 1].lat - e.pts[i].lat);
      if (len < 1e-12) continue;  // degenerate tie between cuts
      arr.edges.push_back(std::move(e));
    }
  }

  // A snapped piece can land exactly on top of a shoreline arc; duplicate
  // geometry breaks the angular order, so keep only one copy (the piece).
  {
    std::vector<Edge> unique_edges;
    for (std::size_t ei = 0; ei < arr.edges.size(); ++ei) {
      const Edge& e = arr.edges[ei];
      bool duplicate = false;
      for (const Edge& kept : unique_edges) {
        if (!(kept.u == e.u && kept.v == e.v) &&
            !(kept.u == e.v && kept.v == e.u))
          continue;
        if (kept.pts.size() != e.pts.size()) continue;
        bool same_fwd = true, same_rev = true;
        for (std::size_t i = 0; i < e.pts.size(); ++i) {
          same_fwd = same_fwd && points_coincide(e.pts[i], kept.pts[i]);
          same_rev = same_rev &&
                     points_coincide(e.pts[i], kept.pts[e.pts.size() - 1 - i]);
        }
        if (same_fwd || same_rev) {
          duplicate = true;
          result.warnings.push_back(
              "edge of '" + e.source_id + "' coincides with '" +
              kept.source_id + "'; merged for loop stitching");
          break;
        }
      }
      if (!duplicate) unique_edges.push_back(e);
    }
    arr.edges = std::move(unique_edges);
  }

  // Angular order of outgoing directed edges per vertex.
  const std::size_t ecount = arr.edges.size();
  std::vector<std::vector<int>> star(arr.vertices.size());
  for (std::size_t ei = 0; ei < ecount; ++ei) {
    star[arr.edges[ei].u].push_back(static_cast<int>(ei) * 2);
    star[arr.edges[ei].v].push_back(static_cast<int>(ei) * 2 + 1);
  }
  std::vector<double> angle(ecount * 2);
  for (std::size_t ei = 0; ei < ecount; ++ei) {
    angle[ei * 2] = outgoing_angle(arr, static_cast<int>(ei), 0);
    angle[ei * 2 + 1] = outgoing_angle(arr, static_cast<int>(ei), 1);
  }
  for (auto& out : star) {
    std::sort(out.begin(), out.end(), [&](int a, int b) {
      if (angle[a] != angle[b]) return angle[a] < angle[b];
      const bool pa = arr.edges[a / 2].is_piece;
      const bool pb = arr.edges[b / 2].is_piece;
      if (pa != pb) return pa;
      return a < b;
    });
  }
  // next(d) = predecessor of twin(d) in counterclockwise order around the
  // head vertex; faces come out with their interior on the left.
  auto next_directed = [&](int d) {
    const int twin = d ^ 1;
    const Edge& e = arr.edges[d / 2];
    const auto& out = star[head_of(e, d % 2)];
    const auto it = std::find(out.begin(), out.end(), twin);
    const std::size_t at = static_cast<std::size_t>(it - out.begin());
    return out[(at + out.size() - 1) % out.size()];
  };

  std::vector<char> visited(ecount * 2, 0);
  std::vector<BoundaryLoop> faces;
  for (std::size_t start = 0; start < ecount * 2; ++start) {
    if (visited[start]) continue;
    std::vector<int> cycle;
    int d = static_cast<int>(start);
    for (std::size_t guard = 0; guard <= ecount * 2; ++guard) {
      if (guard == ecount * 2)
        throw unclosable_domain_error("face walk exceeded the edge bound");
      visited[d] = 1;
      cycle.push_back(d);
      d = next_directed(d);
      if (d == static_cast<int>(start)) break;
    }
    // Start each face at its first open-boundary piece, if it has one.
    std::size_t first_piece = cycle.size();
    for (std::size_t i = 0; i < cycle.size(); ++i)
      if (arr.edges[cycle[i] / 2].is_piece) {
        first_piece = i;
        break;
      }
    if (first_piece == cycle.size()) continue;  // shoreline-only face
    std::rotate(cycle.begin(), cycle.begin() + first_piece, cycle.end());

    BoundaryLoop loop;
    for (int dd : cycle) {
      const Edge& e = arr.edges[dd / 2];
      BoundarySegment seg;
      seg.origin =
          e.is_piece ? SegmentOrigin::open_boundary : SegmentOrigin::shoreline;
      seg.source_id = e.source_id;
      seg.points = e.pts;
      if (dd % 2 == 1) std::reverse(seg.points.begin(), seg.points.end());
      loop.segments.push_back(std::move(seg));
    }
    loop.closed = true;
    loop.island = false;
    if (polygon_area(loop.vertices()) > 0.0) faces.push_back(std::move(loop));
  }

  if (!pieces.empty() && faces.empty())
    throw unclosable_domain_error(
        "open lines and shorelines do not enclose any region");
  for (const BoundaryLoop& loop : faces) {
    if (!loop_is_closed(loop))
      throw unclosable_domain_error("stitched loop failed the closure check");
    result.loops.push_back(loop);
  }
  const std::size_t stitched = result.loops.size();

  // Uncut closed contours become island loops; uncut open contours are
  // dropped with a warning.
  std::vector<BoundaryLoop> candidates;
  for (std::size_t ci = 0; ci < shorelines.size(); ++ci) {
    if (!cuts[ci].empty()) continue;
    const Contour& c = shorelines[ci];
    if (!c.closed) {
      result.warnings.push_back("open contour '" + c.id +
                                "' is not connected to the domain; dropped");
      continue;
    }
    BoundarySegment seg;
    seg.origin = SegmentOrigin::shoreline;
    seg.source_id = c.id;
    seg.points = c.points;
    seg.points.push_back(c.points.front());
    BoundaryLoop loop;
    loop.segments.push_back(std::move(seg));
    loop.closed = true;
    loop.island = true;
    candidates.push_back(std::move(loop));
  }

  if (stitched > 0) {
    std::vector<std::vector<GeoPoint>> outers;
    outers.reserve(stitched);
    for (std::size_t i = 0; i < stitched; ++i)
      outers.push_back(result.loops[i].vertices());
    for (BoundaryLoop& cand : candidates) {
      const GeoPoint probe = cand.segments.front().points.front();
      const bool inside =
          std::any_of(outers.begin(), outers.end(),
                      [&](const std::vector<GeoPoint>& poly) {
                        return point_in_polygon(probe, poly);
                      });
      if (inside)
        result.loops.push_back(std::move(cand));
      else
        result.warnings.push_back("island contour '" +
                                  cand.segments.front().source_id +
                                  "' lies outside every stitched loop; dropped");
    }
  } else if (!candidates.empty()) {
    // No open boundaries: the largest closed contour bounds the domain.
    std::size_t largest = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double a = std::abs(signed_area(candidates[i]));
      if (a > best) {
        best = a;
        largest = i;
      }
    }
    candidates[largest].island = false;
    for (auto& cand : candidates) result.loops.push_back(std::move(cand));
  }

  // Outer loops counterclockwise, islands clockwise.
  for (BoundaryLoop& loop : result.loops) {
    const double area = signed_area(loop);
    if ((!loop.island && area < 0.0) || (loop.island && area > 0.0))
      reverse_loop(loop);
  }
  return result;
}

}  // namespace coastpca
