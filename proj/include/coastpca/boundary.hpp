#ifndef COASTPCA_BOUNDARY_HPP
#define COASTPCA_BOUNDARY_HPP

#include <string>
#include <vector>

#include "coastpca/contour.hpp"
#include "coastpca/geodesy.hpp"

namespace coastpca {

/// A named open-boundary polyline (sampled loxodrome or blend).
struct OpenLine {
  std::string id;
  std::vector<GeoPoint> points;
};

enum class SegmentOrigin { shoreline, open_boundary };

/// One piece of a boundary loop, tagged with where it came from.
struct BoundarySegment {
  SegmentOrigin origin = SegmentOrigin::shoreline;
  std::string source_id;  // contour id or open line id
  std::vector<GeoPoint> points;
};

struct BoundaryLoop {
  std::vector<BoundarySegment> segments;
  bool closed = true;
  bool island = false;

  /// Loop vertices with junction duplicates and the implicit closing
  /// point removed.
  std::vector<GeoPoint> vertices() const;
};

/// Shoelace area of the loop in the lon/lat plane; positive when
/// counterclockwise.
double signed_area(const BoundaryLoop& loop);

/// Verifies that consecutive segment endpoints coincide within 1e-9
/// degrees and the last point meets the first.
bool loop_is_closed(const BoundaryLoop& loop, double tol = 1e-9);

struct TrimResult {
  std::vector<BoundaryLoop> loops;
  std::vector<std::string> warnings;
};

/// Cuts each open line at its first and last shoreline intersection,
/// splits the shorelines there, and stitches closed loops by walking
/// alternately along shoreline and open-line pieces. Lines with no
/// intersection may instead join other lines endpoint-to-endpoint.
/// Uncut closed contours inside a stitched loop are kept as island loops.
/// Stitched loops come out counterclockwise, islands clockwise.
TrimResult trim_to_domain(const std::vector<Contour>& shorelines,
                          const std::vector<OpenLine>& open_lines);

}  // namespace coastpca

#endif
