#ifndef COASTPCA_GEODESY_HPP
#define COASTPCA_GEODESY_HPP

#include <vector>

namespace coastpca {

struct GeoPoint {
  double lon = 0.0;  // degrees east
  double lat = 0.0;  // degrees north

  friend bool operator==(const GeoPoint& a, const GeoPoint& b) {
    return a.lon == b.lon && a.lat == b.lat;
  }
};

/// Mercator abscissa in radians.
double mercator_x(double lon_deg);
/// Mercator ordinate ln tan(pi/4 + lat/2) in radians; diverges at the poles.
double mercator_y(double lat_deg);
/// Inverse of mercator_y.
double lat_from_mercator_y(double y);

/// Central angle between two points, in degrees.
double great_circle_deg(const GeoPoint& a, const GeoPoint& b);

/// A constant-bearing line. Bearing is degrees clockwise from north;
/// westward bearings are negative. The line runs from start until it
/// reaches a latitude or longitude limit.
struct LoxodromeSpec {
  enum class Stop { lat_limit, lon_limit };

  GeoPoint start;
  double bearing_deg = 0.0;
  Stop stop_kind = Stop::lat_limit;
  double stop_value = 0.0;
  int samples = 200;
};

/// Samples the loxodrome uniformly in the Mercator ordinate (lat limit) or
/// abscissa (lon limit). First point is the start; the last lies exactly on
/// the stop limit. Throws invalid_argument_error when the stop is not on
/// the forward side of the bearing (or unreachable), and
/// invalid_argument_error when any latitude passes beyond 89 degrees.
std::vector<GeoPoint> sample_loxodrome(const LoxodromeSpec& spec);

/// Pointwise convex combination (1-t) a(t) + t b(t) over the shared
/// normalized parameter. Inputs must have equal sample counts.
std::vector<GeoPoint> blend_loxodromes(const std::vector<GeoPoint>& a,
                                       const std::vector<GeoPoint>& b);

/// Builds one open-boundary polyline from one or two loxodrome specs.
/// With two, the second is sampled, reversed, and blended with the first,
/// so the composite runs from the first spec's start to the second's.
std::vector<GeoPoint> compose_open_boundary(
    const std::vector<LoxodromeSpec>& specs);

}  // namespace coastpca

#endif
