#include "coastpca/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coastpca/errors.hpp"

namespace coastpca {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kMaxLat = 89.0;

// Normalizes a bearing into (-180, 180].
double normalize_bearing(double bearing_deg) {
  double b = std::fmod(bearing_deg, 360.0);
  if (b <= -180.0) b += 360.0;
  if (b > 180.0) b -= 360.0;
  return b;
}

void check_lat_range(double lat, const char* what) {
  if (!(std::abs(lat) <= kMaxLat))
    throw range_error(std::string("sample_loxodrome: ") + what + " latitude " +
                      std::to_string(lat) + " is within 1 degree of a pole");
}

}  // namespace

double mercator_x(double lon_deg) { return lon_deg * kDegToRad; }

double mercator_y(double lat_deg) {
  return std::log(std::tan(std::numbers::pi / 4.0 + lat_deg * kDegToRad / 2.0));
}

double lat_from_mercator_y(double y) {
  return (2.0 * std::atan(std::exp(y)) - std::numbers::pi / 2.0) * kRadToDeg;
}

double great_circle_deg(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlam = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlam / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * std::asin(std::min(1.0, std::sqrt(h))) * kRadToDeg;
}

std::vector<GeoPoint> sample_loxodrome(const LoxodromeSpec& spec) {
  if (spec.samples < 2)
    throw invalid_argument_error("sample_loxodrome: need at least 2 samples");
  if (!(std::abs(spec.start.lat) < 90.0) || !std::isfinite(spec.start.lon))
    throw invalid_argument_error("sample_loxodrome: invalid start point");
  check_lat_range(spec.start.lat, "start");

  const double bearing = normalize_bearing(spec.bearing_deg);
  const int s = spec.samples;
  std::vector<GeoPoint> out(static_cast<std::size_t>(s));

  // Cardinal bearings follow a meridian or parallel exactly.
  if (spec.stop_kind == LoxodromeSpec::Stop::lat_limit) {
    check_lat_range(spec.stop_value, "stop");
    if (bearing == 90.0 || bearing == -90.0)
      throw invalid_argument_error(
          "sample_loxodrome: a due-east or due-west bearing never reaches a "
          "latitude limit");
    const double dir = std::cos(bearing * kDegToRad);
    const double dlat = spec.stop_value - spec.start.lat;
    if (dlat == 0.0 || (dlat > 0.0) != (dir > 0.0))
      throw invalid_argument_error(
          "sample_loxodrome: latitude limit " + std::to_string(spec.stop_value) +
          " is not on the forward side of bearing " + std::to_string(bearing));
    if (bearing == 0.0 || bearing == 180.0) {
      // Meridian: constant longitude, uniform Mercator ordinate.
      const double y0 = mercator_y(spec.start.lat);
      const double y1 = mercator_y(spec.stop_value);
      for (int i = 0; i < s; ++i) {
        const double t = static_cast<double>(i) / (s - 1);
        out[i].lon = spec.start.lon;
        out[i].lat = i == 0 ? spec.start.lat
                   : i == s - 1 ? spec.stop_value
                                : lat_from_mercator_y(y0 + t * (y1 - y0));
      }
      return out;
    }
    const double y0 = mercator_y(spec.start.lat);
    const double y1 = mercator_y(spec.stop_value);
    const double x0 = mercator_x(spec.start.lon);
    const double slope_inv = std::tan(bearing * kDegToRad);  // dx/dy
    for (int i = 0; i < s; ++i) {
      const double t = static_cast<double>(i) / (s - 1);
      const double y = y0 + t * (y1 - y0);
      out[i].lon = (x0 + (y - y0) * slope_inv) * kRadToDeg;
      out[i].lat = i == 0 ? spec.start.lat
                 : i == s - 1 ? spec.stop_value
                              : lat_from_mercator_y(y);
    }
    out[0].lon = spec.start.lon;
    return out;
  }

  // Longitude limit.
  if (bearing == 0.0 || bearing == 180.0)
    throw invalid_argument_error(
        "sample_loxodrome: a due-north or due-south bearing never reaches a "
        "longitude limit");
  const double dir = std::sin(bearing * kDegToRad);
  const double dlon = spec.stop_value - spec.start.lon;
  if (dlon == 0.0 || (dlon > 0.0) != (dir > 0.0))
    throw invalid_argument_error(
        "sample_loxodrome: longitude limit " + std::to_string(spec.stop_value) +
        " is not on the forward side of bearing " + std::to_string(bearing));
  if (bearing == 90.0 || bearing == -90.0) {
    // Parallel: constant latitude, uniform longitude.
    for (int i = 0; i < s; ++i) {
      const double t = static_cast<double>(i) / (s - 1);
      out[i].lon = i == s - 1 ? spec.stop_value
                              : spec.start.lon + t * dlon;
      out[i].lat = spec.start.lat;
    }
    return out;
  }
  const double x0 = mercator_x(spec.start.lon);
  const double x1 = mercator_x(spec.stop_value);
  const double y0 = mercator_y(spec.start.lat);
  const double slope = 1.0 / std::tan(bearing * kDegToRad);  // dy/dx
  const double y_end = y0 + (x1 - x0) * slope;
  check_lat_range(lat_from_mercator_y(y_end), "end");
  for (int i = 0; i < s; ++i) {
    const double t = static_cast<double>(i) / (s - 1);
    const double x = x0 + t * (x1 - x0);
    out[i].lon = i == 0 ? spec.start.lon
               : i == s - 1 ? spec.stop_value
                            : x * kRadToDeg;
    out[i].lat = i == 0 ? spec.start.lat : lat_from_mercator_y(y0 + (x - x0) * slope);
  }
  return out;
}

std::vector<GeoPoint> blend_loxodromes(const std::vector<GeoPoint>& a,
                                       const std::vector<GeoPoint>& b) {
  if (a.size() != b.size())
    throw invalid_argument_error(
        "blend_loxodromes: sample counts differ (" + std::to_string(a.size()) +
        " vs " + std::to_string(b.size()) + ")");
  if (a.size() < 2)
    throw invalid_argument_error("blend_loxodromes: need at least 2 samples");

  const std::size_t n = a.size();
  std::vector<GeoPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i].lon = (1.0 - t) * a[i].lon + t * b[i].lon;
    out[i].lat = (1.0 - t) * a[i].lat + t * b[i].lat;
  }
  return out;
}

std::vector<GeoPoint> compose_open_boundary(
    const std::vector<LoxodromeSpec>& specs) {
  if (specs.empty() || specs.size() > 2)
    throw invalid_argument_error(
        "compose_open_boundary: expected one or two loxodromes, got " +
        std::to_string(specs.size()));
  if (specs.size() == 1) return sample_loxodrome(specs[0]);
  if (specs[0].samples != specs[1].samples)
    throw invalid_argument_error(
        "compose_open_boundary: both loxodromes must use the same sample count");
  std::vector<GeoPoint> a = sample_loxodrome(specs[0]);
  std::vector<GeoPoint> b = sample_loxodrome(specs[1]);
  std::reverse(b.begin(), b.end());
  return blend_loxodromes(a, b);
}

}  // namespace coastpca
