#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coastpca/errors.hpp"
#include "coastpca/geodesy.hpp"

using namespace coastpca;

namespace {

// Largest deviation of the Mercator-mapped samples from the least-squares
// line through them. Centered fit, so vertical lines stay stable.
double mercator_line_residual(const std::vector<GeoPoint>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> xs(n), ys(n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = mercator_x(pts[i].lon);
    ys[i] = mercator_y(pts[i].lat);
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0, vxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    vx += (xs[i] - mx) * (xs[i] - mx);
    vy += (ys[i] - my) * (ys[i] - my);
    vxy += (xs[i] - mx) * (ys[i] - my);
  }
  double worst = 0.0;
  if (vx <= 1e-24 * std::max(vy, 1e-30)) {
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(xs[i] - mx));
    return worst;
  }
  const double slope = vxy / vx;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(my + slope * (xs[i] - mx) - ys[i]) /
                                std::sqrt(1.0 + slope * slope));
  return worst;
}

}  // namespace

TEST_CASE("bearing 0 follows the meridian exactly") {
  LoxodromeSpec spec;
  spec.start = {5.45, 62.0};
  spec.bearing_deg = 0.0;
  spec.stop_kind = LoxodromeSpec::Stop::lat_limit;
  spec.stop_value = 70.0;
  spec.samples = 50;
  auto pts = sample_loxodrome(spec);
  REQUIRE(pts.size() == 50);
  for (const GeoPoint& pt : pts) CHECK(pt.lon == 5.45);
  CHECK(pts.front().lat == 62.0);
  CHECK(pts.back().lat == 70.0);
  for (std::size_t i = 1; i < pts.size(); ++i)
    CHECK(pts[i].lat > pts[i - 1].lat);
}

TEST_CASE("bearing 90 follows the parallel exactly") {
  LoxodromeSpec spec;
  spec.start = {-10.0, 56.5};
  spec.bearing_deg = 90.0;
  spec.stop_kind = LoxodromeSpec::Stop::lon_limit;
  spec.stop_value = 4.0;
  spec.samples = 20;
  auto pts = sample_loxodrome(spec);
  for (const GeoPoint& pt : pts) CHECK(pt.lat == 56.5);
  CHECK(pts.front().lon == -10.0);
  CHECK(pts.back().lon == 4.0);
}

TEST_CASE("bearing 45 endpoint matches the Mercator rhumb formula") {
  LoxodromeSpec spec;
  spec.start = {0.0, 0.0};
  spec.bearing_deg = 45.0;
  spec.stop_kind = LoxodromeSpec::Stop::lat_limit;
  spec.stop_value = 10.0;
  spec.samples = 120;
  auto pts = sample_loxodrome(spec);
  // Independent evaluation (tests/oracle/reference_pca.py):
  // (180/pi) * ln tan(pi/4 + 5 deg) * tan(45 deg) = 10.051159656630.
  CHECK(std::abs(pts.back().lon - 10.05115965663) <= 1e-3);
  CHECK(pts.back().lat == 10.0);
  CHECK(mercator_line_residual(pts) <= 1e-9);
}

TEST_CASE("sampled loxodromes are straight lines in Mercator coordinates") {
  LoxodromeSpec spec;
  spec.start = {-15.0, 57.0};
  spec.bearing_deg = -20.0;
  spec.stop_kind = LoxodromeSpec::Stop::lat_limit;
  spec.stop_value = 70.0;
  spec.samples = 200;
  auto pts = sample_loxodrome(spec);
  CHECK(pts.front().lon == -15.0);
  CHECK(pts.front().lat == 57.0);
  CHECK(pts.back().lat == 70.0);
  // Westward bearing moves west.
  CHECK(pts.back().lon < pts.front().lon);
  CHECK(mercator_line_residual(pts) <= 1e-9);
}

TEST_CASE("longitude-limit stop with a diagonal bearing") {
  LoxodromeSpec spec;
  spec.start = {0.0, 0.0};
  spec.bearing_deg = 45.0;
  spec.stop_kind = LoxodromeSpec::Stop::lon_limit;
  spec.stop_value = 10.0;
  spec.samples = 80;
  auto pts = sample_loxodrome(spec);
  CHECK(pts.back().lon == 10.0);
  const double expected_lat =
      lat_from_mercator_y(10.0 * std::numbers::pi / 180.0);
  CHECK(pts.back().lat == doctest::Approx(expected_lat).epsilon(1e-12));
  CHECK(mercator_line_residual(pts) <= 1e-9);
}

TEST_CASE("sample_loxodrome rejects bad specs") {
  LoxodromeSpec spec;
  spec.start = {0.0, 50.0};
  spec.bearing_deg = 0.0;
  spec.stop_kind = LoxodromeSpec::Stop::lat_limit;
  spec.stop_value = 40.0;  // behind a due-north bearing
  CHECK_THROWS_AS(sample_loxodrome(spec), invalid_argument_error);

  spec.bearing_deg = 90.0;  // due east never reaches a latitude limit
  spec.stop_value = 60.0;
  CHECK_THROWS_AS(sample_loxodrome(spec), invalid_argument_error);

  spec.bearing_deg = 0.0;
  spec.stop_value = 89.5;  // pole proximity
  CHECK_THROWS_AS(sample_loxodrome(spec), range_error);

  spec.stop_value = 60.0;
  spec.samples = 1;
  CHECK_THROWS_AS(sample_loxodrome(spec), invalid_argument_error);

  LoxodromeSpec lon_spec;
  lon_spec.start = {0.0, 0.0};
  lon_spec.bearing_deg = 180.0;  // due south never reaches a longitude limit
  lon_spec.stop_kind = LoxodromeSpec::Stop::lon_limit;
  lon_spec.stop_value = 5.0;
  CHECK_THROWS_AS(sample_loxodrome(lon_spec), invalid_argument_error);
}

TEST_CASE("bearings normalize into (-180, 180]") {
  // -185 west of north is the same as +175.
  LoxodromeSpec a;
  a.start = {5.45, 62.0};
  a.bearing_deg = -185.0;
  a.stop_kind = LoxodromeSpec::Stop::lat_limit;
  a.stop_value = 55.0;
  a.samples = 30;
  LoxodromeSpec b = a;
  b.bearing_deg = 175.0;
  auto pa = sample_loxodrome(a);
  auto pb = sample_loxodrome(b);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].lon == pb[i].lon);
    CHECK(pa[i].lat == pb[i].lat);
  }
  CHECK(pa.back().lat == 55.0);
  CHECK(pa.back().lon > 5.45);  // 175 leans slightly east going south
}

TEST_CASE("blend of identical polylines is the polyline") {
  std::vector<GeoPoint> a{{0, 0}, {1, 1}, {2, 2}};
  auto blended = blend_loxodromes(a, a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(blended[i].lon == a[i].lon);
    CHECK(blended[i].lat == a[i].lat);
  }
}

TEST_CASE("blend of two meridians interpolates longitude linearly") {
  const int n = 11;
  std::vector<GeoPoint> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double lat = 50.0 + i;
    a[i] = {0.0, lat};
    b[i] = {10.0, lat};
  }
  auto blended = blend_loxodromes(a, b);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    CHECK(blended[i].lon == doctest::Approx(10.0 * t).epsilon(1e-15));
    CHECK(blended[i].lat == doctest::Approx(a[i].lat).epsilon(1e-15));
  }
}

TEST_CASE("blend rejects mismatched sample counts") {
  std::vector<GeoPoint> a{{0, 0}, {1, 1}};
  std::vector<GeoPoint> b{{0, 0}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS(blend_loxodromes(a, b), invalid_argument_error);
}

TEST_CASE("composed boundary runs between the two loxodrome starts") {
  // The dashed-line construction: both loxodromes head for 70 N and the
  // composite's end points are the loxodrome starting points.
  LoxodromeSpec first;
  first.start = {-15.0, 57.0};
  first.bearing_deg = -20.0;
  first.stop_kind = LoxodromeSpec::Stop::lat_limit;
  first.stop_value = 70.0;
  first.samples = 200;
  LoxodromeSpec second;
  second.start = {5.45, 62.0};
  second.bearing_deg = 0.0;
  second.stop_kind = LoxodromeSpec::Stop::lat_limit;
  second.stop_value = 70.0;
  second.samples = 200;

  auto composite = compose_open_boundary({first, second});
  REQUIRE(composite.size() == 200);
  CHECK(std::abs(composite.front().lon - -15.0) <= 1e-12);
  CHECK(std::abs(composite.front().lat - 57.0) <= 1e-12);
  CHECK(std::abs(composite.back().lon - 5.45) <= 1e-12);
  CHECK(std::abs(composite.back().lat - 62.0) <= 1e-12);
  // The arch rises above both starts before descending.
  double peak = 0.0;
  for (const GeoPoint& pt : composite) peak = std::max(peak, pt.lat);
  CHECK(peak > 62.0);
  CHECK(peak <= 70.0);

  CHECK_THROWS_AS(compose_open_boundary({}), invalid_argument_error);
  CHECK_THROWS_AS(compose_open_boundary({first, second, first}),
                  invalid_argument_error);
}

TEST_CASE("great_circle_deg basics") {
  CHECK(great_circle_deg({0, 0}, {0, 0}) == 0.0);
  CHECK(great_circle_deg({10, 0}, {10.5, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(great_circle_deg({0, 10}, {0, 20}) == doctest::Approx(10.0).epsilon(1e-12));
  // Symmetry.
  CHECK(great_circle_deg({3, 4}, {7, 9}) ==
        doctest::Approx(great_circle_deg({7, 9}, {3, 4})).epsilon(1e-15));
}
