#include "coastpca/contour.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "coastpca/errors.hpp"
#include "coastpca/parallel.hpp"
#include "coastpca/pca.hpp"

namespace coastpca {

void validate_contour(const Contour& c) {
  const std::size_t min_points = c.closed ? 3 : 2;
  if (c.points.size() < min_points)
    throw invalid_argument_error("contour '" + c.id + "': needs at least " +
                                 std::to_string(min_points) + " points, has " +
                                 std::to_string(c.points.size()));
  for (const GeoPoint& pt : c.points) {
    if (!std::isfinite(pt.lon) || !std::isfinite(pt.lat))
      throw invalid_argument_error("contour '" + c.id +
                                   "': non-finite coordinate");
    if (pt.lat < -90.0 || pt.lat > 90.0)
      throw invalid_argument_error("contour '" + c.id +
                                   "': latitude out of [-90, 90]");
  }
  if (c.closed && c.points.front() == c.points.back())
    throw invalid_argument_error(
        "contour '" + c.id +
        "': closed contours must not repeat the first point");
}

ContourPartitions partition_contour(const Contour& c, int p) {
  if (p < 2)
    throw invalid_argument_error("partition_contour: partition length " +
                                 std::to_string(p) + " must be at least 2");
  validate_contour(c);
  const int n = static_cast<int>(c.points.size());
  if (n < p)
    throw too_small_error("contour '" + c.id + "': " + std::to_string(n) +
                          " points is fewer than the partition length " +
                          std::to_string(p));

  ContourPartitions out;
  out.layout.partition_length = p;
  out.layout.wraparound = c.closed;
  out.layout.point_count = n;
  const int m = c.closed ? n : n - p + 1;
  out.layout.starts.resize(m);
  out.x = Matrix(static_cast<std::size_t>(p), static_cast<std::size_t>(m));
  out.y = Matrix(static_cast<std::size_t>(p), static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    out.layout.starts[j] = j;
    for (int i = 0; i < p; ++i) {
      const int idx = c.closed ? (j + i) % n : j + i;
      out.x(i, j) = c.points[idx].lon;
      out.y(i, j) = c.points[idx].lat;
    }
  }
  return out;
}

std::vector<GeoPoint> assemble_contour(const Matrix& recon_x,
                                       const Matrix& recon_y,
                                       const PartitionLayout& layout) {
  const int p = layout.partition_length;
  const int m = static_cast<int>(layout.starts.size());
  const int n = layout.point_count;
  if (recon_x.rows() != static_cast<std::size_t>(p) ||
      recon_x.cols() != static_cast<std::size_t>(m) ||
      recon_y.rows() != recon_x.rows() || recon_y.cols() != recon_x.cols())
    throw invalid_argument_error(
        "assemble_contour: matrices do not conform to the layout");

  std::vector<double> sum_x(n, 0.0), sum_y(n, 0.0);
  std::vector<int> votes(n, 0);
  for (int j = 0; j < m; ++j) {
    const int start = layout.starts[j];
    for (int i = 0; i < p; ++i) {
      const int idx = layout.wraparound ? (start + i) % n : start + i;
      sum_x[idx] += recon_x(i, j);
      sum_y[idx] += recon_y(i, j);
      votes[idx] += 1;
    }
  }
  std::vector<GeoPoint> points(n);
  for (int i = 0; i < n; ++i) {
    if (votes[i] == 0)
      throw invalid_argument_error("assemble_contour: point " +
                                   std::to_string(i) +
                                   " is covered by no partition");
    points[i].lon = sum_x[i] / votes[i];
    points[i].lat = sum_y[i] / votes[i];
  }
  return points;
}

namespace {

// One coordinate axis through the PCA chain.
Matrix simplify_axis(const Matrix& windows, std::size_t k, double* varfrac) {
  SampleMatrix s = center_columns(windows);
  Matrix c = covariance(s);
  EigenSystem e = eigendecompose_symmetric(c);
  ModeSet phi = compute_modes(s, e);
  if (varfrac) *varfrac = variance_fraction(e, k);
  return reconstruct(s, e, phi, k);
}

}  // namespace

Contour simplify_contour(const Contour& c, int p, int k,
                         ContourSimplifyStats* stats) {
  if (k < 1 || k > p)
    throw invalid_argument_error("simplify_contour: mode count " +
                                 std::to_string(k) + " must be in [1, " +
                                 std::to_string(p) + "]");
  ContourPartitions parts = partition_contour(c, p);
  double vx = 0.0, vy = 0.0;
  const Matrix rx = simplify_axis(parts.x, static_cast<std::size_t>(k), &vx);
  const Matrix ry = simplify_axis(parts.y, static_cast<std::size_t>(k), &vy);
  if (stats) {
    stats->variance_fraction_x = vx;
    stats->variance_fraction_y = vy;
  }
  Contour out;
  out.id = c.id;
  out.closed = c.closed;
  out.points = assemble_contour(rx, ry, parts.layout);
  return out;
}

ContourSetResult simplify_contour_set(const std::vector<Contour>& contours,
                                      int p, int k, int workers) {
  if (p < 2)
    throw invalid_argument_error("simplify_contour_set: partition length " +
                                 std::to_string(p) + " must be at least 2");
  if (k < 1 || k > p)
    throw invalid_argument_error("simplify_contour_set: mode count " +
                                 std::to_string(k) + " must be in [1, " +
                                 std::to_string(p) + "]");

  struct Slot {
    std::optional<Contour> contour;
    ContourSimplifyStats stats;
    std::string failure;
  };
  std::vector<Slot> slots(contours.size());

  parallel_for(contours.size(), workers, [&](std::size_t i) {
    const Contour& c = contours[i];
    if (static_cast<int>(c.points.size()) < p) return;  // dropped below
    try {
      Slot& slot = slots[i];
      slot.contour = simplify_contour(c, p, k, &slot.stats);
    } catch (const error& e) {
      slots[i].failure = e.what();
    }
  });

  ContourSetResult result;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (static_cast<int>(contours[i].points.size()) < p) {
      result.dropped_ids.push_back(contours[i].id);
    } else if (slots[i].contour) {
      result.contours.push_back(std::move(*slots[i].contour));
      result.stats.push_back(slots[i].stats);
    } else {
      result.failed_ids.push_back(contours[i].id);
    }
  }
  return result;
}

}  // namespace coastpca
