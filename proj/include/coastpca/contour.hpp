#ifndef COASTPCA_CONTOUR_HPP
#define COASTPCA_CONTOUR_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "coastpca/geodesy.hpp"
#include "coastpca/matrix.hpp"

namespace coastpca {

/// A piecewise-linear lon/lat curve. Closed contours do not repeat the
/// first point; closure is implicit.
struct Contour {
  std::string id;
  bool closed = false;
  std::vector<GeoPoint> points;
};

/// Throws invalid_argument_error when a contour violates its invariants
/// (point count, finite coordinates, latitude range, explicit closure).
void validate_contour(const Contour& c);

/// Stride-1 overlapping window layout over a contour's points. Closed
/// contours get one partition per point (wrapping); open contours clamp.
struct PartitionLayout {
  int partition_length = 0;
  std::vector<int> starts;
  bool wraparound = false;
  int point_count = 0;
};

struct ContourPartitions {
  Matrix x;  // p x M, column j = x coordinates of window j
  Matrix y;  // p x M
  PartitionLayout layout;
};

/// Splits a contour into overlapping windows of p points, x and y handled
/// separately. Throws too_small_error when the contour has fewer than p
/// points.
ContourPartitions partition_contour(const Contour& c, int p);

/// Reassembles a point list by averaging each point's value across all
/// windows covering it (summed in ascending window order).
std::vector<GeoPoint> assemble_contour(const Matrix& recon_x,
                                       const Matrix& recon_y,
                                       const PartitionLayout& layout);

/// Captured-variance diagnostics from one simplification run.
struct ContourSimplifyStats {
  double variance_fraction_x = 0.0;
  double variance_fraction_y = 0.0;
};

/// Full pipeline for one contour: partition, center, covariance,
/// eigendecompose, modes, reconstruct with k modes, reassemble. Output has
/// the same point count, closed flag and id.
Contour simplify_contour(const Contour& c, int p, int k,
                         ContourSimplifyStats* stats = nullptr);

struct ContourSetResult {
  std::vector<Contour> contours;
  std::vector<ContourSimplifyStats> stats;  // parallel to contours
  std::vector<std::string> dropped_ids;     // fewer points than p
  std::vector<std::string> failed_ids;      // per-contour failures
};

/// Simplifies every contour with at least p points and drops the rest
/// (island filtering). Per-contour failures are collected, not fatal.
/// Relative order is preserved.
ContourSetResult simplify_contour_set(const std::vector<Contour>& contours,
                                      int p, int k, int workers = 1);

}  // namespace coastpca

#endif
