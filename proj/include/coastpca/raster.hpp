#ifndef COASTPCA_RASTER_HPP
#define COASTPCA_RASTER_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "coastpca/matrix.hpp"

namespace coastpca {

/// Rectangular elevation grid with ESRI-style georeferencing. Values are
/// stored row-major, top row first (file order).
struct RasterGrid {
  int nrows = 0;
  int ncols = 0;
  double xll = 0.0;
  double yll = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> values;

  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * ncols + c]; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * ncols + c]; }
};

void validate_raster(const RasterGrid& g);

/// Stride-1 overlapping p x q block layout; anchors are top-left corners in
/// ascending (row, col) order.
struct BlockLayout {
  int block_rows = 0;
  int block_cols = 0;
  int nrows = 0;
  int ncols = 0;
  std::vector<std::pair<int, int>> anchors;
};

struct RasterPartitions {
  Matrix windows;  // (p*q) x M, column j = block at anchors[j], row-major
  BlockLayout layout;
};

/// Splits the grid into overlapping p x q blocks. Throws too_small_error
/// when the grid is smaller than one block and nodata_error when any cell
/// carries the nodata sentinel (pre-fill explicitly instead).
RasterPartitions partition_raster(const RasterGrid& g, int p, int q);

/// Per-cell mean over all covering blocks (ascending anchor order), with
/// the georeferencing header copied from `header`.
RasterGrid assemble_raster(const Matrix& recon, const BlockLayout& layout,
                           const RasterGrid& header);

/// PCA block simplification with k of the p*q modes. Header fields are
/// copied unchanged.
RasterGrid simplify_raster(const RasterGrid& g, int p, int q, int k,
                           int workers = 1, double* variance = nullptr);

/// Replaces nodata cells with the value of the nearest data cell
/// (multi-source breadth-first, deterministic tie-break). Throws
/// invalid_argument_error when the grid has no data cells at all.
RasterGrid fill_nodata_nearest(const RasterGrid& g);

}  // namespace coastpca

#endif
