#include "coastpca/raster.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "coastpca/errors.hpp"
#include "coastpca/pca.hpp"

namespace coastpca {

void validate_raster(const RasterGrid& g) {
  if (g.nrows < 1 || g.ncols < 1)
    throw invalid_argument_error("raster: nrows and ncols must be positive");
  if (!(g.cellsize > 0.0))
    throw invalid_argument_error("raster: cellsize must be positive");
  if (g.values.size() != static_cast<std::size_t>(g.nrows) * g.ncols)
    throw invalid_argument_error("raster: value count does not match nrows*ncols");
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (g.values[i] != g.nodata && !std::isfinite(g.values[i]))
      throw invalid_argument_error("raster: non-finite value at cell " +
                                   std::to_string(i));
}

RasterPartitions partition_raster(const RasterGrid& g, int p, int q) {
  validate_raster(g);
  if (p < 1 || q < 1)
    throw invalid_argument_error("partition_raster: block size must be positive");
  if (p > g.nrows || q > g.ncols)
    throw too_small_error("partition_raster: grid " + std::to_string(g.nrows) +
                          "x" + std::to_string(g.ncols) +
                          " is smaller than one " + std::to_string(p) + "x" +
                          std::to_string(q) + " block");
  for (int r = 0; r < g.nrows; ++r)
    for (int c = 0; c < g.ncols; ++c)
      if (g.at(r, c) == g.nodata)
        throw nodata_error("partition_raster: nodata cell at row " +
                           std::to_string(r) + ", column " + std::to_string(c) +
                           " (pre-fill before simplifying)");

  RasterPartitions out;
  out.layout.block_rows = p;
  out.layout.block_cols = q;
  out.layout.nrows = g.nrows;
  out.layout.ncols = g.ncols;
  const int mr = g.nrows - p + 1;
  const int mc = g.ncols - q + 1;
  out.layout.anchors.reserve(static_cast<std::size_t>(mr) * mc);
  for (int r = 0; r < mr; ++r)
    for (int c = 0; c < mc; ++c) out.layout.anchors.emplace_back(r, c);

  const std::size_t n = static_cast<std::size_t>(p) * q;
  const std::size_t m = out.layout.anchors.size();
  out.windows = Matrix(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto [ar, ac] = out.layout.anchors[j];
    std::size_t i = 0;
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < q; ++c) out.windows(i++, j) = g.at(ar + r, ac + c);
  }
  return out;
}

RasterGrid assemble_raster(const Matrix& recon, const BlockLayout& layout,
                           const RasterGrid& header) {
  const int p = layout.block_rows;
  const int q = layout.block_cols;
  if (recon.rows() != static_cast<std::size_t>(p) * q ||
      recon.cols() != layout.anchors.size())
    throw invalid_argument_error(
        "assemble_raster: matrix does not conform to the layout");
  if (layout.nrows != header.nrows || layout.ncols != header.ncols)
    throw invalid_argument_error("assemble_raster: header dimensions differ");

  RasterGrid out = header;
  const std::size_t cells = static_cast<std::size_t>(layout.nrows) * layout.ncols;
  std::vector<double> sums(cells, 0.0);
  std::vector<int> votes(cells, 0);
  for (std::size_t j = 0; j < layout.anchors.size(); ++j) {
    const auto [ar, ac] = layout.anchors[j];
    std::size_t i = 0;
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < q; ++c) {
        const std::size_t cell =
            static_cast<std::size_t>(ar + r) * layout.ncols + (ac + c);
        sums[cell] += recon(i++, j);
        votes[cell] += 1;
      }
    }
  }
  out.values.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    if (votes[i] == 0)
      throw invalid_argument_error("assemble_raster: cell " +
                                   std::to_string(i) + " has no covering block");
    out.values[i] = sums[i] / votes[i];
  }
  return out;
}

RasterGrid simplify_raster(const RasterGrid& g, int p, int q, int k,
                           int workers, double* variance) {
  if (k < 0 || k > p * q)
    throw invalid_argument_error("simplify_raster: mode count " +
                                 std::to_string(k) + " must be in [0, " +
                                 std::to_string(p * q) + "]");
  RasterPartitions parts = partition_raster(g, p, q);
  SampleMatrix s = center_columns(parts.windows);
  Matrix c = covariance(s, workers);
  EigenSystem e = eigendecompose_symmetric(c);
  ModeSet phi = compute_modes(s, e, workers);
  if (variance) *variance = variance_fraction(e, static_cast<std::size_t>(k));
  Matrix recon = reconstruct(s, e, phi, static_cast<std::size_t>(k), workers);
  return assemble_raster(recon, parts.layout, g);
}

RasterGrid fill_nodata_nearest(const RasterGrid& g) {
  validate_raster(g);
  RasterGrid out = g;
  const int nr = g.nrows;
  const int nc = g.ncols;
  std::deque<std::pair<int, int>> queue;
  std::vector<bool> seen(static_cast<std::size_t>(nr) * nc, false);
  for (int r = 0; r < nr; ++r) {
    for (int c = 0; c < nc; ++c) {
      if (g.at(r, c) != g.nodata) {
        queue.emplace_back(r, c);
        seen[static_cast<std::size_t>(r) * nc + c] = true;
      }
    }
  }
  if (queue.empty())
    throw invalid_argument_error("fill_nodata_nearest: grid is all nodata");
  // 4-neighbour flood from every data cell; first arrival wins, and the
  // fixed seed/neighbour order makes the result deterministic.
  static constexpr int dr[4] = {-1, 0, 0, 1};
  static constexpr int dc[4] = {0, -1, 1, 0};
  while (!queue.empty()) {
    const auto [r, c] = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      const int rr = r + dr[d];
      const int cc = c + dc[d];
      if (rr < 0 || rr >= nr || cc < 0 || cc >= nc) continue;
      const std::size_t idx = static_cast<std::size_t>(rr) * nc + cc;
      if (seen[idx]) continue;
      seen[idx] = true;
      out.at(rr, cc) = out.at(r, c);
      queue.emplace_back(rr, cc);
    }
  }
  return out;
}

}  // namespace coastpca
