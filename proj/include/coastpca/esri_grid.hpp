#ifndef COASTPCA_ESRI_GRID_HPP
#define COASTPCA_ESRI_GRID_HPP

#include <filesystem>

#include "coastpca/raster.hpp"

namespace coastpca {

/// Reads an ESRI ASCII grid. The six header keys must appear in order:
/// ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value (case
/// insensitive); data rows follow top-to-bottom, one grid row per line.
RasterGrid read_raster(const std::filesystem::path& path);

/// Writes the grid with 17-significant-digit values; read(write(g))
/// reproduces every value bit-exactly.
void write_raster(const RasterGrid& g, const std::filesystem::path& path);

}  // namespace coastpca

#endif
