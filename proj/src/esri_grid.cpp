#include "coastpca/esri_grid.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>

#include "coastpca/errors.hpp"
#include "coastpca/io_util.hpp"

namespace coastpca {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double header_value(std::istringstream& in, const char* key) {
  std::string word;
  if (!(in >> word) || lower(word) != lower(key))
    throw parse_error(std::string("esri grid: expected header key '") + key +
                      "', found '" + word + "'");
  std::string value;
  if (!(in >> value))
    throw parse_error(std::string("esri grid: missing value for '") + key + "'");
  char* endp = nullptr;
  const double v = std::strtod(value.c_str(), &endp);
  if (endp == value.c_str() || *endp != '\0')
    throw parse_error(std::string("esri grid: bad value '") + value +
                      "' for '" + key + "'");
  return v;
}

}  // namespace

RasterGrid read_raster(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);

  RasterGrid g;
  const double ncols = header_value(in, "ncols");
  const double nrows = header_value(in, "nrows");
  g.xll = header_value(in, "xllcorner");
  g.yll = header_value(in, "yllcorner");
  g.cellsize = header_value(in, "cellsize");
  g.nodata = header_value(in, "NODATA_value");
  g.ncols = static_cast<int>(ncols);
  g.nrows = static_cast<int>(nrows);
  if (g.ncols < 1 || g.nrows < 1)
    throw parse_error("esri grid: ncols and nrows must be positive");
  if (!(g.cellsize > 0.0))
    throw parse_error("esri grid: cellsize must be positive");

  // Rest of the header line, then one line per grid row.
  std::string tail;
  std::getline(in, tail);
  g.values.reserve(static_cast<std::size_t>(g.nrows) * g.ncols);
  std::string line;
  int row = 0;
  while (row < g.nrows) {
    if (!std::getline(in, line))
      throw parse_error("esri grid: missing data row " + std::to_string(row));
    std::istringstream ls(line);
    std::string token;
    int count = 0;
    while (ls >> token) {
      char* endp = nullptr;
      const double v = std::strtod(token.c_str(), &endp);
      if (endp == token.c_str() || *endp != '\0')
        throw parse_error("esri grid: bad value '" + token + "' in row " +
                          std::to_string(row));
      g.values.push_back(v);
      ++count;
    }
    if (count == 0) continue;  // blank line
    if (count != g.ncols)
      throw parse_error("esri grid: row " + std::to_string(row) + " has " +
                        std::to_string(count) + " values, expected " +
                        std::to_string(g.ncols));
    ++row;
  }
  validate_raster(g);
  return g;
}

void write_raster(const RasterGrid& g, const std::filesystem::path& path) {
  validate_raster(g);
  std::ostringstream out;
  out << "ncols " << g.ncols << "\n";
  out << "nrows " << g.nrows << "\n";
  out << "xllcorner " << format_double(g.xll) << "\n";
  out << "yllcorner " << format_double(g.yll) << "\n";
  out << "cellsize " << format_double(g.cellsize) << "\n";
  out << "NODATA_value " << format_double(g.nodata) << "\n";
  for (int r = 0; r < g.nrows; ++r) {
    for (int c = 0; c < g.ncols; ++c) {
      if (c) out << ' ';
      out << format_double(g.at(r, c));
    }
    out << "\n";
  }
  atomic_write_file(path, out.str());
}

}  // namespace coastpca
