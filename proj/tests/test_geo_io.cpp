#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "coastpca/errors.hpp"
#include "coastpca/esri_grid.hpp"
#include "coastpca/geojson_io.hpp"
#include "coastpca/io_util.hpp"

using namespace coastpca;

namespace {

std::filesystem::path temp_path(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace

TEST_CASE("geojson: square polygon ring becomes one closed 4-point contour") {
  const auto path = temp_path("coastpca_square.geojson");
  write_text(path, R"({
    "type": "FeatureCollection",
    "features": [{
      "type": "Feature",
      "properties": {"id": "sq", "class": "coarse"},
      "geometry": {"type": "Polygon", "coordinates": [
        [[0,0],[4,0],[4,4],[0,4],[0,0]]
      ]}
    }]
  })");
  ContourDocument doc = read_contours(path);
  REQUIRE(doc.features.size() == 1);
  const Contour& c = doc.features[0].contour;
  CHECK(c.closed);
  CHECK(c.points.size() == 4);
  CHECK(c.id == "sq");
  CHECK(doc.features[0].class_tag == "coarse");
}

TEST_CASE("geojson: empty collection") {
  const auto path = temp_path("coastpca_empty.geojson");
  write_text(path, R"({"type": "FeatureCollection", "features": []})");
  ContourDocument doc = read_contours(path);
  CHECK(doc.features.empty());
  CHECK(doc.warnings.empty());
}

TEST_CASE("geojson: multipolygon yields one contour per ring") {
  const auto path = temp_path("coastpca_multi.geojson");
  write_text(path, R"({
    "type": "FeatureCollection",
    "features": [{
      "type": "Feature",
      "properties": {"id": "mp"},
      "geometry": {"type": "MultiPolygon", "coordinates": [
        [[[0,0],[1,0],[0,1],[0,0]]],
        [[[5,5],[6,5],[5,6],[5,5]]]
      ]}
    }]
  })");
  ContourDocument doc = read_contours(path);
  REQUIRE(doc.features.size() == 2);
  CHECK(doc.features[0].contour.id == "mp");
  CHECK(doc.features[1].contour.id == "mp:1");
  CHECK(doc.features[0].contour.closed);
  CHECK(doc.features[1].contour.closed);
}

TEST_CASE("geojson: linestrings stay open, ids synthesize from the index") {
  const auto path = temp_path("coastpca_lines.geojson");
  write_text(path, R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {},
       "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1],[2,0]]}},
      {"type": "Feature", "properties": null,
       "geometry": {"type": "Point", "coordinates": [0,0]}}
    ]
  })");
  ContourDocument doc = read_contours(path);
  REQUIRE(doc.features.size() == 1);
  CHECK_FALSE(doc.features[0].contour.closed);
  CHECK(doc.features[0].contour.id == "0");
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0].find("Point") != std::string::npos);
}

TEST_CASE("geojson: parse errors carry context") {
  const auto path = temp_path("coastpca_bad.geojson");
  write_text(path, "{ not json");
  CHECK_THROWS_AS(read_contours(path), parse_error);

  write_text(path, R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"id": "bad"},
     "geometry": {"type": "LineString", "coordinates": [[0,95],[1,1]]}}
  ]})");
  try {
    read_contours(path);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
    CHECK(std::string(e.what()).find("latitude") != std::string::npos);
  }

  // Duplicate ids violate the document invariant.
  write_text(path, R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"id": "x"},
     "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]}},
    {"type": "Feature", "properties": {"id": "x"},
     "geometry": {"type": "LineString", "coordinates": [[2,2],[3,3]]}}
  ]})");
  CHECK_THROWS_AS(read_contours(path), parse_error);
}

TEST_CASE("geojson: write/read round-trip is exact") {
  ContourDocument doc;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  std::uniform_real_distribution<double> lat(-89.0, 89.0);
  for (int f = 0; f < 8; ++f) {
    Contour c;
    c.id = "f" + std::to_string(f);
    c.closed = (f % 2 == 0);
    const int n = c.closed ? 5 + f : 2 + f;
    for (int i = 0; i < n; ++i) c.points.push_back({lon(rng), lat(rng)});
    doc.features.push_back({std::move(c), f % 3 ? "fine" : "coarse"});
  }
  const auto path = temp_path("coastpca_rt.geojson");
  write_contours(doc, path);
  ContourDocument back = read_contours(path);
  REQUIRE(back.features.size() == doc.features.size());
  for (std::size_t i = 0; i < doc.features.size(); ++i) {
    const Contour& a = doc.features[i].contour;
    const Contour& b = back.features[i].contour;
    CHECK(a.id == b.id);
    CHECK(a.closed == b.closed);
    CHECK(doc.features[i].class_tag == back.features[i].class_tag);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t p = 0; p < a.points.size(); ++p)
      CHECK(a.points[p] == b.points[p]);
  }
}

TEST_CASE("esri grid: golden two-by-two file") {
  RasterGrid g;
  g.nrows = 2;
  g.ncols = 2;
  g.xll = 0.0;
  g.yll = 0.0;
  g.cellsize = 1.0;
  g.nodata = -9999.0;
  g.values = {1.0, 2.0, 3.0, 4.0};
  const auto path = temp_path("coastpca_grid.asc");
  write_raster(g, path);
  CHECK(read_file(path) ==
        "ncols 2\n"
        "nrows 2\n"
        "xllcorner 0\n"
        "yllcorner 0\n"
        "cellsize 1\n"
        "NODATA_value -9999\n"
        "1 2\n"
        "3 4\n");
}

TEST_CASE("esri grid: round-trip preserves values bit-exactly") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> depth(-40.0, 25.0);
  RasterGrid g;
  g.nrows = 13;
  g.ncols = 9;
  g.xll = -3.7251;
  g.yll = 51.00000000000001;
  g.cellsize = 1.0 / 3.0;
  g.nodata = -9999.0;
  for (int i = 0; i < 13 * 9; ++i) g.values.push_back(depth(rng));
  g.values[27] = g.nodata;  // sentinel passes through verbatim
  const auto path = temp_path("coastpca_rt.asc");
  write_raster(g, path);
  RasterGrid back = read_raster(path);
  CHECK(back.nrows == g.nrows);
  CHECK(back.ncols == g.ncols);
  CHECK(back.xll == g.xll);
  CHECK(back.yll == g.yll);
  CHECK(back.cellsize == g.cellsize);
  CHECK(back.nodata == g.nodata);
  CHECK(back.values == g.values);
}

TEST_CASE("esri grid: header and row errors name the offender") {
  const auto path = temp_path("coastpca_badgrid.asc");
  write_text(path,
             "nrows 2\nncols 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
             "NODATA_value -9999\n1 2\n3 4\n");
  try {
    read_raster(path);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("ncols") != std::string::npos);
  }

  write_text(path,
             "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
             "NODATA_value -9999\n1 2 3\n4 5\n");
  try {
    read_raster(path);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }

  write_text(path,
             "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
             "NODATA_value -9999\n1 2\n3 oops\n");
  CHECK_THROWS_AS(read_raster(path), parse_error);
}

TEST_CASE("esri grid: header keys are case-insensitive") {
  const auto path = temp_path("coastpca_case.asc");
  write_text(path,
             "NCOLS 2\nNROWS 1\nXLLCORNER 1.5\nYLLCORNER 2.5\nCELLSIZE 0.5\n"
             "nodata_value -1\n7 8\n");
  RasterGrid g = read_raster(path);
  CHECK(g.ncols == 2);
  CHECK(g.nrows == 1);
  CHECK(g.xll == 1.5);
  CHECK(g.cellsize == 0.5);
  CHECK(g.nodata == -1.0);
  CHECK(g.values == std::vector<double>{7.0, 8.0});
}
