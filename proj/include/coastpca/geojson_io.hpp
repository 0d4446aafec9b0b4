#ifndef COASTPCA_GEOJSON_IO_HPP
#define COASTPCA_GEOJSON_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "coastpca/contour.hpp"

namespace coastpca {

struct ContourFeature {
  Contour contour;
  std::string class_tag;
};

/// A set of contours with per-contour class tags; ids are unique.
struct ContourDocument {
  std::vector<ContourFeature> features;
  std::vector<std::string> warnings;  // skipped geometries etc.
};

/// Reads a GeoJSON FeatureCollection of LineString / Polygon / MultiPolygon
/// features (WGS84 lon/lat). Polygon rings become closed contours with the
/// duplicated terminal point removed; LineStrings become open contours.
/// "class" and "id" properties are captured; missing ids are synthesized
/// from the feature index. Other geometry types are skipped with a warning.
ContourDocument read_contours(const std::filesystem::path& path);

/// Writes GeoJSON: closed contours as Polygons (terminal point duplicated
/// again), open ones as LineStrings. read(write(x)) == x.
void write_contours(const ContourDocument& doc,
                    const std::filesystem::path& path);

}  // namespace coastpca

#endif
