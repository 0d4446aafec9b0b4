#include "coastpca/geojson_io.hpp"

#include <cmath>
#include <set>
#include <utility>

#include <json.hpp>

#include "coastpca/errors.hpp"
#include "coastpca/io_util.hpp"

namespace coastpca {

using nlohmann::json;

namespace {

GeoPoint parse_position(const json& pos, const std::string& feature_id) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
      !pos[1].is_number())
    throw parse_error("geojson: feature '" + feature_id +
                      "': position must be a [lon, lat] array");
  const double lon = pos[0].get<double>();
  const double lat = pos[1].get<double>();
  if (!std::isfinite(lon) || !std::isfinite(lat))
    throw parse_error("geojson: feature '" + feature_id +
                      "': non-finite coordinate");
  if (lat < -90.0 || lat > 90.0)
    throw parse_error("geojson: feature '" + feature_id +
                      "': latitude out of [-90, 90]");
  return {lon, lat};
}

std::vector<GeoPoint> parse_ring(const json& ring, const std::string& fid) {
  if (!ring.is_array())
    throw parse_error("geojson: feature '" + fid + "': ring must be an array");
  std::vector<GeoPoint> pts;
  pts.reserve(ring.size());
  for (const json& pos : ring) pts.push_back(parse_position(pos, fid));
  if (pts.size() >= 2 && pts.front() == pts.back()) pts.pop_back();
  if (pts.size() < 3)
    throw parse_error("geojson: feature '" + fid +
                      "': polygon ring needs at least 3 distinct points");
  return pts;
}

std::string feature_id_of(const json& props, std::size_t index) {
  if (props.is_object() && props.contains("id")) {
    const json& id = props["id"];
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number_integer()) return std::to_string(id.get<long long>());
    if (id.is_number()) return json(id).dump();
  }
  return std::to_string(index);
}

}  // namespace

ContourDocument read_contours(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error("geojson: " + std::string(e.what()));
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
    throw parse_error("geojson: root must be a FeatureCollection");
  if (!doc.contains("features") || !doc["features"].is_array())
    throw parse_error("geojson: missing features array");

  ContourDocument out;
  std::set<std::string> seen_ids;
  auto add = [&](Contour c, const std::string& cls) {
    if (!seen_ids.insert(c.id).second)
      throw parse_error("geojson: duplicate contour id '" + c.id + "'");
    validate_contour(c);
    out.features.push_back({std::move(c), cls});
  };

  std::size_t index = 0;
  for (const json& feature : doc["features"]) {
    const json props = feature.value("properties", json::object());
    const std::string base_id = feature_id_of(props, index);
    const std::string cls =
        props.is_object() && props.contains("class") && props["class"].is_string()
            ? props["class"].get<std::string>()
            : "";
    const json geometry = feature.value("geometry", json());
    const std::string type =
        geometry.is_object() ? geometry.value("type", "") : "";
    auto sub_id = [&](int k) {
      return k == 0 ? base_id : base_id + ":" + std::to_string(k);
    };

    if (type == "LineString") {
      Contour c;
      c.id = base_id;
      c.closed = false;
      for (const json& pos : geometry["coordinates"])
        c.points.push_back(parse_position(pos, base_id));
      add(std::move(c), cls);
    } else if (type == "Polygon") {
      int k = 0;
      for (const json& ring : geometry["coordinates"]) {
        Contour c;
        c.id = sub_id(k++);
        c.closed = true;
        c.points = parse_ring(ring, base_id);
        add(std::move(c), cls);
      }
    } else if (type == "MultiPolygon") {
      int k = 0;
      for (const json& poly : geometry["coordinates"]) {
        for (const json& ring : poly) {
          Contour c;
          c.id = sub_id(k++);
          c.closed = true;
          c.points = parse_ring(ring, base_id);
          add(std::move(c), cls);
        }
      }
    } else {
      out.warnings.push_back("geojson: feature '" + base_id +
                             "': skipped unsupported geometry type '" + type +
                             "'");
    }
    ++index;
  }
  return out;
}

void write_contours(const ContourDocument& doc,
                    const std::filesystem::path& path) {
  std::set<std::string> seen_ids;
  json features = json::array();
  for (const ContourFeature& feature : doc.features) {
    const Contour& c = feature.contour;
    validate_contour(c);
    if (!seen_ids.insert(c.id).second)
      throw invalid_argument_error("write_contours: duplicate contour id '" +
                                   c.id + "'");
    json coords = json::array();
    for (const GeoPoint& pt : c.points) coords.push_back({pt.lon, pt.lat});
    json geometry;
    if (c.closed) {
      coords.push_back({c.points.front().lon, c.points.front().lat});
      geometry = {{"type", "Polygon"}, {"coordinates", json::array({coords})}};
    } else {
      geometry = {{"type", "LineString"}, {"coordinates", coords}};
    }
    features.push_back({{"type", "Feature"},
                        {"properties",
                         {{"id", c.id}, {"class", feature.class_tag}}},
                        {"geometry", geometry}});
  }
  const json root = {{"type", "FeatureCollection"}, {"features", features}};
  atomic_write_file(path, root.dump(2) + "\n");
}

}  // namespace coastpca
