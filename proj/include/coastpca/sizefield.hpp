#ifndef COASTPCA_SIZEFIELD_HPP
#define COASTPCA_SIZEFIELD_HPP

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "coastpca/boundary.hpp"
#include "coastpca/contour.hpp"
#include "coastpca/geodesy.hpp"

namespace coastpca {

/// Distance-graded edge-length rule for one shoreline class: h stays at
/// h_min out to `plateau` degrees from the nearest contour, rises linearly
/// over `ramp` degrees, and caps at h_max.
struct GradationRule {
  std::string class_id;
  double h_min = 0.0;
  double plateau = 0.0;
  double ramp = 1.0;
  double h_max = 1.5;
};

void validate_rule(const GradationRule& r);

/// Edge length prescribed by one rule at distance d (degrees of arc).
double rule_size_at(const GradationRule& r, double d);

/// Great-circle distance (central angle, degrees) from pt to the nearest
/// point on any segment of the given contours. Nearest points are found in
/// a local tangent plane at pt.
double distance_to_contours(const GeoPoint& pt,
                            const std::vector<Contour>& contours);

/// Minimum over all rules of each rule's size at pt's distance to that
/// rule's contours. Throws invalid_argument_error on an empty rule set.
double evaluate_size(
    const GeoPoint& pt,
    const std::vector<std::pair<GradationRule, std::vector<Contour>>>& rules);

struct GeoExportOptions {
  /// Background size when no rules are given (constant field).
  double fallback_h_max = 1.5;
};

/// Parsed form of an exported geometry file, sufficient to round-trip it.
struct GeoFile {
  struct Field {
    std::string kind;
    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<double>> lists;
    std::string expr;
  };
  std::map<int, std::array<double, 3>> points;
  std::map<int, std::vector<int>> curves;    // Line / Spline point chains
  std::map<int, std::vector<int>> loops;     // Line Loop -> curve ids
  std::map<int, std::vector<int>> surfaces;  // Plane Surface -> loop ids
  std::map<int, Field> fields;
  int background_field = -1;

  /// Vertex coordinates of one curve loop, following each curve's point
  /// chain and dropping the duplicated joints.
  std::vector<GeoPoint> loop_vertices(int loop_id) const;
};

/// Writes mesh-generator geometry (version-2 .geo syntax): points, one
/// curve per boundary segment, a curve loop per boundary loop, a plane
/// surface per outer loop (islands as holes), and per-rule Distance +
/// Threshold fields combined by a Min background field. Coordinates use 17
/// significant digits and the written file is parsed back as a self-check.
/// `class_by_source_id` maps segment source ids to rule classes.
void write_geo_file(const std::vector<BoundaryLoop>& loops,
                    const std::vector<GradationRule>& rules,
                    const std::map<std::string, std::string>& class_by_source_id,
                    const std::filesystem::path& path,
                    const GeoExportOptions& options = {});

GeoFile read_geo_file(const std::filesystem::path& path);

}  // namespace coastpca

#endif
