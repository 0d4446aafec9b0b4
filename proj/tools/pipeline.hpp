#ifndef COASTPCA_TOOLS_PIPELINE_HPP
#define COASTPCA_TOOLS_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coastpca/boundary.hpp"
#include "coastpca/geodesy.hpp"
#include "coastpca/geojson_io.hpp"
#include "coastpca/sizefield.hpp"

namespace coastpca::tools {

struct ClassSettings {
  int partition = 100;
  int modes = 1;
};

struct RasterSettings {
  std::filesystem::path in;
  std::filesystem::path out;
  int block_rows = 8;
  int block_cols = 8;
  int modes = 8;
  bool fill_nodata = false;
};

struct BoundarySpec {
  std::string id;
  std::vector<LoxodromeSpec> loxodromes;
};

/// Configuration mirrored from the JSON config file. Input paths are
/// resolved against the config file's directory; output paths are taken
/// relative to the working directory.
struct PipelineConfig {
  int threads = 1;
  std::filesystem::path shorelines_in;
  std::filesystem::path shorelines_out;
  std::map<std::string, ClassSettings> classes;
  std::string default_class;
  std::optional<RasterSettings> raster;
  std::vector<BoundarySpec> open_boundaries;
  std::vector<GradationRule> gradation;
  double h_max = 1.5;
  std::filesystem::path loops_out;
  std::filesystem::path geo_out;
};

PipelineConfig load_config(const std::filesystem::path& path);

/// Simplified shorelines grouped by everything the later stages need.
struct VectorStageResult {
  ContourDocument simplified;          // kept contours, input order
  std::map<std::string, std::string> class_by_id;
  std::map<std::string, double> class_variance;  // mean captured variance
  std::map<std::string, int> class_counts;
  std::vector<std::string> dropped_ids;
  std::vector<std::string> failed_ids;
  std::size_t read_count = 0;
};

VectorStageResult run_vector_stage(const PipelineConfig& config);

std::vector<OpenLine> build_open_lines(const PipelineConfig& config);

/// Rules paired with the simplified contours of their class, for probing.
std::vector<std::pair<GradationRule, std::vector<Contour>>> rules_with_contours(
    const PipelineConfig& config, const VectorStageResult& vec);

/// Writes the stitched loops as a GeoJSON contour document.
void write_loops_document(const std::vector<BoundaryLoop>& loops,
                          const std::filesystem::path& path);

}  // namespace coastpca::tools

#endif
