#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "coastpca/contour.hpp"
#include "coastpca/errors.hpp"
#include "coastpca/esri_grid.hpp"
#include "coastpca/geojson_io.hpp"
#include "coastpca/raster.hpp"
#include "coastpca/version.hpp"
#include "pipeline.hpp"

namespace {

using coastpca::tools::PipelineConfig;
using coastpca::tools::VectorStageResult;
using nlohmann::json;

json report_header(const std::string& command) {
  return json{{"tool", coastpca::kToolName},
              {"version", coastpca::kVersion},
              {"command", command}};
}

void emit(const json& report) { std::cout << report.dump(2) << std::endl; }

json contour_section(const VectorStageResult& vec) {
  return json{{"read", vec.read_count},
              {"kept", vec.simplified.features.size()},
              {"dropped", vec.dropped_ids.size()},
              {"failed", vec.failed_ids.size()},
              {"dropped_ids", vec.dropped_ids},
              {"failed_ids", vec.failed_ids}};
}

json class_section(const PipelineConfig& config, const VectorStageResult& vec) {
  json classes = json::object();
  for (const auto& [name, settings] : config.classes) {
    json entry{{"partition", settings.partition}, {"modes", settings.modes}};
    if (auto it = vec.class_counts.find(name); it != vec.class_counts.end()) {
      entry["contours"] = it->second;
      entry["variance_fraction"] = vec.class_variance.at(name);
    }
    classes[name] = entry;
  }
  return classes;
}

std::vector<coastpca::Contour> contours_of(const VectorStageResult& vec) {
  std::vector<coastpca::Contour> out;
  out.reserve(vec.simplified.features.size());
  for (const auto& f : vec.simplified.features) out.push_back(f.contour);
  return out;
}

PipelineConfig load_config_with_threads(const std::string& path, int threads) {
  PipelineConfig config = coastpca::tools::load_config(path);
  if (threads > 0) config.threads = threads;
  return config;
}

int run_simplify_vector(const std::string& in, const std::string& out, int p,
                        int k, bool keep_small, int threads) {
  coastpca::ContourDocument doc = coastpca::read_contours(in);
  for (const std::string& w : doc.warnings) std::cerr << w << "\n";
  std::vector<coastpca::Contour> batch;
  batch.reserve(doc.features.size());
  for (const auto& f : doc.features) batch.push_back(f.contour);
  coastpca::ContourSetResult r =
      coastpca::simplify_contour_set(batch, p, k, threads);

  coastpca::ContourDocument out_doc;
  double variance_acc = 0.0;
  std::size_t out_at = 0;
  for (std::size_t i = 0; i < doc.features.size(); ++i) {
    const std::string& id = doc.features[i].contour.id;
    if (out_at < r.contours.size() && r.contours[out_at].id == id) {
      out_doc.features.push_back(
          {r.contours[out_at], doc.features[i].class_tag});
      variance_acc += 0.5 * (r.stats[out_at].variance_fraction_x +
                             r.stats[out_at].variance_fraction_y);
      ++out_at;
    } else if (keep_small &&
               std::find(r.dropped_ids.begin(), r.dropped_ids.end(), id) !=
                   r.dropped_ids.end()) {
      out_doc.features.push_back(doc.features[i]);  // passed through untouched
    }
  }
  coastpca::write_contours(out_doc, out);

  json report = report_header("simplify-vector");
  report["partition"] = p;
  report["modes"] = k;
  report["keep_small"] = keep_small;
  report["contours"] = json{{"read", doc.features.size()},
                            {"kept", r.contours.size()},
                            {"dropped", r.dropped_ids.size()},
                            {"failed", r.failed_ids.size()},
                            {"dropped_ids", r.dropped_ids},
                            {"failed_ids", r.failed_ids}};
  report["variance_fraction"] =
      r.contours.empty()
          ? 0.0
          : variance_acc / static_cast<double>(r.contours.size());
  report["outputs"] = json{{"simplified", out}};
  emit(report);
  return 0;
}

int run_simplify_raster(const std::string& in, const std::string& out, int p,
                        int q, int k, bool fill, int threads) {
  coastpca::RasterGrid g = coastpca::read_raster(in);
  if (fill) g = coastpca::fill_nodata_nearest(g);
  double variance = 0.0;
  coastpca::RasterGrid simplified =
      coastpca::simplify_raster(g, p, q, k, threads, &variance);
  coastpca::write_raster(simplified, out);

  json report = report_header("simplify-raster");
  report["block"] = json::array({p, q});
  report["modes"] = k;
  report["fill_nodata"] = fill;
  report["variance_fraction"] = variance;
  report["outputs"] = json{{"raster", out}};
  emit(report);
  return 0;
}

int run_boundary(const std::string& config_path, const std::string& out,
                 int threads) {
  PipelineConfig config = load_config_with_threads(config_path, threads);
  if (!out.empty()) config.loops_out = out;
  if (config.loops_out.empty())
    throw coastpca::invalid_argument_error(
        "no loops output path (config outputs.loops or --out)");
  VectorStageResult vec = coastpca::tools::run_vector_stage(config);
  const auto lines = coastpca::tools::build_open_lines(config);
  coastpca::TrimResult trim = coastpca::trim_to_domain(contours_of(vec), lines);
  for (const std::string& w : trim.warnings) std::cerr << w << "\n";
  coastpca::tools::write_loops_document(trim.loops, config.loops_out);

  json report = report_header("boundary");
  report["contours"] = contour_section(vec);
  std::size_t islands = 0;
  for (const auto& loop : trim.loops) islands += loop.island ? 1 : 0;
  report["boundary"] = json{{"loops", trim.loops.size()},
                            {"islands", islands},
                            {"warnings", trim.warnings}};
  report["outputs"] = json{{"loops", config.loops_out.string()}};
  emit(report);
  return 0;
}

int run_sizefield(const std::string& config_path, const std::string& probe,
                  int threads) {
  const auto comma = probe.find(',');
  if (comma == std::string::npos)
    throw coastpca::invalid_argument_error("--probe must look like lon,lat");
  const coastpca::GeoPoint pt{std::stod(probe.substr(0, comma)),
                              std::stod(probe.substr(comma + 1))};
  PipelineConfig config = load_config_with_threads(config_path, threads);
  if (config.gradation.empty())
    throw coastpca::invalid_argument_error("config has no gradation rules");
  VectorStageResult vec = coastpca::tools::run_vector_stage(config);
  const auto rules = coastpca::tools::rules_with_contours(config, vec);
  const double size = coastpca::evaluate_size(pt, rules);

  json report = report_header("sizefield");
  report["probe"] = json::array({pt.lon, pt.lat});
  report["size"] = size;
  emit(report);
  return 0;
}

int run_export_geo(const std::string& config_path, const std::string& out,
                   int threads) {
  PipelineConfig config = load_config_with_threads(config_path, threads);
  if (!out.empty()) config.geo_out = out;
  if (config.geo_out.empty())
    throw coastpca::invalid_argument_error(
        "no geometry output path (config outputs.geo or --out)");
  VectorStageResult vec = coastpca::tools::run_vector_stage(config);
  const auto lines = coastpca::tools::build_open_lines(config);
  coastpca::TrimResult trim = coastpca::trim_to_domain(contours_of(vec), lines);
  for (const std::string& w : trim.warnings) std::cerr << w << "\n";
  coastpca::write_geo_file(trim.loops, config.gradation, vec.class_by_id,
                           config.geo_out,
                           coastpca::GeoExportOptions{config.h_max});

  json report = report_header("export-geo");
  report["contours"] = contour_section(vec);
  report["outputs"] = json{{"geo", config.geo_out.string()}};
  emit(report);
  return 0;
}

int run_pipeline(const std::string& config_path, int threads) {
  PipelineConfig config = load_config_with_threads(config_path, threads);
  json report = report_header("pipeline");
  json outputs = json::object();

  VectorStageResult vec = coastpca::tools::run_vector_stage(config);
  report["contours"] = contour_section(vec);
  report["classes"] = class_section(config, vec);
  if (!config.shorelines_out.empty()) {
    coastpca::write_contours(vec.simplified, config.shorelines_out);
    outputs["simplified"] = config.shorelines_out.string();
  }

  if (config.raster) {
    coastpca::RasterGrid g = coastpca::read_raster(config.raster->in);
    if (config.raster->fill_nodata) g = coastpca::fill_nodata_nearest(g);
    double variance = 0.0;
    coastpca::RasterGrid simplified = coastpca::simplify_raster(
        g, config.raster->block_rows, config.raster->block_cols,
        config.raster->modes, config.threads, &variance);
    coastpca::write_raster(simplified, config.raster->out);
    report["raster"] = json{
        {"block",
         json::array({config.raster->block_rows, config.raster->block_cols})},
        {"modes", config.raster->modes},
        {"variance_fraction", variance}};
    outputs["raster"] = config.raster->out.string();
  }

  if (!config.open_boundaries.empty()) {
    const auto lines = coastpca::tools::build_open_lines(config);
    coastpca::TrimResult trim =
        coastpca::trim_to_domain(contours_of(vec), lines);
    for (const std::string& w : trim.warnings) std::cerr << w << "\n";
    std::size_t islands = 0;
    for (const auto& loop : trim.loops) islands += loop.island ? 1 : 0;
    report["boundary"] = json{{"loops", trim.loops.size()},
                              {"islands", islands},
                              {"warnings", trim.warnings}};
    if (!config.loops_out.empty()) {
      coastpca::tools::write_loops_document(trim.loops, config.loops_out);
      outputs["loops"] = config.loops_out.string();
    }
    if (!config.geo_out.empty()) {
      coastpca::write_geo_file(trim.loops, config.gradation, vec.class_by_id,
                               config.geo_out,
                               coastpca::GeoExportOptions{config.h_max});
      outputs["geo"] = config.geo_out.string();
    }
  }

  report["outputs"] = outputs;
  emit(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCA-based shoreline and bathymetry simplification and "
               "mesh-domain preparation"};
  app.set_version_flag("--version", coastpca::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  int threads = 0;  // 0 = take the config value (or 1 for flag-only commands)
  app.add_option("--threads", threads, "Worker threads for PCA stages")
      ->check(CLI::PositiveNumber);

  auto* sv = app.add_subcommand("simplify-vector",
                                "Simplify shoreline contours with PCA");
  std::string sv_in, sv_out;
  int sv_p = 100, sv_k = 1;
  bool sv_keep_small = false;
  sv->add_option("--in", sv_in, "Input GeoJSON")->required();
  sv->add_option("--out", sv_out, "Output GeoJSON")->required();
  sv->add_option("--partition", sv_p, "Points per partition")->required();
  sv->add_option("--modes", sv_k, "Modes kept in the reconstruction")
      ->required();
  sv->add_flag("--keep-small", sv_keep_small,
               "Pass undersized contours through instead of dropping them");

  auto* sr = app.add_subcommand("simplify-raster",
                                "Simplify an elevation raster with PCA");
  std::string sr_in, sr_out, sr_block = "8x8";
  int sr_k = 8;
  bool sr_fill = false;
  sr->add_option("--in", sr_in, "Input ESRI ASCII grid")->required();
  sr->add_option("--out", sr_out, "Output ESRI ASCII grid")->required();
  sr->add_option("--block", sr_block, "Block size PxQ (e.g. 8x8)");
  sr->add_option("--modes", sr_k, "Modes kept in the reconstruction")
      ->required();
  sr->add_flag("--fill-nodata", sr_fill,
               "Fill nodata cells from the nearest data cell first");

  auto* bd =
      app.add_subcommand("boundary", "Build and trim open-boundary loops");
  std::string bd_config, bd_out;
  bd->add_option("--config", bd_config, "Pipeline config JSON")->required();
  bd->add_option("--out", bd_out, "Loops GeoJSON output");

  auto* sf = app.add_subcommand("sizefield",
                                "Evaluate the mesh size field at a point");
  std::string sf_config, sf_probe;
  sf->add_option("--config", sf_config, "Pipeline config JSON")->required();
  sf->add_option("--probe", sf_probe, "Probe point lon,lat")->required();

  auto* eg = app.add_subcommand("export-geo",
                                "Write the mesh-generator geometry file");
  std::string eg_config, eg_out;
  eg->add_option("--config", eg_config, "Pipeline config JSON")->required();
  eg->add_option("--out", eg_out, "Geometry file output");

  auto* pl = app.add_subcommand("pipeline", "Run the full workflow");
  std::string pl_config;
  pl->add_option("--config", pl_config, "Pipeline config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sv->parsed())
      return run_simplify_vector(sv_in, sv_out, sv_p, sv_k, sv_keep_small,
                                 threads > 0 ? threads : 1);
    if (sr->parsed()) {
      const auto xpos = sr_block.find('x');
      if (xpos == std::string::npos || xpos == 0 ||
          xpos + 1 == sr_block.size())
        throw coastpca::invalid_argument_error("--block must look like 8x8");
      const int p = std::stoi(sr_block.substr(0, xpos));
      const int q = std::stoi(sr_block.substr(xpos + 1));
      return run_simplify_raster(sr_in, sr_out, p, q, sr_k, sr_fill,
                                 threads > 0 ? threads : 1);
    }
    if (bd->parsed()) return run_boundary(bd_config, bd_out, threads);
    if (sf->parsed()) return run_sizefield(sf_config, sf_probe, threads);
    if (eg->parsed()) return run_export_geo(eg_config, eg_out, threads);
    if (pl->parsed()) return run_pipeline(pl_config, threads);
  } catch (const coastpca::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const coastpca::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
