#include "pipeline.hpp"

#include <algorithm>

#include "coastpca/contour.hpp"
#include "coastpca/errors.hpp"
#include "coastpca/io_util.hpp"

namespace coastpca::tools {

using nlohmann::json;

namespace {

json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error("config '" + path.string() + "': " + e.what());
  }
}

LoxodromeSpec parse_loxodrome(const json& spec, const std::string& boundary_id,
                              int samples) {
  LoxodromeSpec out;
  if (!spec.contains("start") || !spec["start"].is_array() ||
      spec["start"].size() != 2)
    throw invalid_argument_error("boundary '" + boundary_id +
                                 "': loxodrome needs start = [lon, lat]");
  out.start = {spec["start"][0].get<double>(), spec["start"][1].get<double>()};
  out.bearing_deg = spec.value("bearing", 0.0);
  const bool has_lat = spec.contains("stop_lat");
  const bool has_lon = spec.contains("stop_lon");
  if (has_lat == has_lon)
    throw invalid_argument_error("boundary '" + boundary_id +
                                 "': loxodrome needs exactly one of stop_lat "
                                 "or stop_lon");
  out.stop_kind =
      has_lat ? LoxodromeSpec::Stop::lat_limit : LoxodromeSpec::Stop::lon_limit;
  out.stop_value = has_lat ? spec["stop_lat"].get<double>()
                           : spec["stop_lon"].get<double>();
  out.samples = samples;
  return out;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  const std::filesystem::path base = path.parent_path();
  auto input_path = [&](const std::string& rel) {
    const std::filesystem::path p(rel);
    return p.is_absolute() ? p : base / p;
  };

  PipelineConfig config;
  config.threads = doc.value("threads", 1);
  if (config.threads < 1)
    throw invalid_argument_error("config: threads must be at least 1");

  if (doc.contains("shorelines")) {
    const json& s = doc["shorelines"];
    if (s.contains("in")) config.shorelines_in = input_path(s["in"]);
    if (s.contains("out")) config.shorelines_out = s["out"].get<std::string>();
  }
  if (doc.contains("classes")) {
    for (const auto& [name, body] : doc["classes"].items()) {
      ClassSettings cs;
      cs.partition = body.value("partition", 100);
      cs.modes = body.value("modes", 1);
      if (cs.partition < 2)
        throw invalid_argument_error("config: class '" + name +
                                     "': partition must be at least 2");
      if (cs.modes < 1 || cs.modes > cs.partition)
        throw invalid_argument_error("config: class '" + name +
                                     "': modes must be in [1, partition]");
      config.classes[name] = cs;
    }
  }
  config.default_class = doc.value("default_class", "");
  if (!config.default_class.empty() &&
      !config.classes.count(config.default_class))
    throw invalid_argument_error("config: default_class '" +
                                 config.default_class + "' is not defined");

  if (doc.contains("raster")) {
    const json& r = doc["raster"];
    RasterSettings rs;
    rs.in = input_path(r.at("in"));
    rs.out = r.value("out", "raster_simplified.asc");
    if (r.contains("block")) {
      rs.block_rows = r["block"][0].get<int>();
      rs.block_cols = r["block"][1].get<int>();
    }
    rs.modes = r.value("modes", rs.block_rows * rs.block_cols);
    rs.fill_nodata = r.value("fill_nodata", false);
    if (rs.block_rows < 1 || rs.block_cols < 1)
      throw invalid_argument_error("config: raster block must be positive");
    if (rs.modes < 0 || rs.modes > rs.block_rows * rs.block_cols)
      throw invalid_argument_error(
          "config: raster modes must be in [0, block rows * cols]");
    config.raster = rs;
  }

  for (const json& b : doc.value("open_boundaries", json::array())) {
    BoundarySpec spec;
    spec.id = b.value("id", "boundary-" +
                                std::to_string(config.open_boundaries.size()));
    const int samples = b.value("samples", 200);
    for (const json& lox : b.value("loxodromes", json::array()))
      spec.loxodromes.push_back(parse_loxodrome(lox, spec.id, samples));
    if (spec.loxodromes.empty() || spec.loxodromes.size() > 2)
      throw invalid_argument_error("boundary '" + spec.id +
                                   "': needs one or two loxodromes");
    config.open_boundaries.push_back(std::move(spec));
  }

  for (const json& g : doc.value("gradation", json::array())) {
    GradationRule rule;
    rule.class_id = g.at("class").get<std::string>();
    rule.h_min = g.at("h_min").get<double>();
    rule.plateau = g.value("plateau", 0.0);
    rule.ramp = g.value("ramp", 1.0);
    rule.h_max = g.value("h_max", doc.value("h_max", 1.5));
    validate_rule(rule);
    if (!config.classes.count(rule.class_id))
      throw invalid_argument_error("config: gradation rule references "
                                   "undefined class '" +
                                   rule.class_id + "'");
    config.gradation.push_back(std::move(rule));
  }
  config.h_max = doc.value("h_max", 1.5);

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    if (o.contains("loops")) config.loops_out = o["loops"].get<std::string>();
    if (o.contains("geo")) config.geo_out = o["geo"].get<std::string>();
  }
  return config;
}

VectorStageResult run_vector_stage(const PipelineConfig& config) {
  if (config.shorelines_in.empty())
    throw invalid_argument_error("config: no shorelines input");
  VectorStageResult result;
  const ContourDocument doc = read_contours(config.shorelines_in);
  result.read_count = doc.features.size();

  // Group feature indices by class, resolving the default.
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < doc.features.size(); ++i) {
    std::string cls = doc.features[i].class_tag;
    if (cls.empty()) cls = config.default_class;
    if (cls.empty() || !config.classes.count(cls))
      throw invalid_argument_error(
          "shoreline feature '" + doc.features[i].contour.id +
          "' references undefined class '" + cls + "'");
    by_class[cls].push_back(i);
  }

  std::vector<std::optional<ContourFeature>> kept(doc.features.size());
  for (const auto& [cls, indices] : by_class) {
    const ClassSettings& settings = config.classes.at(cls);
    std::vector<Contour> batch;
    batch.reserve(indices.size());
    for (std::size_t i : indices) batch.push_back(doc.features[i].contour);
    ContourSetResult r = simplify_contour_set(batch, settings.partition,
                                              settings.modes, config.threads);
    result.dropped_ids.insert(result.dropped_ids.end(), r.dropped_ids.begin(),
                              r.dropped_ids.end());
    result.failed_ids.insert(result.failed_ids.end(), r.failed_ids.begin(),
                             r.failed_ids.end());
    double variance_acc = 0.0;
    std::size_t out_at = 0;
    for (std::size_t b = 0; b < batch.size() && out_at < r.contours.size();
         ++b) {
      if (r.contours[out_at].id != batch[b].id) continue;
      kept[indices[b]] = ContourFeature{r.contours[out_at], cls};
      variance_acc += 0.5 * (r.stats[out_at].variance_fraction_x +
                             r.stats[out_at].variance_fraction_y);
      ++out_at;
    }
    result.class_counts[cls] = static_cast<int>(r.contours.size());
    result.class_variance[cls] =
        r.contours.empty() ? 0.0
                           : variance_acc / static_cast<double>(r.contours.size());
  }

  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (!kept[i]) continue;
    result.class_by_id[kept[i]->contour.id] = kept[i]->class_tag;
    result.simplified.features.push_back(std::move(*kept[i]));
  }
  return result;
}

std::vector<OpenLine> build_open_lines(const PipelineConfig& config) {
  std::vector<OpenLine> lines;
  lines.reserve(config.open_boundaries.size());
  for (const BoundarySpec& spec : config.open_boundaries)
    lines.push_back({spec.id, compose_open_boundary(spec.loxodromes)});
  return lines;
}

std::vector<std::pair<GradationRule, std::vector<Contour>>> rules_with_contours(
    const PipelineConfig& config, const VectorStageResult& vec) {
  std::vector<std::pair<GradationRule, std::vector<Contour>>> out;
  for (const GradationRule& rule : config.gradation) {
    std::vector<Contour> contours;
    for (const ContourFeature& f : vec.simplified.features)
      if (f.class_tag == rule.class_id) contours.push_back(f.contour);
    if (contours.empty())
      throw invalid_argument_error("gradation rule '" + rule.class_id +
                                   "' matches no surviving contour");
    out.emplace_back(rule, std::move(contours));
  }
  return out;
}

void write_loops_document(const std::vector<BoundaryLoop>& loops,
                          const std::filesystem::path& path) {
  ContourDocument doc;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    Contour c;
    c.id = (loops[i].island ? "island-" : "loop-") + std::to_string(i);
    c.closed = true;
    c.points = loops[i].vertices();
    doc.features.push_back({std::move(c), loops[i].island ? "island" : "loop"});
  }
  write_contours(doc, path);
}

}  // namespace coastpca::tools
