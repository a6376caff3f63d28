// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front-end: eval, convert, nms, gen, sweep, bench.
// Exit codes: 0 success, 1 usage or configuration error, 2 input format
// error, 3 internal invariant violation.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orient/angle_codec.hpp"
#include "orient/dota_io.hpp"
#include "orient/evaluator.hpp"
#include "orient/geometry.hpp"
#include "orient/nms.hpp"
#include "orient/parallel.hpp"
#include "orient/report_io.hpp"
#include "orient/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFormat = 2;
constexpr int kExitInternal = 3;

std::vector<fs::path> list_txt_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw orient::IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw orient::IoError("cannot write " + path.string());
  out << content;
}

// ---------------------------------------------------------------------------
// Config file (single declarative JSON document)

template <typename T>
T field_or(const json& j, const std::string& key, T fallback,
           const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw orient::ConfigError("config field " + path + "." + key +
                              " has the wrong type");
  }
}

std::pair<double, double> pair_or(const json& j, const std::string& key,
                                  std::pair<double, double> fallback,
                                  const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw orient::ConfigError("config field " + path + "." + key +
                              " must be an array of two numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

struct ToolConfig {
  orient::SceneConfig scene;
  std::vector<orient::ConditionSpec> conditions;
  orient::DetectorModel detector;
  orient::ConditionEffects effects;
  orient::CslConfig csl;
  int trials = 1;
  orient::EvalOptions eval;
  double nms_iou_threshold = 0.5;
  double nms_score_threshold = 0.0;
  bool class_aware = true;
};

ToolConfig parse_tool_config(const json& root) {
  if (!root.is_object()) {
    throw orient::ConfigError("config root must be an object");
  }
  ToolConfig cfg;
  if (root.contains("scene")) {
    const json& s = root.at("scene");
    cfg.scene.rng_seed = field_or<std::uint64_t>(s, "seed", cfg.scene.rng_seed, "scene");
    auto extent = pair_or(s, "extent", {cfg.scene.extent_w, cfg.scene.extent_h}, "scene");
    cfg.scene.extent_w = extent.first;
    cfg.scene.extent_h = extent.second;
    auto objects = pair_or(s, "objects",
                           {static_cast<double>(cfg.scene.min_objects),
                            static_cast<double>(cfg.scene.max_objects)},
                           "scene");
    cfg.scene.min_objects = static_cast<int>(objects.first);
    cfg.scene.max_objects = static_cast<int>(objects.second);
    auto size = pair_or(s, "size_range", {cfg.scene.min_size, cfg.scene.max_size}, "scene");
    cfg.scene.min_size = size.first;
    cfg.scene.max_size = size.second;
    auto aspect = pair_or(s, "aspect_range", {cfg.scene.min_aspect, cfg.scene.max_aspect}, "scene");
    cfg.scene.min_aspect = aspect.first;
    cfg.scene.max_aspect = aspect.second;
    cfg.scene.class_set = field_or<std::vector<std::string>>(
        s, "classes", cfg.scene.class_set, "scene");
    cfg.scene.max_overlap = field_or<double>(s, "max_overlap", cfg.scene.max_overlap, "scene");
    cfg.scene.reference_distance =
        field_or<double>(s, "reference_distance", cfg.scene.reference_distance, "scene");
  }
  if (root.contains("conditions")) {
    const json& conds = root.at("conditions");
    if (!conds.is_array()) {
      throw orient::ConfigError("config field conditions must be an array");
    }
    int index = 0;
    for (const json& c : conds) {
      const std::string path = "conditions[" + std::to_string(index++) + "]";
      if (!c.is_object() || !c.contains("kind")) {
        throw orient::ConfigError("config field " + path + " needs a kind");
      }
      orient::ConditionSpec spec;
      spec.kind = orient::condition_kind_from_string(
          field_or<std::string>(c, "kind", "", path));
      spec.parameter = field_or<double>(c, "parameter", 1.0, path);
      spec.label = field_or<std::string>(c, "label", "", path);
      cfg.conditions.push_back(std::move(spec));
    }
  }
  if (root.contains("detector")) {
    const json& d = root.at("detector");
    cfg.detector.miss_rate = field_or<double>(d, "miss_rate", 0.0, "detector");
    cfg.detector.fp_rate = field_or<double>(d, "fp_rate", 0.0, "detector");
    cfg.detector.center_jitter_sigma =
        field_or<double>(d, "center_jitter_sigma", 0.0, "detector");
    cfg.detector.size_jitter_sigma =
        field_or<double>(d, "size_jitter_sigma", 0.0, "detector");
    cfg.detector.angle_jitter_sigma =
        field_or<double>(d, "angle_jitter_sigma", 0.0, "detector");
    auto tp = pair_or(d, "tp_score", {1.0, 0.0}, "detector");
    cfg.detector.tp_score_mean = tp.first;
    cfg.detector.tp_score_sigma = tp.second;
    auto fp = pair_or(d, "fp_score", {0.25, 0.1}, "detector");
    cfg.detector.fp_score_mean = fp.first;
    cfg.detector.fp_score_sigma = fp.second;
    cfg.detector.class_confusion = field_or<double>(d, "class_confusion", 0.0, "detector");
  }
  if (root.contains("effects")) {
    const json& e = root.at("effects");
    cfg.effects.rain_miss = field_or<double>(e, "rain_miss", cfg.effects.rain_miss, "effects");
    cfg.effects.rain_center_jitter =
        field_or<double>(e, "rain_center_jitter", cfg.effects.rain_center_jitter, "effects");
    cfg.effects.rain_size_jitter =
        field_or<double>(e, "rain_size_jitter", cfg.effects.rain_size_jitter, "effects");
    cfg.effects.rain_angle_jitter =
        field_or<double>(e, "rain_angle_jitter", cfg.effects.rain_angle_jitter, "effects");
    cfg.effects.light_score_widen =
        field_or<double>(e, "light_score_widen", cfg.effects.light_score_widen, "effects");
    cfg.effects.sensor_confusion =
        field_or<double>(e, "sensor_confusion", cfg.effects.sensor_confusion, "effects");
  }
  if (root.contains("csl")) {
    const json& c = root.at("csl");
    cfg.csl.num_classes = field_or<int>(c, "num_classes", cfg.csl.num_classes, "csl");
    cfg.csl.window = orient::csl_window_from_string(
        field_or<std::string>(c, "window", orient::to_string(cfg.csl.window), "csl"));
    cfg.csl.radius = field_or<double>(c, "radius", cfg.csl.radius, "csl");
    orient::validate(cfg.csl);
  }
  cfg.trials = field_or<int>(root, "trials", cfg.trials, "");
  if (root.contains("eval")) {
    const json& e = root.at("eval");
    cfg.eval.iou_threshold = field_or<double>(e, "iou_threshold", 0.5, "eval");
    cfg.eval.ap_mode = orient::ap_mode_from_string(
        field_or<std::string>(e, "ap_mode", "all_points", "eval"));
  }
  if (root.contains("nms")) {
    const json& n = root.at("nms");
    cfg.nms_iou_threshold = field_or<double>(n, "iou_threshold", 0.5, "nms");
    cfg.nms_score_threshold = field_or<double>(n, "score_threshold", 0.0, "nms");
    cfg.class_aware = field_or<bool>(n, "class_aware", true, "nms");
  }
  return cfg;
}

ToolConfig load_tool_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw orient::ConfigError("cannot open config " + path.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw orient::ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_tool_config(root);
}

json config_echo(const ToolConfig& cfg) {
  json scene = {{"seed", cfg.scene.rng_seed},
                {"extent", {cfg.scene.extent_w, cfg.scene.extent_h}},
                {"objects", {cfg.scene.min_objects, cfg.scene.max_objects}},
                {"size_range", {cfg.scene.min_size, cfg.scene.max_size}},
                {"aspect_range", {cfg.scene.min_aspect, cfg.scene.max_aspect}},
                {"classes", cfg.scene.class_set},
                {"max_overlap", cfg.scene.max_overlap},
                {"reference_distance", cfg.scene.reference_distance}};
  json conditions = json::array();
  for (const orient::ConditionSpec& c : cfg.conditions) {
    conditions.push_back({{"kind", orient::to_string(c.kind)},
                          {"parameter", c.parameter},
                          {"label", orient::condition_tag(c)}});
  }
  json detector = {{"miss_rate", cfg.detector.miss_rate},
                   {"fp_rate", cfg.detector.fp_rate},
                   {"center_jitter_sigma", cfg.detector.center_jitter_sigma},
                   {"size_jitter_sigma", cfg.detector.size_jitter_sigma},
                   {"angle_jitter_sigma", cfg.detector.angle_jitter_sigma},
                   {"tp_score", {cfg.detector.tp_score_mean, cfg.detector.tp_score_sigma}},
                   {"fp_score", {cfg.detector.fp_score_mean, cfg.detector.fp_score_sigma}},
                   {"class_confusion", cfg.detector.class_confusion}};
  json csl = {{"num_classes", cfg.csl.num_classes},
              {"window", orient::to_string(cfg.csl.window)},
              {"radius", cfg.csl.radius}};
  return {{"scene", std::move(scene)},
          {"conditions", std::move(conditions)},
          {"detector", std::move(detector)},
          {"csl", std::move(csl)},
          {"trials", cfg.trials},
          {"eval",
           {{"iou_threshold", cfg.eval.iou_threshold},
            {"ap_mode", orient::to_string(cfg.eval.ap_mode)}}},
          {"nms",
           {{"iou_threshold", cfg.nms_iou_threshold},
            {"score_threshold", cfg.nms_score_threshold},
            {"class_aware", cfg.class_aware}}}};
}

// ---------------------------------------------------------------------------
// eval

struct ParsedImage {
  std::string id;
  orient::AnnotationParse annotations;
  orient::PredictionParse predictions;
};

struct EvalFlags {
  std::string gt_dir;
  std::string pred_dir;
  std::string out_dir;
  std::string config;
  std::optional<double> iou_threshold;
  std::optional<std::string> ap_mode;
  int jobs = 1;
  bool stamp = false;
};

int cmd_eval(const EvalFlags& flags) {
  const std::vector<fs::path> gt_files = list_txt_files(flags.gt_dir);
  if (gt_files.empty()) {
    throw orient::FormatError("no annotation files in " + flags.gt_dir);
  }
  const fs::path pred_dir(flags.pred_dir);
  if (!fs::is_directory(pred_dir)) {
    throw orient::IoError("not a directory: " + pred_dir.string());
  }

  std::vector<ParsedImage> images(gt_files.size());
  orient::parallel_for(
      static_cast<int>(gt_files.size()), flags.jobs, [&](int i) {
        ParsedImage& img = images[static_cast<std::size_t>(i)];
        img.id = gt_files[static_cast<std::size_t>(i)].stem().string();
        img.annotations = orient::parse_annotation_file(gt_files[static_cast<std::size_t>(i)]);
        const fs::path pred_file = pred_dir / (img.id + ".txt");
        if (fs::exists(pred_file)) {
          img.predictions = orient::parse_prediction_file(pred_file);
        }
      });

  std::set<std::string> names;
  for (const ParsedImage& img : images) {
    for (const auto& rec : img.annotations.records) names.insert(rec.category);
    for (const auto& rec : img.predictions.records) names.insert(rec.category);
  }
  if (names.empty()) {
    throw orient::EmptyEvaluationError("no categories found in " + flags.gt_dir);
  }
  std::vector<std::string> class_names(names.begin(), names.end());
  std::map<std::string, int> class_ids;
  for (std::size_t i = 0; i < class_names.size(); ++i) {
    class_ids[class_names[i]] = static_cast<int>(i);
  }

  int n_diagnostics = 0;
  int n_fitted = 0;
  std::vector<orient::ImageSample> samples(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ParsedImage& img = images[i];
    n_diagnostics += static_cast<int>(img.annotations.diagnostics.size() +
                                      img.predictions.diagnostics.size());
    for (const auto& rec : img.annotations.records) {
      const orient::BoxFit fit = orient::from_vertices(rec.quad);
      if (!fit.exact) ++n_fitted;
      samples[i].ground_truths.push_back(
          {fit.box, class_ids.at(rec.category), rec.difficult});
    }
    for (const auto& rec : img.predictions.records) {
      const orient::BoxFit fit = orient::from_vertices(rec.quad);
      if (!fit.exact) ++n_fitted;
      samples[i].detections.push_back({fit.box, class_ids.at(rec.category), rec.score});
    }
  }
  if (n_diagnostics > 0) {
    std::cerr << "warning: " << n_diagnostics << " malformed line(s) skipped\n";
  }
  if (n_fitted > 0) {
    std::cerr << "note: " << n_fitted
              << " non-rectangular quad(s) converted via min-area rectangle\n";
  }

  // Resolution order: flag > config file > default.
  orient::EvalOptions options;
  if (!flags.config.empty()) options = load_tool_config(flags.config).eval;
  if (flags.iou_threshold) options.iou_threshold = *flags.iou_threshold;
  if (flags.ap_mode) options.ap_mode = orient::ap_mode_from_string(*flags.ap_mode);
  const orient::EvalReport report =
      orient::evaluate_detections(samples, class_names, options);

  json j = orient::report_to_json(report);
  j["invocation"] = {{"command", "eval"},
                     {"gt", flags.gt_dir},
                     {"pred", flags.pred_dir}};
  if (flags.stamp) {
    j["generated_at"] = static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
  }
  const std::string text = orient::render_report_text(report);
  if (!flags.out_dir.empty()) {
    write_text_file(fs::path(flags.out_dir) / "report.json", j.dump(2) + "\n");
    write_text_file(fs::path(flags.out_dir) / "report.txt", text);
  }
  std::cout << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// convert

// Center-form annotation line: cx cy w h theta category difficult
// Center-form prediction line: category score cx cy w h theta

struct CenterAnnotation {
  orient::OrientedBox box;
  std::string category;
  bool difficult = false;
};

struct CenterPrediction {
  orient::OrientedBox box;
  std::string category;
  double score = 0.0;
};

template <typename Record>
std::pair<std::vector<Record>, std::vector<orient::LineDiagnostic>>
parse_centerform(std::istream& in, bool predictions) {
  std::pair<std::vector<Record>, std::vector<orient::LineDiagnostic>> out;
  std::string raw;
  int line_no = 0;
  int data_lines = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    {
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
      }
    }
    if (fields.empty()) continue;
    ++data_lines;
    if (fields.size() != 7) {
      out.second.push_back({line_no, "expected 7 fields, got " +
                                         std::to_string(fields.size())});
      continue;
    }
    const int num_base = predictions ? 2 : 0;
    double nums[5];
    bool ok = true;
    for (int k = 0; k < 5; ++k) {
      double v = 0.0;
      const std::string_view tok = fields[static_cast<std::size_t>(num_base + k)];
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        ok = false;
        break;
      }
      nums[k] = v;
    }
    if (!ok) {
      out.second.push_back({line_no, "unparseable number"});
      continue;
    }
    Record rec;
    try {
      rec.box = orient::make_oriented_box(nums[0], nums[1], nums[2], nums[3], nums[4]);
    } catch (const orient::InvalidBoxError& e) {
      out.second.push_back({line_no, e.what()});
      continue;
    }
    if constexpr (std::is_same_v<Record, CenterPrediction>) {
      rec.category = std::string(fields[0]);
      double score = 0.0;
      const std::string_view tok = fields[1];
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), score);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || score < 0.0 ||
          score > 1.0) {
        out.second.push_back({line_no, "score must be in [0, 1]"});
        continue;
      }
      rec.score = score;
    } else {
      rec.category = std::string(fields[5]);
      if (fields[6] == "0") {
        rec.difficult = false;
      } else if (fields[6] == "1") {
        rec.difficult = true;
      } else {
        out.second.push_back({line_no, "difficult flag must be 0 or 1"});
        continue;
      }
    }
    out.first.push_back(std::move(rec));
  }
  if (data_lines > 0 && out.first.empty()) {
    throw orient::FormatError("no parseable records");
  }
  return out;
}

struct ConvertFlags {
  std::string input;
  std::string output;
  std::string to;          // "centerform" or "vertices"
  std::string kind = "annotations";  // or "predictions"
};

int cmd_convert(const ConvertFlags& flags) {
  if (flags.to != "centerform" && flags.to != "vertices") {
    throw orient::ConfigError("--to must be centerform or vertices");
  }
  if (flags.kind != "annotations" && flags.kind != "predictions") {
    throw orient::ConfigError("--kind must be annotations or predictions");
  }
  std::ifstream in(flags.input);
  if (!in) throw orient::IoError("cannot open " + flags.input);
  std::string out_text;
  int n_fitted = 0;
  int n_skipped = 0;

  const auto fmt = orient::format_coordinate;
  if (flags.to == "centerform") {
    if (flags.kind == "annotations") {
      const orient::AnnotationParse parsed = orient::parse_annotation_file(in);
      n_skipped = static_cast<int>(parsed.diagnostics.size());
      for (const orient::AnnotationRecord& rec : parsed.records) {
        const orient::BoxFit fit = orient::from_vertices(rec.quad);
        if (!fit.exact) ++n_fitted;
        out_text += fmt(fit.box.cx) + ' ' + fmt(fit.box.cy) + ' ' + fmt(fit.box.w) +
                    ' ' + fmt(fit.box.h) + ' ' + fmt(fit.box.theta) + ' ' +
                    rec.category + ' ' + (rec.difficult ? '1' : '0') + '\n';
      }
    } else {
      const orient::PredictionParse parsed = orient::parse_prediction_file(in);
      n_skipped = static_cast<int>(parsed.diagnostics.size());
      for (const orient::PredictionRecord& rec : parsed.records) {
        const orient::BoxFit fit = orient::from_vertices(rec.quad);
        if (!fit.exact) ++n_fitted;
        out_text += rec.category + ' ' + fmt(rec.score) + ' ' + fmt(fit.box.cx) +
                    ' ' + fmt(fit.box.cy) + ' ' + fmt(fit.box.w) + ' ' +
                    fmt(fit.box.h) + ' ' + fmt(fit.box.theta) + '\n';
      }
    }
  } else {
    if (flags.kind == "annotations") {
      const auto [records, diagnostics] = parse_centerform<CenterAnnotation>(in, false);
      n_skipped = static_cast<int>(diagnostics.size());
      std::vector<orient::AnnotationRecord> out_records;
      for (const CenterAnnotation& rec : records) {
        out_records.push_back(
            {orient::to_vertices(rec.box), rec.category, rec.difficult});
      }
      out_text = orient::write_annotation_string(out_records);
    } else {
      const auto [records, diagnostics] = parse_centerform<CenterPrediction>(in, true);
      n_skipped = static_cast<int>(diagnostics.size());
      std::vector<orient::PredictionRecord> out_records;
      for (const CenterPrediction& rec : records) {
        out_records.push_back({orient::to_vertices(rec.box), rec.category, rec.score});
      }
      out_text = orient::write_prediction_string(out_records);
    }
  }
  if (n_skipped > 0) {
    std::cerr << "warning: " << n_skipped << " malformed line(s) skipped\n";
  }
  if (n_fitted > 0) {
    std::cerr << "note: " << n_fitted
              << " non-rectangular quad(s) converted via min-area rectangle\n";
  }
  write_text_file(flags.output, out_text);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// nms

struct NmsFlags {
  std::string input;
  std::string output;
  std::string config;
  std::optional<double> iou_threshold;
  std::optional<double> score_threshold;
  std::optional<bool> class_aware;
};

int cmd_nms(const NmsFlags& flags) {
  double iou_threshold = 0.5;
  double score_threshold = 0.0;
  bool class_aware = true;
  if (!flags.config.empty()) {
    const ToolConfig cfg = load_tool_config(flags.config);
    iou_threshold = cfg.nms_iou_threshold;
    score_threshold = cfg.nms_score_threshold;
    class_aware = cfg.class_aware;
  }
  if (flags.iou_threshold) iou_threshold = *flags.iou_threshold;
  if (flags.score_threshold) score_threshold = *flags.score_threshold;
  if (flags.class_aware) class_aware = *flags.class_aware;
  const orient::PredictionParse parsed = orient::parse_prediction_file(fs::path(flags.input));
  if (!parsed.diagnostics.empty()) {
    std::cerr << "warning: " << parsed.diagnostics.size()
              << " malformed line(s) skipped\n";
  }
  std::map<std::string, int> class_ids;
  for (const orient::PredictionRecord& rec : parsed.records) {
    class_ids.emplace(rec.category, 0);
  }
  int next_id = 0;
  for (auto& [name, id] : class_ids) id = next_id++;

  std::vector<orient::Detection> dets;
  dets.reserve(parsed.records.size());
  for (const orient::PredictionRecord& rec : parsed.records) {
    dets.push_back({orient::from_vertices(rec.quad).box, class_ids.at(rec.category),
                    rec.score});
  }
  const std::vector<std::size_t> kept =
      orient::rotated_nms_indices(dets, iou_threshold, score_threshold, class_aware);
  std::vector<orient::PredictionRecord> out_records;
  out_records.reserve(kept.size());
  for (std::size_t idx : kept) out_records.push_back(parsed.records[idx]);
  write_text_file(flags.output, orient::write_prediction_string(out_records));
  std::cout << "kept " << out_records.size() << " of " << parsed.records.size()
            << " predictions\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen / sweep

struct SweepFlags {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> iou_threshold;
  std::optional<std::string> ap_mode;
  int jobs = 1;
  bool stamp = false;
};

void write_corpus(const fs::path& out_dir, const std::string& tag,
                  const std::vector<orient::TrialScene>& scenes,
                  const std::vector<std::string>& class_set) {
  for (std::size_t trial = 0; trial < scenes.size(); ++trial) {
    char name[32];
    std::snprintf(name, sizeof(name), "trial_%05zu.txt", trial);
    std::vector<orient::AnnotationRecord> annotations;
    for (const orient::GroundTruth& gt : scenes[trial].ground_truths) {
      annotations.push_back({orient::to_vertices(gt.box),
                             class_set[static_cast<std::size_t>(gt.class_id)],
                             gt.difficult});
    }
    std::vector<orient::PredictionRecord> predictions;
    for (const orient::Detection& det : scenes[trial].detections) {
      predictions.push_back({orient::to_vertices(det.box),
                             class_set[static_cast<std::size_t>(det.class_id)],
                             det.score});
    }
    write_text_file(out_dir / tag / "annotations" / name,
                    orient::write_annotation_string(annotations));
    write_text_file(out_dir / tag / "predictions" / name,
                    orient::write_prediction_string(predictions));
  }
}

int cmd_sweep(const SweepFlags& flags, bool write_reports) {
  ToolConfig cfg = load_tool_config(flags.config);
  if (flags.seed) cfg.scene.rng_seed = *flags.seed;
  if (flags.iou_threshold) cfg.eval.iou_threshold = *flags.iou_threshold;
  if (flags.ap_mode) cfg.eval.ap_mode = orient::ap_mode_from_string(*flags.ap_mode);

  orient::SweepOptions options;
  options.trials = cfg.trials;
  options.eval = cfg.eval;
  options.nms_iou_threshold = cfg.nms_iou_threshold;
  options.nms_score_threshold = cfg.nms_score_threshold;
  options.class_aware = cfg.class_aware;
  options.jobs = flags.jobs;
  options.keep_scenes = true;
  options.effects = cfg.effects;

  const orient::SweepResult result =
      orient::run_sweep(cfg.scene, cfg.conditions, cfg.detector, options);

  const fs::path out_dir(flags.out_dir);
  for (const auto& [tag, scenes] : result.scenes) {
    write_corpus(out_dir, tag, scenes, cfg.scene.class_set);
  }

  const std::string table =
      orient::render_comparison_table(result.by_condition, cfg.conditions);
  if (write_reports) {
    json j = orient::report_to_json(result.combined);
    j["resolved_config"] = config_echo(cfg);
    j["invocation"] = {{"command", "sweep"}, {"config", flags.config}};
    if (flags.stamp) {
      j["generated_at"] = static_cast<std::int64_t>(
          std::chrono::duration_cast<std::chrono::seconds>(
              std::chrono::system_clock::now().time_since_epoch())
              .count());
    }
    std::string text = table + "\n";
    for (const auto& [tag, report] : result.by_condition) {
      text += "== " + tag + " ==\n" + orient::render_report_text(report) + "\n";
    }
    write_text_file(out_dir / "report.json", j.dump(2) + "\n");
    write_text_file(out_dir / "report.txt", text);
  }
  std::cout << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(int n_pairs, int iterations) {
  if (n_pairs < 1 || iterations < 1) {
    throw orient::ConfigError("bench requires positive pair and iteration counts");
  }
  orient::detail::Rng rng(12345);
  std::vector<std::pair<orient::OrientedBox, orient::OrientedBox>> pairs;
  pairs.reserve(static_cast<std::size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) {
    auto random_box = [&] {
      return orient::make_oriented_box(rng.uniform(0, 100), rng.uniform(0, 100),
                                       rng.uniform(5, 60), rng.uniform(5, 60),
                                       rng.uniform(0, 180));
    };
    pairs.emplace_back(random_box(), random_box());
  }
  double checksum = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int it = 0; it < iterations; ++it) {
    for (const auto& [a, b] : pairs) checksum += orient::rotated_iou(a, b);
  }
  const auto stop = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(stop - start).count();
  const double total = static_cast<double>(n_pairs) * iterations;
  std::printf("%.0f rotated IoU evaluations in %.3f s: %.3g evals/s (checksum %.6f)\n",
              total, seconds, total / seconds, checksum);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oriented-box detection toolkit"};
  app.require_subcommand(1);

  EvalFlags eval_flags;
  CLI::App* eval = app.add_subcommand("eval", "evaluate predictions against annotations");
  eval->add_option("--gt", eval_flags.gt_dir, "annotation directory")->required();
  eval->add_option("--pred", eval_flags.pred_dir, "prediction directory")->required();
  eval->add_option("--out", eval_flags.out_dir, "report output directory");
  eval->add_option("--config", eval_flags.config, "config file with an eval section");
  eval->add_option("--iou-threshold", eval_flags.iou_threshold, "match IoU threshold");
  eval->add_option("--ap-mode", eval_flags.ap_mode, "all_points or eleven_point (11pt)");
  eval->add_option("--jobs", eval_flags.jobs, "parse worker count");
  eval->add_flag("--stamp", eval_flags.stamp, "embed a timestamp in report.json");

  ConvertFlags convert_flags;
  CLI::App* convert = app.add_subcommand("convert", "convert between vertex and center forms");
  convert->add_option("--input", convert_flags.input)->required();
  convert->add_option("--output", convert_flags.output)->required();
  convert->add_option("--to", convert_flags.to, "centerform or vertices")->required();
  convert->add_option("--kind", convert_flags.kind, "annotations or predictions");

  NmsFlags nms_flags;
  CLI::App* nms = app.add_subcommand("nms", "rotated non-maximum suppression");
  nms->add_option("--input", nms_flags.input)->required();
  nms->add_option("--output", nms_flags.output)->required();
  nms->add_option("--config", nms_flags.config, "config file with an nms section");
  nms->add_option("--iou-threshold", nms_flags.iou_threshold);
  nms->add_option("--score-threshold", nms_flags.score_threshold);
  nms->add_option("--class-aware", nms_flags.class_aware);

  SweepFlags sweep_flags;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic corpus");
  CLI::App* sweep = app.add_subcommand("sweep", "generate, detect, and evaluate a condition sweep");
  for (CLI::App* cmd : {gen, sweep}) {
    cmd->add_option("--config", sweep_flags.config, "sweep config file")->required();
    cmd->add_option("--out", sweep_flags.out_dir, "output directory")->required();
    cmd->add_option("--seed", sweep_flags.seed, "master seed override");
    cmd->add_option("--iou-threshold", sweep_flags.iou_threshold);
    cmd->add_option("--ap-mode", sweep_flags.ap_mode);
    cmd->add_option("--jobs", sweep_flags.jobs, "trial worker count");
    cmd->add_flag("--stamp", sweep_flags.stamp);
  }

  int bench_pairs = 1000;
  int bench_iterations = 200;
  CLI::App* bench = app.add_subcommand("bench", "rotated IoU throughput benchmark");
  bench->add_option("--pairs", bench_pairs);
  bench->add_option("--iterations", bench_iterations);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_flags);
    if (convert->parsed()) return cmd_convert(convert_flags);
    if (nms->parsed()) return cmd_nms(nms_flags);
    if (gen->parsed()) return cmd_sweep(sweep_flags, false);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, true);
    if (bench->parsed()) return cmd_bench(bench_pairs, bench_iterations);
  } catch (const orient::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const orient::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const orient::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const orient::EmptyEvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const orient::InvalidBoxError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const orient::InvalidPolygonError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const orient::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitConfig;
}
