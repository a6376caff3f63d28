// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orient/errors.hpp"
#include "orient/evaluator.hpp"
#include "orient/geometry.hpp"
#include "orient/nms.hpp"
#include "orient/parallel.hpp"

namespace orient {

// Box-level scene recipe. Object sizes are long-edge lengths before any
// camera-distance scaling; aspect is short/long in (0, 1].
struct SceneConfig {
  std::uint64_t rng_seed = 1;
  double extent_w = 1024.0;
  double extent_h = 1024.0;
  int min_objects = 8;
  int max_objects = 16;
  double min_size = 16.0;
  double max_size = 64.0;
  double min_aspect = 0.3;
  double max_aspect = 1.0;
  std::vector<std::string> class_set = {"car", "truck", "van"};
  double max_overlap = 0.05;          // max allowed GT-GT IoU
  double reference_distance = 70.0;   // camera distance with scale factor 1
};

enum class ConditionKind { kCamera, kLight, kWeather, kSensor };

inline std::string to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::kCamera: return "camera";
    case ConditionKind::kLight: return "light";
    case ConditionKind::kWeather: return "weather";
    case ConditionKind::kSensor: return "sensor";
  }
  return "camera";
}

inline ConditionKind condition_kind_from_string(const std::string& s) {
  if (s == "camera") return ConditionKind::kCamera;
  if (s == "light") return ConditionKind::kLight;
  if (s == "weather") return ConditionKind::kWeather;
  if (s == "sensor") return ConditionKind::kSensor;
  throw ConfigError("unknown condition kind: " + s);
}

// One point of a condition sweep. Parameter meaning by kind:
//   camera  - distance in meters (> 0); object sizes scale with
//             reference_distance / parameter
//   light   - illumination factor in (0, 1], 1 = nominal
//   weather - rain intensity in [0, 1]
//   sensor  - sensor noise level in [0, 1]
struct ConditionSpec {
  ConditionKind kind = ConditionKind::kLight;
  double parameter = 1.0;
  std::string label;  // optional; derived from kind and parameter when empty
};

inline std::string condition_tag(const ConditionSpec& cond) {
  if (!cond.label.empty()) return cond.label;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%g", to_string(cond.kind).c_str(),
                cond.parameter);
  return buf;
}

inline void validate(const SceneConfig& cfg) {
  if (!(cfg.extent_w > 0.0) || !(cfg.extent_h > 0.0)) {
    throw ConfigError("scene extent must be positive");
  }
  if (cfg.min_objects < 0 || cfg.max_objects < cfg.min_objects) {
    throw ConfigError("scene object range must satisfy 0 <= min <= max");
  }
  if (!(cfg.min_size > 0.0) || !(cfg.max_size >= cfg.min_size)) {
    throw ConfigError("scene size range must be positive and ordered");
  }
  if (!(cfg.min_aspect > 0.0) || cfg.min_aspect > cfg.max_aspect ||
      cfg.max_aspect > 1.0) {
    throw ConfigError("scene aspect range must satisfy 0 < min <= max <= 1");
  }
  if (cfg.class_set.empty()) {
    throw ConfigError("scene class set must be nonempty");
  }
  if (!(cfg.max_overlap >= 0.0) || cfg.max_overlap >= 1.0) {
    throw ConfigError("scene max_overlap must be in [0, 1)");
  }
  if (!(cfg.reference_distance > 0.0)) {
    throw ConfigError("scene reference_distance must be positive");
  }
}

inline void validate(const ConditionSpec& cond) {
  switch (cond.kind) {
    case ConditionKind::kCamera:
      if (!(cond.parameter > 0.0)) {
        throw ConfigError("camera distance must be positive");
      }
      break;
    case ConditionKind::kLight:
      if (!(cond.parameter > 0.0) || cond.parameter > 1.0) {
        throw ConfigError("light factor must be in (0, 1]");
      }
      break;
    case ConditionKind::kWeather:
    case ConditionKind::kSensor:
      if (!(cond.parameter >= 0.0) || cond.parameter > 1.0) {
        throw ConfigError("weather/sensor parameter must be in [0, 1]");
      }
      break;
  }
}

// Stochastic detector error model. The default-constructed model is the
// identity detector: no misses, no false positives, no jitter, score 1.
struct DetectorModel {
  double miss_rate = 0.0;          // per-object drop probability
  double fp_rate = 0.0;            // expected false positives per scene
  double center_jitter_sigma = 0.0;  // pixels, per axis
  double size_jitter_sigma = 0.0;    // relative, per axis
  double angle_jitter_sigma = 0.0;   // degrees
  double tp_score_mean = 1.0;
  double tp_score_sigma = 0.0;
  double fp_score_mean = 0.25;
  double fp_score_sigma = 0.1;
  double class_confusion = 0.0;    // probability of a wrong class label
};

inline void validate(const DetectorModel& m) {
  const bool rates_ok = m.miss_rate >= 0.0 && m.miss_rate <= 1.0 &&
                        m.class_confusion >= 0.0 && m.class_confusion <= 1.0 &&
                        m.fp_rate >= 0.0;
  const bool sigmas_ok = m.center_jitter_sigma >= 0.0 &&
                         m.size_jitter_sigma >= 0.0 &&
                         m.angle_jitter_sigma >= 0.0 &&
                         m.tp_score_sigma >= 0.0 && m.fp_score_sigma >= 0.0;
  if (!rates_ok || !sigmas_ok) {
    throw ConfigError("detector model rates must be in range, sigmas >= 0");
  }
}

// How each condition perturbs the detector model. These are declared
// defaults for the synthetic benchmark, not measured constants; override
// them to encode a different degradation hypothesis.
struct ConditionEffects {
  double rain_miss = 0.25;           // added miss rate per unit rain
  double rain_center_jitter = 2.0;   // added center sigma (px) per unit rain
  double rain_size_jitter = 0.05;    // added relative size sigma per unit rain
  double rain_angle_jitter = 5.0;    // added angle sigma (deg) per unit rain
  double light_score_widen = 0.15;   // added score sigma per unit dimming
  double sensor_confusion = 0.5;     // added class confusion per unit noise
};

// Applies the documented condition-to-error mapping: rain raises the miss
// rate and all geometric jitters, low light widens the score distributions,
// sensor noise raises class confusion, camera distance acts on object sizes
// in generate_scene and leaves the detector untouched.
inline DetectorModel apply_condition(const DetectorModel& model,
                                     const ConditionSpec& cond,
                                     const ConditionEffects& fx = {}) {
  validate(model);
  validate(cond);
  DetectorModel out = model;
  switch (cond.kind) {
    case ConditionKind::kCamera:
      break;
    case ConditionKind::kLight: {
      const double dim = 1.0 - cond.parameter;
      out.tp_score_sigma += fx.light_score_widen * dim;
      out.fp_score_sigma += fx.light_score_widen * dim;
      break;
    }
    case ConditionKind::kWeather: {
      const double rain = cond.parameter;
      out.miss_rate = std::min(1.0, out.miss_rate + fx.rain_miss * rain);
      out.center_jitter_sigma += fx.rain_center_jitter * rain;
      out.size_jitter_sigma += fx.rain_size_jitter * rain;
      out.angle_jitter_sigma += fx.rain_angle_jitter * rain;
      break;
    }
    case ConditionKind::kSensor: {
      out.class_confusion =
          std::min(1.0, out.class_confusion + fx.sensor_confusion * cond.parameter);
      break;
    }
  }
  return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_bytes(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Deterministic PRNG with explicit samplers so generated corpora do not
// depend on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  double normal(double mu, double sigma) {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    return mu + sigma * z;
  }

  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

// Seed for one trial of one condition: reproducible and order-independent,
// so trials can run on any number of workers.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view tag,
                                int trial_index, std::uint64_t stream = 0) {
  std::uint64_t h = detail::splitmix64(master_seed);
  h = detail::splitmix64(h ^ detail::hash_bytes(tag));
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(trial_index));
  return detail::splitmix64(h ^ stream);
}

// Samples a scene of non-overlapping ground-truth boxes, fully inside the
// image extent. Camera conditions shrink sizes with distance; the result is
// a pure function of (cfg, cond, seed).
inline std::vector<GroundTruth> generate_scene(const SceneConfig& cfg,
                                               const ConditionSpec& cond,
                                               std::uint64_t seed) {
  validate(cfg);
  validate(cond);
  detail::Rng rng(seed);
  const double scale = cond.kind == ConditionKind::kCamera
                           ? cfg.reference_distance / cond.parameter
                           : 1.0;
  const int n_objects = rng.uniform_int(cfg.min_objects, cfg.max_objects);
  const int n_classes = static_cast<int>(cfg.class_set.size());
  constexpr int kMaxRetries = 200;

  std::vector<GroundTruth> scene;
  scene.reserve(static_cast<std::size_t>(n_objects));
  for (int i = 0; i < n_objects; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
      const double long_edge = rng.uniform(cfg.min_size, cfg.max_size) * scale;
      const double short_edge = long_edge * rng.uniform(cfg.min_aspect, cfg.max_aspect);
      const double theta = rng.uniform(0.0, 180.0);
      const double margin = 0.5 * std::hypot(long_edge, short_edge);
      if (2.0 * margin >= cfg.extent_w || 2.0 * margin >= cfg.extent_h) {
        throw GenerationError(
            "object does not fit the extent: long edge " +
            std::to_string(long_edge) + " in " + std::to_string(cfg.extent_w) +
            "x" + std::to_string(cfg.extent_h));
      }
      const double cx = rng.uniform(margin, cfg.extent_w - margin);
      const double cy = rng.uniform(margin, cfg.extent_h - margin);
      GroundTruth gt;
      gt.box = make_oriented_box(cx, cy, long_edge, short_edge, theta);
      gt.class_id = rng.uniform_int(0, n_classes - 1);
      gt.difficult = false;
      bool overlaps = false;
      for (const GroundTruth& other : scene) {
        if (rotated_iou(gt.box, other.box) > cfg.max_overlap) {
          overlaps = true;
          break;
        }
      }
      if (!overlaps) {
        scene.push_back(gt);
        placed = true;
      }
    }
    if (!placed) {
      throw GenerationError(
          "max_overlap " + std::to_string(cfg.max_overlap) +
          " infeasible after " + std::to_string(kMaxRetries) +
          " retries at object " + std::to_string(i));
    }
  }
  return scene;
}

inline std::vector<GroundTruth> generate_scene(const SceneConfig& cfg,
                                               const ConditionSpec& cond) {
  return generate_scene(cfg, cond, cfg.rng_seed);
}

// Runs the parameterized error model over a scene: drops, jitters, relabels
// and scores the ground truths, then adds Poisson false positives placed
// like scene objects. Deterministic per seed. With the default model the
// output equals the input boxes with score 1.
inline std::vector<Detection> mock_detect(std::span<const GroundTruth> gts,
                                          const DetectorModel& model,
                                          const ConditionSpec& cond,
                                          std::uint64_t seed,
                                          const SceneConfig& cfg,
                                          const ConditionEffects& fx = {}) {
  validate(cfg);
  const DetectorModel eff = apply_condition(model, cond, fx);
  detail::Rng rng(seed);
  const int n_classes = static_cast<int>(cfg.class_set.size());
  std::vector<Detection> dets;
  dets.reserve(gts.size());

  for (const GroundTruth& gt : gts) {
    if (rng.uniform01() < eff.miss_rate) continue;
    Detection det;
    const double cx = gt.box.cx + rng.normal(0.0, eff.center_jitter_sigma);
    const double cy = gt.box.cy + rng.normal(0.0, eff.center_jitter_sigma);
    const double wf = std::max(0.05, 1.0 + rng.normal(0.0, eff.size_jitter_sigma));
    const double hf = std::max(0.05, 1.0 + rng.normal(0.0, eff.size_jitter_sigma));
    const double theta = gt.box.theta + rng.normal(0.0, eff.angle_jitter_sigma);
    det.box = make_oriented_box(cx, cy, gt.box.w * wf, gt.box.h * hf, theta);
    det.class_id = gt.class_id;
    if (rng.uniform01() < eff.class_confusion && n_classes > 1) {
      const int shift = rng.uniform_int(1, n_classes - 1);
      det.class_id = (gt.class_id + shift) % n_classes;
    }
    det.score = std::clamp(rng.normal(eff.tp_score_mean, eff.tp_score_sigma), 0.0, 1.0);
    dets.push_back(det);
  }

  const double scale = cond.kind == ConditionKind::kCamera
                           ? cfg.reference_distance / cond.parameter
                           : 1.0;
  const int n_fp = rng.poisson(eff.fp_rate);
  for (int i = 0; i < n_fp; ++i) {
    const double long_edge = rng.uniform(cfg.min_size, cfg.max_size) * scale;
    const double short_edge = long_edge * rng.uniform(cfg.min_aspect, cfg.max_aspect);
    const double theta = rng.uniform(0.0, 180.0);
    const double margin = 0.5 * std::hypot(long_edge, short_edge);
    if (2.0 * margin >= cfg.extent_w || 2.0 * margin >= cfg.extent_h) continue;
    Detection det;
    det.box = make_oriented_box(rng.uniform(margin, cfg.extent_w - margin),
                                rng.uniform(margin, cfg.extent_h - margin),
                                long_edge, short_edge, theta);
    det.class_id = rng.uniform_int(0, n_classes - 1);
    det.score = std::clamp(rng.normal(eff.fp_score_mean, eff.fp_score_sigma), 0.0, 1.0);
    dets.push_back(det);
  }
  return dets;
}

struct TrialScene {
  std::vector<GroundTruth> ground_truths;
  std::vector<Detection> detections;  // after NMS
};

struct SweepOptions {
  int trials = 1;
  EvalOptions eval;
  double nms_iou_threshold = 0.5;
  double nms_score_threshold = 0.0;
  bool class_aware = true;
  int jobs = 1;
  bool keep_scenes = false;  // retain per-trial boxes (for corpus export)
  ConditionEffects effects;
};

struct SweepResult {
  std::map<std::string, EvalReport> by_condition;
  EvalReport combined;  // category_report over by_condition
  std::map<std::string, std::vector<TrialScene>> scenes;  // when keep_scenes
};

// Full sweep protocol: per condition, `trials` scenes are generated,
// detected, suppressed, and evaluated into one report per condition plus a
// combined comparison report. Per-trial seeds are derived from
// (rng_seed, tag, trial), so results do not depend on scheduling.
inline SweepResult run_sweep(const SceneConfig& cfg,
                             std::span<const ConditionSpec> conditions,
                             const DetectorModel& model,
                             const SweepOptions& options = {}) {
  validate(cfg);
  validate(model);
  if (conditions.empty()) {
    throw ConfigError("sweep requires at least one condition");
  }
  if (options.trials < 1) {
    throw ConfigError("sweep requires at least one trial");
  }
  std::vector<std::string> tags;
  tags.reserve(conditions.size());
  for (const ConditionSpec& cond : conditions) {
    validate(cond);
    tags.push_back(condition_tag(cond));
  }
  for (std::size_t i = 0; i < tags.size(); ++i) {
    for (std::size_t j = i + 1; j < tags.size(); ++j) {
      if (tags[i] == tags[j]) {
        throw ConfigError("duplicate condition tag: " + tags[i]);
      }
    }
  }

  constexpr std::uint64_t kSceneStream = 0x5CE4E5EEDULL;
  constexpr std::uint64_t kDetectStream = 0xDE7EC7ULL;
  const int n_conditions = static_cast<int>(conditions.size());
  const int n_tasks = n_conditions * options.trials;
  std::vector<TrialScene> trials(static_cast<std::size_t>(n_tasks));
  parallel_for(n_tasks, options.jobs, [&](int task) {
    const int ci = task / options.trials;
    const int trial = task % options.trials;
    const ConditionSpec& cond = conditions[static_cast<std::size_t>(ci)];
    const std::string& tag = tags[static_cast<std::size_t>(ci)];
    TrialScene& slot = trials[static_cast<std::size_t>(task)];
    slot.ground_truths =
        generate_scene(cfg, cond, trial_seed(cfg.rng_seed, tag, trial, kSceneStream));
    const std::vector<Detection> raw =
        mock_detect(slot.ground_truths, model, cond,
                    trial_seed(cfg.rng_seed, tag, trial, kDetectStream), cfg,
                    options.effects);
    slot.detections = rotated_nms(raw, options.nms_iou_threshold,
                                  options.nms_score_threshold, options.class_aware);
  });

  SweepResult result;
  for (int ci = 0; ci < n_conditions; ++ci) {
    std::vector<ImageSample> samples;
    samples.reserve(static_cast<std::size_t>(options.trials));
    for (int trial = 0; trial < options.trials; ++trial) {
      TrialScene& slot = trials[static_cast<std::size_t>(ci * options.trials + trial)];
      samples.push_back({slot.ground_truths, slot.detections});
      if (options.keep_scenes) {
        result.scenes[tags[static_cast<std::size_t>(ci)]].push_back(std::move(slot));
      }
    }
    result.by_condition[tags[static_cast<std::size_t>(ci)]] =
        evaluate_detections(samples, cfg.class_set, options.eval);
  }
  result.combined = category_report(result.by_condition);
  return result;
}

}  // namespace orient
