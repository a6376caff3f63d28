// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orient/errors.hpp"
#include "orient/geometry.hpp"
#include "orient/nms.hpp"

namespace orient {

struct GroundTruth {
  OrientedBox box;
  int class_id = 0;
  // Difficult boxes are never counted: detections whose only matches are
  // difficult are dropped from both the TP and FP tallies.
  bool difficult = false;
};

enum class ApMode { kAllPoints, kElevenPoint };

inline std::string to_string(ApMode m) {
  return m == ApMode::kAllPoints ? "all_points" : "eleven_point";
}

struct EvalOptions {
  double iou_threshold = 0.5;
  ApMode ap_mode = ApMode::kAllPoints;
};

// One detection outcome from greedy matching, in descending score order.
// gt_index is set for true positives and for ignored detections (those whose
// only above-threshold overlaps were difficult ground truths); it is empty
// for false positives.
struct MatchRecord {
  int det_index = -1;
  std::optional<int> gt_index;
  bool is_true_positive = false;
};

inline bool is_ignored(const MatchRecord& m) {
  return !m.is_true_positive && m.gt_index.has_value();
}

// Greedy single-image matching: detections are visited by descending score
// (ties keep input order); each claims the unmatched same-class ground truth
// with the highest IoU at or above the threshold. Non-difficult ground
// truths win over difficult ones; difficult ones absorb any number of
// detections without being consumed.
inline std::vector<MatchRecord> match_detections(
    std::span<const Detection> dets, std::span<const GroundTruth> gts,
    double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("match iou_threshold must be in [0, 1]");
  }
  std::vector<int> order(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dets[a].score > dets[b].score; });

  std::vector<bool> claimed(gts.size(), false);
  std::vector<MatchRecord> out;
  out.reserve(dets.size());
  for (int di : order) {
    const Detection& det = dets[static_cast<std::size_t>(di)];
    double best_iou = 0.0;
    int best_gt = -1;
    double best_difficult_iou = 0.0;
    int best_difficult = -1;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      const GroundTruth& gt = gts[gi];
      if (gt.class_id != det.class_id) continue;
      const double iou = rotated_iou(det.box, gt.box);
      if (iou < iou_threshold) continue;
      if (gt.difficult) {
        if (iou > best_difficult_iou || best_difficult < 0) {
          best_difficult_iou = iou;
          best_difficult = static_cast<int>(gi);
        }
      } else if (!claimed[gi]) {
        if (iou > best_iou || best_gt < 0) {
          best_iou = iou;
          best_gt = static_cast<int>(gi);
        }
      }
    }
    if (best_gt >= 0) {
      claimed[static_cast<std::size_t>(best_gt)] = true;
      out.push_back({di, best_gt, true});
    } else if (best_difficult >= 0) {
      out.push_back({di, best_difficult, false});
    } else {
      out.push_back({di, std::nullopt, false});
    }
  }
  return out;
}

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PrCurve {
  int class_id = -1;
  std::vector<PrPoint> points;
};

// One scored detection outcome, the cross-image input to the PR sweep.
struct ScoredOutcome {
  double score = 0.0;
  bool true_positive = false;
  bool ignored = false;
};

// Cumulative TP/FP sweep over score-sorted outcomes. n_gt counts the
// non-difficult ground truths of the class; zero ground truths make the
// class undefined (nullopt), which excludes it from the mean.
inline std::optional<PrCurve> precision_recall_curve(
    std::vector<ScoredOutcome> outcomes, int n_gt, int class_id = -1) {
  if (n_gt < 0) {
    throw ConfigError("n_gt must be nonnegative");
  }
  if (n_gt == 0) return std::nullopt;
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const ScoredOutcome& a, const ScoredOutcome& b) {
                     return a.score > b.score;
                   });
  PrCurve curve;
  curve.class_id = class_id;
  int tp = 0;
  int fp = 0;
  for (const ScoredOutcome& o : outcomes) {
    if (o.ignored) continue;
    if (o.true_positive) {
      ++tp;
    } else {
      ++fp;
    }
    curve.points.push_back({static_cast<double>(tp) / n_gt,
                            static_cast<double>(tp) / (tp + fp)});
  }
  return curve;
}

// Area under the monotonized precision envelope (all-points mode) or the
// mean envelope precision at recalls {0, 0.1, ..., 1.0} (eleven-point mode).
inline double average_precision(const PrCurve& curve, ApMode mode) {
  if (curve.points.empty()) return 0.0;
  if (mode == ApMode::kElevenPoint) {
    double sum = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double r = i / 10.0;
      double p = 0.0;
      for (const PrPoint& pt : curve.points) {
        if (pt.recall >= r) p = std::max(p, pt.precision);
      }
      sum += p;
    }
    return sum / 11.0;
  }
  const std::size_t n = curve.points.size();
  std::vector<double> mrec(n + 2), mpre(n + 2);
  mrec[0] = 0.0;
  mpre[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mrec[i + 1] = curve.points[i].recall;
    mpre[i + 1] = curve.points[i].precision;
  }
  mrec[n + 1] = 1.0;
  mpre[n + 1] = 0.0;
  for (std::size_t i = n + 1; i-- > 0;) {
    mpre[i] = std::max(mpre[i], mpre[i + 1]);
  }
  double ap = 0.0;
  for (std::size_t i = 0; i + 1 < mrec.size(); ++i) {
    if (mrec[i + 1] != mrec[i]) {
      ap += (mrec[i + 1] - mrec[i]) * mpre[i + 1];
    }
  }
  return ap;
}

inline std::optional<double> average_precision(
    const std::optional<PrCurve>& curve, ApMode mode) {
  if (!curve) return std::nullopt;
  return average_precision(*curve, mode);
}

// Arithmetic mean over defined classes.
inline double mean_ap(const std::map<std::string, double>& per_class) {
  if (per_class.empty()) {
    throw EmptyEvaluationError("no class has ground truth; mAP is undefined");
  }
  double sum = 0.0;
  for (const auto& [name, ap] : per_class) sum += ap;
  return sum / static_cast<double>(per_class.size());
}

struct ClassResult {
  int n_gt = 0;          // non-difficult ground truths
  int n_detections = 0;  // detections of the class (ignored ones included)
  double ap = 0.0;
  PrCurve curve;
};

struct EvalReport {
  EvalOptions config;
  int n_images = 0;
  int n_gt = 0;  // non-difficult ground truths across classes
  double map = 0.0;
  std::map<std::string, ClassResult> per_class;
  // Declared classes with zero non-difficult ground truth, excluded from map.
  std::vector<std::string> undefined_classes;
  // Per-condition sub-reports, filled by category_report.
  std::map<std::string, EvalReport> conditions;
};

struct ImageSample {
  std::vector<GroundTruth> ground_truths;
  std::vector<Detection> detections;
};

// Full dataset evaluation: per-image greedy matching, per-class PR curves
// and AP, mean AP over classes with ground truth. class_names maps class_id
// to report keys; ids outside the list are rejected.
inline EvalReport evaluate_detections(std::span<const ImageSample> images,
                                      const std::vector<std::string>& class_names,
                                      const EvalOptions& options = {}) {
  const int n_classes = static_cast<int>(class_names.size());
  if (n_classes == 0) {
    throw EmptyEvaluationError("evaluation requires at least one class name");
  }
  std::vector<std::vector<ScoredOutcome>> outcomes(class_names.size());
  std::vector<int> gt_counts(class_names.size(), 0);
  std::vector<int> det_counts(class_names.size(), 0);

  for (const ImageSample& image : images) {
    for (const GroundTruth& gt : image.ground_truths) {
      if (gt.class_id < 0 || gt.class_id >= n_classes) {
        throw ConfigError("ground truth class_id out of range");
      }
      if (!gt.difficult) ++gt_counts[static_cast<std::size_t>(gt.class_id)];
    }
    const std::vector<MatchRecord> matches = match_detections(
        image.detections, image.ground_truths, options.iou_threshold);
    for (const MatchRecord& m : matches) {
      const Detection& det =
          image.detections[static_cast<std::size_t>(m.det_index)];
      if (det.class_id < 0 || det.class_id >= n_classes) {
        throw ConfigError("detection class_id out of range");
      }
      const auto c = static_cast<std::size_t>(det.class_id);
      ++det_counts[c];
      outcomes[c].push_back({det.score, m.is_true_positive, is_ignored(m)});
    }
  }

  EvalReport report;
  report.config = options;
  report.n_images = static_cast<int>(images.size());
  std::map<std::string, double> defined_aps;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    report.n_gt += gt_counts[c];
    std::optional<PrCurve> curve = precision_recall_curve(
        std::move(outcomes[c]), gt_counts[c], static_cast<int>(c));
    if (!curve) {
      report.undefined_classes.push_back(class_names[c]);
      continue;
    }
    ClassResult result;
    result.n_gt = gt_counts[c];
    result.n_detections = det_counts[c];
    result.ap = average_precision(*curve, options.ap_mode);
    result.curve = std::move(*curve);
    defined_aps[class_names[c]] = result.ap;
    report.per_class[class_names[c]] = std::move(result);
  }
  report.map = mean_ap(defined_aps);
  return report;
}

// Aggregates per-condition reports: every condition keeps its own report
// under `conditions`; headline numbers are per-class means over the
// conditions where the class is defined. A single condition aggregates to
// itself.
inline EvalReport category_report(
    const std::map<std::string, EvalReport>& by_condition) {
  if (by_condition.empty()) {
    throw ConfigError("category_report requires at least one condition");
  }
  EvalReport out;
  out.config = by_condition.begin()->second.config;
  out.conditions = by_condition;

  std::map<std::string, std::pair<double, int>> ap_sums;  // sum, count
  std::map<std::string, std::pair<int, int>> class_counts;  // n_gt, n_det
  std::map<std::string, bool> seen_undefined;
  for (const auto& [tag, report] : by_condition) {
    out.n_images += report.n_images;
    out.n_gt += report.n_gt;
    for (const auto& [name, result] : report.per_class) {
      auto& [sum, count] = ap_sums[name];
      sum += result.ap;
      ++count;
      class_counts[name].first += result.n_gt;
      class_counts[name].second += result.n_detections;
    }
    for (const std::string& name : report.undefined_classes) {
      seen_undefined.emplace(name, true);
    }
  }
  std::map<std::string, double> defined_aps;
  for (const auto& [name, sum_count] : ap_sums) {
    ClassResult result;
    result.ap = sum_count.first / sum_count.second;
    result.n_gt = class_counts[name].first;
    result.n_detections = class_counts[name].second;
    out.per_class[name] = std::move(result);
    defined_aps[name] = out.per_class[name].ap;
  }
  for (const auto& [name, flag] : seen_undefined) {
    if (!ap_sums.count(name)) out.undefined_classes.push_back(name);
  }
  out.map = mean_ap(defined_aps);
  return out;
}

}  // namespace orient
