// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "orient/errors.hpp"
#include "orient/geometry.hpp"

namespace orient {

struct Detection {
  OrientedBox box;
  int class_id = 0;
  double score = 0.0;
};

// Greedy rotated non-maximum suppression returning the indices of the kept
// detections. Detections below score_threshold are dropped; the rest are
// visited in descending score order (ties keep input order) and kept unless
// a kept detection of the same class (any class when class_aware is false)
// overlaps with IoU above iou_threshold.
inline std::vector<std::size_t> rotated_nms_indices(
    std::span<const Detection> dets, double iou_threshold,
    double score_threshold = 0.0, bool class_aware = true) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("nms iou_threshold must be in [0, 1]");
  }
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw ConfigError("nms score_threshold must be in [0, 1]");
  }
  std::vector<std::size_t> order;
  order.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score >= score_threshold) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const Detection& cand = dets[idx];
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (class_aware && dets[k].class_id != cand.class_id) continue;
      if (rotated_iou(dets[k].box, cand.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

inline std::vector<Detection> rotated_nms(std::span<const Detection> dets,
                                          double iou_threshold,
                                          double score_threshold = 0.0,
                                          bool class_aware = true) {
  std::vector<Detection> kept;
  for (std::size_t idx :
       rotated_nms_indices(dets, iou_threshold, score_threshold, class_aware)) {
    kept.push_back(dets[idx]);
  }
  return kept;
}

}  // namespace orient
