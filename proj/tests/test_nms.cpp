// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#include "orient/nms.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.hpp"

using orient::Detection;
using orient::make_oriented_box;
using orient::rotated_nms;
using orient::rotated_nms_indices;

namespace {

std::vector<Detection> random_scene(testutil::TestRng& rng, int max_dets) {
  std::vector<Detection> dets;
  const int n = rng.uniform_int(0, max_dets);
  for (int i = 0; i < n; ++i) {
    Detection d;
    d.box = testutil::random_box(rng, 80.0, 4.0, 40.0);
    d.class_id = rng.uniform_int(0, 2);
    d.score = rng.uniform(0.0, 1.0);
    dets.push_back(d);
  }
  return dets;
}

TEST(RotatedNms, DuplicateBoxKeepsHigherScore) {
  const auto box = make_oriented_box(10, 10, 4, 2, 30);
  const std::vector<Detection> dets = {{box, 0, 0.9}, {box, 0, 0.8}};
  const auto kept = rotated_nms(dets, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].score, 0.9);
}

TEST(RotatedNms, DisjointAllSurvive) {
  std::vector<Detection> dets;
  for (int i = 0; i < 5; ++i) {
    dets.push_back({make_oriented_box(20.0 * i, 0, 4, 2, 15.0 * i), 0, 0.5 + 0.05 * i});
  }
  EXPECT_EQ(rotated_nms(dets, 0.3).size(), dets.size());
}

TEST(RotatedNms, ScoreThresholdFilters) {
  const auto box_a = make_oriented_box(0, 0, 4, 2, 0);
  const auto box_b = make_oriented_box(50, 0, 4, 2, 0);
  const std::vector<Detection> dets = {{box_a, 0, 0.9}, {box_b, 0, 0.2}};
  const auto kept = rotated_nms(dets, 0.5, 0.25);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].score, 0.9);
}

TEST(RotatedNms, ClassAwareKeepsCrossClassOverlap) {
  const auto box = make_oriented_box(0, 0, 4, 2, 10);
  const std::vector<Detection> dets = {{box, 0, 0.9}, {box, 1, 0.8}};
  EXPECT_EQ(rotated_nms(dets, 0.5, 0.0, true).size(), 2u);
  EXPECT_EQ(rotated_nms(dets, 0.5, 0.0, false).size(), 1u);
}

TEST(RotatedNms, RejectsBadThresholds) {
  EXPECT_THROW(rotated_nms({}, -0.1), orient::ConfigError);
  EXPECT_THROW(rotated_nms({}, 1.5), orient::ConfigError);
  EXPECT_THROW(rotated_nms({}, 0.5, -1.0), orient::ConfigError);
}

TEST(RotatedNms, MatchesBruteForceReference) {
  testutil::TestRng rng(4242);
  for (int scene = 0; scene < 200; ++scene) {
    const std::vector<Detection> dets = random_scene(rng, 50);
    const double iou_thr = rng.uniform(0.1, 0.9);
    const double score_thr = rng.uniform(0.0, 0.3);
    const bool class_aware = rng.uniform01() < 0.5;
    const auto expected = testutil::reference_nms(dets, iou_thr, score_thr, class_aware);
    const auto actual = rotated_nms_indices(dets, iou_thr, score_thr, class_aware);
    EXPECT_EQ(actual, expected) << "scene " << scene;
  }
}

TEST(RotatedNms, Idempotent) {
  testutil::TestRng rng(77);
  for (int scene = 0; scene < 50; ++scene) {
    const std::vector<Detection> dets = random_scene(rng, 30);
    const auto once = rotated_nms(dets, 0.4);
    const auto twice = rotated_nms(once, 0.4);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      EXPECT_EQ(once[i].score, twice[i].score);
      EXPECT_EQ(once[i].class_id, twice[i].class_id);
      EXPECT_EQ(once[i].box.cx, twice[i].box.cx);
    }
  }
}

TEST(RotatedNms, OutputSortedSubsetWithPairwiseBound) {
  testutil::TestRng rng(99);
  for (int scene = 0; scene < 50; ++scene) {
    const std::vector<Detection> dets = random_scene(rng, 40);
    const double iou_thr = 0.35;
    const auto kept = rotated_nms(dets, iou_thr);
    EXPECT_LE(kept.size(), dets.size());
    for (std::size_t i = 1; i < kept.size(); ++i) {
      EXPECT_GE(kept[i - 1].score, kept[i].score);
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i].class_id != kept[j].class_id) continue;
        EXPECT_LE(orient::rotated_iou(kept[i].box, kept[j].box), iou_thr);
      }
    }
  }
}

// Input order must not matter when scores are distinct.
TEST(RotatedNms, PermutationStable) {
  testutil::TestRng rng(123);
  std::vector<Detection> dets = random_scene(rng, 30);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    dets[i].score = 0.01 * static_cast<double>(i + 1);  // distinct scores
  }
  const auto baseline = rotated_nms(dets, 0.4);
  std::vector<Detection> shuffled = dets;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1],
              shuffled[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  }
  const auto permuted = rotated_nms(shuffled, 0.4);
  ASSERT_EQ(baseline.size(), permuted.size());
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    EXPECT_EQ(baseline[i].score, permuted[i].score);
  }
}

}  // namespace
