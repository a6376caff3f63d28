// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#include "orient/geometry.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "test_util.hpp"

using orient::ConvexPolygon;
using orient::make_oriented_box;
using orient::make_vertex_quad;
using orient::OrientedBox;
using orient::rotated_iou;
using orient::to_polygon;
using orient::to_vertices;
using orient::Vec2;
using orient::VertexQuad;

namespace {

bool contains_vertex(const VertexQuad& q, double x, double y, double tol = 1e-9) {
  for (const Vec2& v : q.v) {
    if (std::abs(v.x - x) <= tol && std::abs(v.y - y) <= tol) return true;
  }
  return false;
}

TEST(NormalizeAngle, AlreadyCanonical) {
  const auto d = orient::normalize_angle(0.0, 4.0, 2.0);
  EXPECT_EQ(d.w, 4.0);
  EXPECT_EQ(d.h, 2.0);
  EXPECT_EQ(d.theta, 0.0);
}

TEST(NormalizeAngle, SwapAddsNinety) {
  const auto d = orient::normalize_angle(0.0, 2.0, 4.0);
  EXPECT_EQ(d.w, 4.0);
  EXPECT_EQ(d.h, 2.0);
  EXPECT_EQ(d.theta, 90.0);
}

TEST(NormalizeAngle, Periodic180) {
  const auto d = orient::normalize_angle(185.0, 4.0, 2.0);
  EXPECT_EQ(d.w, 4.0);
  EXPECT_EQ(d.h, 2.0);
  EXPECT_NEAR(d.theta, 5.0, 1e-12);
}

TEST(NormalizeAngle, SquareFoldsToQuarterTurn) {
  const auto d = orient::normalize_angle(135.0, 3.0, 3.0);
  EXPECT_NEAR(d.theta, 45.0, 1e-12);
  EXPECT_LT(orient::normalize_angle(91.0, 3.0, 3.0).theta, 90.0);
}

TEST(NormalizeAngle, RejectsBadDimensions) {
  EXPECT_THROW(orient::normalize_angle(0.0, 0.0, 1.0), orient::InvalidBoxError);
  EXPECT_THROW(orient::normalize_angle(0.0, -1.0, 1.0), orient::InvalidBoxError);
  EXPECT_THROW(orient::normalize_angle(NAN, 1.0, 1.0), orient::InvalidBoxError);
  EXPECT_THROW(orient::normalize_angle(0.0, INFINITY, 1.0), orient::InvalidBoxError);
}

TEST(NormalizeAngle, RandomizedCanonicalForm) {
  testutil::TestRng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const double w = rng.uniform(0.1, 50.0);
    const double h = rng.uniform(0.1, 50.0);
    const double theta = rng.uniform(-1000.0, 1000.0);
    const auto d = orient::normalize_angle(theta, w, h);
    EXPECT_GE(d.w, d.h);
    EXPECT_GE(d.theta, 0.0);
    EXPECT_LT(d.theta, 180.0);
  }
}

TEST(ToVertices, AxisAlignedSquare) {
  const VertexQuad q = to_vertices(make_oriented_box(0, 0, 2, 2, 0));
  EXPECT_TRUE(contains_vertex(q, 1, 1));
  EXPECT_TRUE(contains_vertex(q, 1, -1));
  EXPECT_TRUE(contains_vertex(q, -1, 1));
  EXPECT_TRUE(contains_vertex(q, -1, -1));
}

TEST(ToVertices, RotatedSquare45) {
  const VertexQuad q = to_vertices(make_oriented_box(0, 0, 2, 2, 45));
  const double r = std::sqrt(2.0);
  EXPECT_TRUE(contains_vertex(q, r, 0));
  EXPECT_TRUE(contains_vertex(q, -r, 0));
  EXPECT_TRUE(contains_vertex(q, 0, r));
  EXPECT_TRUE(contains_vertex(q, 0, -r));
}

// Corner coordinates frozen from an independent 2x2 rotation-matrix
// evaluation of (cx=5, cy=3, w=4, h=2, theta=30).
TEST(ToVertices, Rotated30Frozen) {
  const VertexQuad q = to_vertices(make_oriented_box(5, 3, 4, 2, 30));
  EXPECT_TRUE(contains_vertex(q, 6.232050807568878, 4.866025403784438, 1e-12));
  EXPECT_TRUE(contains_vertex(q, 2.7679491924311224, 2.866025403784439, 1e-12));
  EXPECT_TRUE(contains_vertex(q, 3.7679491924311224, 1.1339745962155612, 1e-12));
  EXPECT_TRUE(contains_vertex(q, 7.232050807568878, 3.133974596215561, 1e-12));
}

TEST(ToVertices, CanonicalWindingAndCentroid) {
  testutil::TestRng rng(22);
  for (int i = 0; i < 500; ++i) {
    const OrientedBox b = testutil::random_box(rng);
    const VertexQuad q = to_vertices(b);
    // Counter-clockwise: positive signed area.
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      s += orient::cross(q.v[k], q.v[(k + 1) % 4]);
    }
    EXPECT_GT(s, 0.0);
    // Starts at the lexicographic minimum.
    for (int k = 1; k < 4; ++k) {
      EXPECT_FALSE(orient::lex_less(q.v[k], q.v[0]));
    }
    // Vertex centroid is the center.
    const Vec2 c = (q.v[0] + q.v[1] + q.v[2] + q.v[3]) * 0.25;
    const double scale = std::max(1.0, std::max(std::abs(b.cx), std::abs(b.cy)));
    EXPECT_NEAR(c.x, b.cx, 1e-9 * scale);
    EXPECT_NEAR(c.y, b.cy, 1e-9 * scale);
  }
}

TEST(FromVertices, UnitSquare) {
  const VertexQuad q = make_vertex_quad({{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}});
  const orient::BoxFit fit = orient::from_vertices(q);
  EXPECT_TRUE(fit.exact);
  EXPECT_NEAR(fit.box.cx, 0.0, 1e-12);
  EXPECT_NEAR(fit.box.cy, 0.0, 1e-12);
  EXPECT_NEAR(fit.box.w, 2.0, 1e-12);
  EXPECT_NEAR(fit.box.h, 2.0, 1e-12);
  EXPECT_NEAR(fit.box.theta, 0.0, 1e-12);
}

TEST(FromVertices, RoundTripRandomBoxes) {
  testutil::TestRng rng(33);
  for (int i = 0; i < 100; ++i) {
    const OrientedBox b = testutil::random_box(rng);
    const orient::BoxFit fit = orient::from_vertices(to_vertices(b));
    EXPECT_TRUE(fit.exact);
    EXPECT_NEAR(fit.box.cx, b.cx, 1e-8);
    EXPECT_NEAR(fit.box.cy, b.cy, 1e-8);
    EXPECT_NEAR(fit.box.w, b.w, 1e-8);
    EXPECT_NEAR(fit.box.h, b.h, 1e-8);
    const double dtheta = std::abs(fit.box.theta - b.theta);
    EXPECT_LT(std::min(dtheta, 180.0 - dtheta), 1e-6);
    EXPECT_GT(rotated_iou(fit.box, b), 1.0 - 1e-9);
  }
}

TEST(FromVertices, PerturbedRectangleUsesNearestRectangle) {
  testutil::TestRng rng(44);
  for (int i = 0; i < 100; ++i) {
    const OrientedBox b = testutil::random_box(rng);
    VertexQuad q = to_vertices(b);
    for (Vec2& v : q.v) {
      v.x += rng.uniform(-1e-8, 1e-8);
      v.y += rng.uniform(-1e-8, 1e-8);
    }
    const orient::BoxFit fit = orient::from_vertices(make_vertex_quad(q.v));
    EXPECT_GT(rotated_iou(fit.box, b), 1.0 - 1e-6);
  }
}

TEST(FromVertices, NonRectangleFallsBackToMinAreaRect) {
  // Convex trapezoid, clearly not a rectangle.
  const VertexQuad q = make_vertex_quad({{{0, 0}, {4, 0}, {3, 2}, {1, 2}}});
  const orient::BoxFit fit = orient::from_vertices(q);
  EXPECT_FALSE(fit.exact);
  // The enclosing rectangle must contain all four corners.
  for (const Vec2& v : q.v) {
    EXPECT_TRUE(testutil::point_in_box(fit.box, v.x, v.y));
  }
  EXPECT_NEAR(fit.box.w * fit.box.h, 8.0, 1e-9);  // 4 x 2 aligned hull
}

TEST(VertexQuad, RejectsDegenerate) {
  EXPECT_THROW(make_vertex_quad({{{0, 0}, {1, 0}, {2, 0}, {3, 0}}}),
               orient::InvalidPolygonError);
  EXPECT_THROW(make_vertex_quad({{{0, 0}, {0, 0}, {1, 1}, {1, 0}}}),
               orient::InvalidPolygonError);
  // Bowtie ordering.
  EXPECT_THROW(make_vertex_quad({{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}),
               orient::InvalidPolygonError);
  EXPECT_THROW(make_vertex_quad({{{0, 0}, {NAN, 1}, {1, 1}, {1, 0}}}),
               orient::InvalidPolygonError);
}

TEST(PolygonIntersection, SelfIsIdentity) {
  testutil::TestRng rng(55);
  for (int i = 0; i < 200; ++i) {
    const ConvexPolygon p = to_polygon(to_vertices(testutil::random_box(rng)));
    const ConvexPolygon inter = orient::polygon_intersection(p, p);
    EXPECT_EQ(orient::area(inter), orient::area(p));
  }
}

TEST(PolygonIntersection, DisjointIsEmpty) {
  const ConvexPolygon a = to_polygon(to_vertices(make_oriented_box(0, 0, 2, 2, 10)));
  const ConvexPolygon b = to_polygon(to_vertices(make_oriented_box(10, 0, 2, 2, 70)));
  const ConvexPolygon inter = orient::polygon_intersection(a, b);
  EXPECT_TRUE(inter.empty());
  EXPECT_EQ(orient::area(inter), 0.0);
}

// Unit square clipped by its own 45-degree rotation is a regular octagon
// with area 2(sqrt(2) - 1).
TEST(PolygonIntersection, OctagonArea) {
  const ConvexPolygon a = to_polygon(to_vertices(make_oriented_box(0, 0, 1, 1, 0)));
  const ConvexPolygon b = to_polygon(to_vertices(make_oriented_box(0, 0, 1, 1, 45)));
  const ConvexPolygon inter = orient::polygon_intersection(a, b);
  EXPECT_EQ(inter.size(), 8);
  EXPECT_NEAR(orient::area(inter), 0.8284271247461903, 1e-12);
}

TEST(PolygonIntersection, EdgeTouchingIsEmpty) {
  const ConvexPolygon a = to_polygon(to_vertices(make_oriented_box(0, 0, 2, 2, 0)));
  const ConvexPolygon b = to_polygon(to_vertices(make_oriented_box(2, 0, 2, 2, 0)));
  EXPECT_EQ(orient::area(orient::polygon_intersection(a, b)), 0.0);
}

TEST(Area, EmptyPolygonIsZero) {
  EXPECT_EQ(orient::area(ConvexPolygon{}), 0.0);
}

TEST(Area, RotationInvariantRectangle) {
  for (double theta : {0.0, 13.0, 45.0, 90.0, 135.7, 179.9}) {
    const ConvexPolygon p = to_polygon(to_vertices(make_oriented_box(3, -2, 4, 2, theta)));
    EXPECT_NEAR(orient::area(p), 8.0, 1e-12);
  }
}

TEST(Area, MonteCarloOracleRandomConvexPolygon) {
  // Convex polygon from points on a noisy circle.
  testutil::TestRng rng(66);
  std::vector<Vec2> pts;
  const int n = 7;
  for (int i = 0; i < n; ++i) {
    const double ang = 2.0 * orient::kPi * i / n;
    const double r = rng.uniform(5.0, 8.0);
    pts.push_back({10.0 + r * std::cos(ang), -4.0 + r * std::sin(ang)});
  }
  const ConvexPolygon poly = orient::make_convex_polygon(pts);
  const double exact = orient::area(poly);

  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (int i = 0; i < poly.size(); ++i) {
    min_x = std::min(min_x, poly[i].x);
    min_y = std::min(min_y, poly[i].y);
    max_x = std::max(max_x, poly[i].x);
    max_y = std::max(max_y, poly[i].y);
  }
  const int samples = 1000000;
  int inside = 0;
  for (int i = 0; i < samples; ++i) {
    const Vec2 p{rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)};
    bool in = true;
    for (int k = 0; k < poly.size() && in; ++k) {
      const Vec2 e = poly[(k + 1) % poly.size()] - poly[k];
      if (orient::cross(e, p - poly[k]) < 0.0) in = false;
    }
    if (in) ++inside;
  }
  const double estimate =
      (max_x - min_x) * (max_y - min_y) * inside / static_cast<double>(samples);
  EXPECT_NEAR(estimate, exact, 0.01 * exact);
}

TEST(RotatedIou, SelfIsExactlyOne) {
  testutil::TestRng rng(77);
  for (int i = 0; i < 100; ++i) {
    const OrientedBox b = testutil::random_box(rng);
    EXPECT_EQ(rotated_iou(b, b), 1.0);
  }
}

TEST(RotatedIou, AnalyticSquare45) {
  const OrientedBox a = make_oriented_box(0, 0, 1, 1, 0);
  const OrientedBox b = make_oriented_box(0, 0, 1, 1, 45);
  EXPECT_NEAR(rotated_iou(a, b), 0.7071067811865475, 1e-9);
}

TEST(RotatedIou, MonteCarloOracleQuick) {
  testutil::TestRng rng(88);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const OrientedBox a = testutil::random_box(rng, 60.0, 10.0, 50.0);
    const OrientedBox b = testutil::random_box(rng, 60.0, 10.0, 50.0);
    const double exact = rotated_iou(a, b);
    const double mc = testutil::monte_carlo_iou(a, b, 200000, 1000 + i);
    worst = std::max(worst, std::abs(exact - mc));
  }
  EXPECT_LE(worst, 0.02);
}

TEST(RotatedIou, SymmetricExactly) {
  testutil::TestRng rng(99);
  for (int i = 0; i < 300; ++i) {
    const OrientedBox a = testutil::random_box(rng, 40.0);
    const OrientedBox b = testutil::random_box(rng, 40.0);
    EXPECT_EQ(rotated_iou(a, b), rotated_iou(b, a));
  }
}

TEST(RotatedIou, RangeAndDisjoint) {
  testutil::TestRng rng(111);
  for (int i = 0; i < 300; ++i) {
    const OrientedBox a = testutil::random_box(rng, 50.0);
    const OrientedBox b = testutil::random_box(rng, 50.0);
    const double iou = rotated_iou(a, b);
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
  }
  const OrientedBox far_a = make_oriented_box(0, 0, 4, 2, 30);
  const OrientedBox far_b = make_oriented_box(1000, 1000, 4, 2, 150);
  EXPECT_EQ(rotated_iou(far_a, far_b), 0.0);
}

TEST(RotatedIou, RigidMotionInvariance) {
  testutil::TestRng rng(122);
  for (int i = 0; i < 100; ++i) {
    const OrientedBox a = testutil::random_box(rng, 30.0);
    const OrientedBox b = testutil::random_box(rng, 30.0);
    const double base = rotated_iou(a, b);

    const double dx = rng.uniform(-200.0, 200.0);
    const double dy = rng.uniform(-200.0, 200.0);
    const double rot = rng.uniform(0.0, 360.0);
    const double c = std::cos(orient::deg_to_rad(rot));
    const double s = std::sin(orient::deg_to_rad(rot));
    auto transform = [&](const OrientedBox& box) {
      return make_oriented_box(box.cx * c - box.cy * s + dx,
                               box.cx * s + box.cy * c + dy, box.w, box.h,
                               box.theta + rot);
    };
    EXPECT_NEAR(rotated_iou(transform(a), transform(b)), base, 1e-9);
  }
}

TEST(RotatedIou, ScaleInvariance) {
  testutil::TestRng rng(133);
  for (int i = 0; i < 100; ++i) {
    const OrientedBox a = testutil::random_box(rng, 30.0);
    const OrientedBox b = testutil::random_box(rng, 30.0);
    const double s = rng.uniform(0.01, 50.0);
    const OrientedBox sa = make_oriented_box(a.cx * s, a.cy * s, a.w * s, a.h * s, a.theta);
    const OrientedBox sb = make_oriented_box(b.cx * s, b.cy * s, b.w * s, b.h * s, b.theta);
    EXPECT_NEAR(rotated_iou(sa, sb), rotated_iou(a, b), 1e-9);
  }
}

TEST(RotatedIou, RectanglePeriod180) {
  testutil::TestRng rng(144);
  for (int i = 0; i < 100; ++i) {
    const OrientedBox b = testutil::random_box(rng);
    const OrientedBox shifted =
        make_oriented_box(b.cx, b.cy, b.w, b.h, b.theta + 180.0);
    EXPECT_NEAR(rotated_iou(b, shifted), 1.0, 1e-9);
  }
}

TEST(RotatedIou, AxisAlignedAgreement) {
  testutil::TestRng rng(155);
  auto aligned_box = [&] {
    // Keep the long edge horizontal so normalization leaves theta at 0.
    const double s1 = rng.uniform(1, 50);
    const double s2 = rng.uniform(1, 50);
    return make_oriented_box(rng.uniform(0, 100), rng.uniform(0, 100),
                             std::max(s1, s2), std::min(s1, s2), 0);
  };
  for (int i = 0; i < 500; ++i) {
    const OrientedBox a = aligned_box();
    const OrientedBox b = aligned_box();
    EXPECT_NEAR(rotated_iou(a, b), testutil::axis_aligned_iou(a, b), 1e-12);
  }
}

TEST(MinAreaRect, MatchesAngleScanOracle) {
  testutil::TestRng rng(166);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    const int n = rng.uniform_int(3, 8);
    for (int i = 0; i < n; ++i) {
      const double ang = 2.0 * orient::kPi * i / n + rng.uniform(0.0, 0.2);
      const double r = rng.uniform(3.0, 9.0);
      pts.push_back({r * std::cos(ang), r * std::sin(ang)});
    }
    ConvexPolygon poly;
    try {
      poly = orient::make_convex_polygon(pts);
    } catch (const orient::InvalidPolygonError&) {
      continue;  // jittered ring occasionally goes non-convex
    }
    const OrientedBox rect = orient::min_area_rect(poly);

    // Oracle: brute-force scan of enclosing-box area over a fine angle grid.
    double oracle = 1e300;
    for (double deg = 0.0; deg < 90.0; deg += 0.02) {
      const double c = std::cos(orient::deg_to_rad(deg));
      const double s = std::sin(orient::deg_to_rad(deg));
      double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
      for (int k = 0; k < poly.size(); ++k) {
        const double u = poly[k].x * c + poly[k].y * s;
        const double v = -poly[k].x * s + poly[k].y * c;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
      oracle = std::min(oracle, (umax - umin) * (vmax - vmin));
    }
    const double rect_area = rect.w * rect.h;
    EXPECT_LE(rect_area, oracle + 1e-6);
    EXPECT_GE(rect_area, orient::area(poly) - 1e-9);
    for (int k = 0; k < poly.size(); ++k) {
      EXPECT_TRUE(testutil::point_in_box(
          {rect.cx, rect.cy, rect.w * (1 + 1e-12) + 1e-9, rect.h * (1 + 1e-12) + 1e-9, rect.theta},
          poly[k].x, poly[k].y));
    }
  }
}

TEST(MinAreaRect, RejectsDegenerate) {
  EXPECT_THROW(orient::min_area_rect(ConvexPolygon{}), orient::InvalidPolygonError);
}

}  // namespace
