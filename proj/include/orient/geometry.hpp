// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

#include "orient/errors.hpp"

namespace orient {

inline constexpr double kPi = 3.14159265358979323846;

// Vertices closer than this are merged after polygon clipping so that
// near-degenerate slivers collapse to the empty polygon. Absolute units;
// scenes are assumed to live at roughly 1e3-unit extents.
inline constexpr double kVertexMergeEps = 1e-9;

// Relative side-length deviation below which a quad counts as a rectangle.
inline constexpr double kRectangleTolerance = 1e-6;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

inline bool lex_less(const Vec2& a, const Vec2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Rotated rectangle in canonical long-edge form: w is the long side,
// h the short side, theta the angle of the long side in degrees, [0, 180).
// Square boxes (w == h) fold theta into [0, 90).
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double theta = 0.0;
};

struct BoxDims {
  double w = 0.0;
  double h = 0.0;
  double theta = 0.0;
};

// Maps any (w, h, angle) description onto the canonical long-edge form.
// Swapping w and h adds 90 degrees; rectangles are 180-degree periodic.
inline BoxDims normalize_angle(double theta_raw, double w, double h) {
  if (!std::isfinite(w) || !std::isfinite(h) || !std::isfinite(theta_raw)) {
    throw InvalidBoxError("box dimensions and angle must be finite");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw InvalidBoxError("box dimensions must be positive");
  }
  if (w < h) {
    std::swap(w, h);
    theta_raw += 90.0;
  }
  double t = std::fmod(theta_raw, 180.0);
  if (t < 0.0) t += 180.0;
  if (t >= 180.0) t = 0.0;  // fmod rounding can land exactly on 180
  if (w == h) {
    t = std::fmod(t, 90.0);
  }
  return {w, h, t};
}

inline OrientedBox make_oriented_box(double cx, double cy, double w, double h,
                                     double theta_raw) {
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw InvalidBoxError("box center must be finite");
  }
  const BoxDims d = normalize_angle(theta_raw, w, h);
  return {cx, cy, d.w, d.h, d.theta};
}

// Four corners of a rotated rectangle, counter-clockwise in a y-up frame,
// starting from the lexicographically smallest (x, y) vertex.
struct VertexQuad {
  std::array<Vec2, 4> v{};
};

namespace detail {

inline double signed_area(std::span<const Vec2> pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s += cross(pts[i], pts[(i + 1) % pts.size()]);
  }
  return 0.5 * s;
}

// Reorders in place: counter-clockwise, starting at the lexicographic minimum.
inline void canonicalize_quad(std::array<Vec2, 4>& v) {
  if (signed_area(v) < 0.0) {
    std::reverse(v.begin(), v.end());
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (lex_less(v[i], v[start])) start = i;
  }
  std::rotate(v.begin(), v.begin() + start, v.end());
}

}  // namespace detail

// Builds a quad from perimeter-ordered corners (either winding accepted).
// Throws InvalidPolygonError when the corners are non-finite, collapse to
// (near) zero area, or are not in convex position.
inline VertexQuad make_vertex_quad(const std::array<Vec2, 4>& pts) {
  std::array<Vec2, 4> v = pts;
  double scale = 0.0;
  for (const Vec2& p : v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidPolygonError("quad vertices must be finite");
    }
    scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  }
  const double area2 = std::abs(detail::signed_area(v)) * 2.0;
  if (area2 <= std::max(1e-12, scale * scale * 1e-14)) {
    throw InvalidPolygonError("quad is degenerate (zero area)");
  }
  detail::canonicalize_quad(v);
  for (int i = 0; i < 4; ++i) {
    const Vec2 e0 = v[(i + 1) % 4] - v[i];
    const Vec2 e1 = v[(i + 2) % 4] - v[(i + 1) % 4];
    if (norm(e0) <= kVertexMergeEps) {
      throw InvalidPolygonError("quad has coincident vertices");
    }
    if (cross(e0, e1) < -kVertexMergeEps * norm(e0) * norm(e1)) {
      throw InvalidPolygonError("quad vertices are not in convex position");
    }
  }
  return {v};
}

inline VertexQuad to_vertices(const OrientedBox& b) {
  const double c = std::cos(deg_to_rad(b.theta));
  const double s = std::sin(deg_to_rad(b.theta));
  const double hw = 0.5 * b.w;
  const double hh = 0.5 * b.h;
  // Local corners in counter-clockwise order.
  const std::array<Vec2, 4> local{{{hw, hh}, {-hw, hh}, {-hw, -hh}, {hw, -hh}}};
  std::array<Vec2, 4> v{};
  for (int i = 0; i < 4; ++i) {
    v[i] = {b.cx + local[i].x * c - local[i].y * s,
            b.cy + local[i].x * s + local[i].y * c};
  }
  detail::canonicalize_quad(v);
  return {v};
}

// Convex polygon with a small inline vertex buffer. Intersections of two
// supported polygons never exceed the capacity.
struct ConvexPolygon {
  static constexpr int kCapacity = 24;

  std::array<Vec2, kCapacity> v{};
  int n = 0;

  bool empty() const { return n == 0; }
  int size() const { return n; }
  const Vec2& operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  Vec2& operator[](int i) { return v[static_cast<std::size_t>(i)]; }

  void push_back(const Vec2& p) {
    if (n >= kCapacity) {
      throw InternalError("convex polygon vertex buffer overflow");
    }
    v[static_cast<std::size_t>(n++)] = p;
  }
};

inline ConvexPolygon to_polygon(const VertexQuad& q) {
  ConvexPolygon p;
  for (const Vec2& pt : q.v) p.push_back(pt);
  return p;
}

// Validates convexity and winds the polygon counter-clockwise. Accepts 3 to
// 12 vertices; consecutive duplicate vertices are rejected as degenerate.
inline ConvexPolygon make_convex_polygon(std::span<const Vec2> pts) {
  if (pts.size() < 3 || pts.size() > 12) {
    throw InvalidPolygonError("polygon must have between 3 and 12 vertices");
  }
  ConvexPolygon p;
  for (const Vec2& pt : pts) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
      throw InvalidPolygonError("polygon vertices must be finite");
    }
    p.push_back(pt);
  }
  double s = 0.0;
  for (int i = 0; i < p.n; ++i) s += cross(p[i], p[(i + 1) % p.n]);
  if (s < 0.0) {
    std::reverse(p.v.begin(), p.v.begin() + p.n);
  }
  for (int i = 0; i < p.n; ++i) {
    const Vec2 e0 = p[(i + 1) % p.n] - p[i];
    const Vec2 e1 = p[(i + 2) % p.n] - p[(i + 1) % p.n];
    const double l0 = norm(e0);
    const double l1 = norm(e1);
    if (l0 == 0.0 || l1 == 0.0) {
      throw InvalidPolygonError("polygon has duplicate consecutive vertices");
    }
    if (cross(e0, e1) < -kVertexMergeEps * l0 * l1) {
      throw InvalidPolygonError("polygon is not convex");
    }
  }
  return p;
}

inline double area(const ConvexPolygon& p) {
  if (p.n < 3) return 0.0;
  double s = 0.0;
  for (int i = 0; i < p.n; ++i) {
    s += cross(p[i], p[(i + 1) % p.n]);
  }
  return 0.5 * std::abs(s);
}

namespace detail {

// Keeps the part of `poly` on the left of the directed line p -> q.
inline ConvexPolygon clip_half_plane(const ConvexPolygon& poly, const Vec2& p,
                                     const Vec2& q) {
  ConvexPolygon out;
  const Vec2 e = q - p;
  const double eps = kVertexMergeEps * norm(e);
  for (int i = 0; i < poly.n; ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % poly.n];
    const double s_cur = cross(e, cur - p);
    const double s_nxt = cross(e, nxt - p);
    const bool in_cur = s_cur >= -eps;
    const bool in_nxt = s_nxt >= -eps;
    if (in_cur) out.push_back(cur);
    if (in_cur != in_nxt) {
      const double t = s_cur / (s_cur - s_nxt);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  return out;
}

inline ConvexPolygon merge_close_vertices(const ConvexPolygon& poly) {
  if (poly.n == 0) return {};
  ConvexPolygon out;
  for (int i = 0; i < poly.n; ++i) {
    const Vec2& p = poly[i];
    if (out.n > 0) {
      const Vec2 d = p - out[out.n - 1];
      if (std::abs(d.x) <= kVertexMergeEps && std::abs(d.y) <= kVertexMergeEps) {
        continue;
      }
    }
    out.push_back(p);
  }
  // First and last may coincide after the wrap-around.
  while (out.n > 1) {
    const Vec2 d = out[0] - out[out.n - 1];
    if (std::abs(d.x) <= kVertexMergeEps && std::abs(d.y) <= kVertexMergeEps) {
      --out.n;
    } else {
      break;
    }
  }
  if (out.n < 3) return {};
  return out;
}

}  // namespace detail

// Sequential half-plane clipping of `a` against every edge of `b`.
// Both inputs must be convex and counter-clockwise; the result is the
// (possibly empty) convex intersection.
inline ConvexPolygon polygon_intersection(const ConvexPolygon& a,
                                          const ConvexPolygon& b) {
  if (a.n < 3 || b.n < 3) return {};
  ConvexPolygon out = a;
  for (int i = 0; i < b.n && out.n > 0; ++i) {
    out = detail::clip_half_plane(out, b[i], b[(i + 1) % b.n]);
  }
  return detail::merge_close_vertices(out);
}

// Smallest-area enclosing rectangle of a convex polygon. The optimum is
// aligned with one of the polygon edges, so every edge direction is tried.
inline OrientedBox min_area_rect(const ConvexPolygon& poly) {
  if (poly.n < 3 || area(poly) <= 0.0) {
    throw InvalidPolygonError("min_area_rect requires a polygon with area");
  }
  double best_area = std::numeric_limits<double>::infinity();
  OrientedBox best{};
  for (int i = 0; i < poly.n; ++i) {
    const Vec2 e = poly[(i + 1) % poly.n] - poly[i];
    const double len = norm(e);
    if (len <= 0.0) continue;
    const Vec2 ux{e.x / len, e.y / len};
    const Vec2 uy{-ux.y, ux.x};
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    double tmin = smin, tmax = -smin;
    for (int j = 0; j < poly.n; ++j) {
      const double s = dot(poly[j], ux);
      const double t = dot(poly[j], uy);
      smin = std::min(smin, s);
      smax = std::max(smax, s);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    const double w = smax - smin;
    const double h = tmax - tmin;
    const double a = w * h;
    if (a < best_area) {
      best_area = a;
      const double cs = 0.5 * (smin + smax);
      const double ct = 0.5 * (tmin + tmax);
      best = make_oriented_box(ux.x * cs + uy.x * ct, ux.y * cs + uy.y * ct, w,
                               h, rad_to_deg(std::atan2(ux.y, ux.x)));
    }
  }
  return best;
}

struct BoxFit {
  OrientedBox box;
  // False when the quad was not a rectangle and the minimum-area enclosing
  // rectangle was used instead.
  bool exact = true;
};

// Inverse of to_vertices. Rectangles (within kRectangleTolerance) convert
// losslessly; other convex quads fall back to the minimum-area rectangle.
inline BoxFit from_vertices(const VertexQuad& q) {
  const Vec2& v0 = q.v[0];
  const Vec2& v1 = q.v[1];
  const Vec2& v2 = q.v[2];
  const Vec2& v3 = q.v[3];
  const double d02 = norm(v2 - v0);
  const double d13 = norm(v3 - v1);
  const double scale = std::max(d02, d13);
  const Vec2 midline = (v0 + v2) - (v1 + v3);
  const bool parallelogram = norm(midline) <= kRectangleTolerance * scale;
  const bool equal_diagonals = std::abs(d02 - d13) <= kRectangleTolerance * scale;
  if (parallelogram && equal_diagonals) {
    const Vec2 center = (v0 + v1 + v2 + v3) * 0.25;
    const double len_a = 0.5 * (norm(v1 - v0) + norm(v3 - v2));
    const double len_b = 0.5 * (norm(v2 - v1) + norm(v0 - v3));
    const Vec2 e = v1 - v0;
    const double theta = rad_to_deg(std::atan2(e.y, e.x));
    return {make_oriented_box(center.x, center.y, len_a, len_b, theta), true};
  }
  return {min_area_rect(to_polygon(q)), false};
}

namespace detail {

inline bool box_less(const OrientedBox& a, const OrientedBox& b) {
  if (a.cx != b.cx) return a.cx < b.cx;
  if (a.cy != b.cy) return a.cy < b.cy;
  if (a.w != b.w) return a.w < b.w;
  if (a.h != b.h) return a.h < b.h;
  return a.theta < b.theta;
}

}  // namespace detail

// Exact intersection-over-union of two rotated rectangles. The pair is
// evaluated in a canonical argument order so the result is bit-identical
// under argument swap.
inline double rotated_iou(const OrientedBox& a, const OrientedBox& b) {
  const OrientedBox* p = &a;
  const OrientedBox* q = &b;
  if (detail::box_less(b, a)) std::swap(p, q);
  const ConvexPolygon pa = to_polygon(to_vertices(*p));
  const ConvexPolygon pb = to_polygon(to_vertices(*q));
  const double area_a = area(pa);
  const double area_b = area(pb);
  const double inter = area(polygon_intersection(pa, pb));
  const double uni = area_a + area_b - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace orient
