/*
 * Copyright 2026 The det3eval Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "det3eval/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace det3eval {

namespace {

// On-edge classification tolerance for the polygon clipper, in meters.
constexpr double kEdgeEps = 1e-9;
constexpr double kPi = 3.14159265358979323846;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Clips a convex polygon against the half-plane on the left of the directed
// edge a -> b. Points within kEdgeEps of the edge are treated as inside.
int clip_by_edge(const Vec2* in, int n, const Vec2& a, const Vec2& b, Vec2* out) {
  int m = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2& p = in[i];
    const Vec2& q = in[(i + 1) % n];
    const double dp = cross(a, b, p);
    const double dq = cross(a, b, q);
    const bool p_in = dp >= -kEdgeEps;
    const bool q_in = dq >= -kEdgeEps;
    if (p_in) out[m++] = p;
    if (p_in != q_in) {
      const double t = dp / (dp - dq);
      out[m++] = Vec2{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
    }
  }
  return m;
}

double polygon_area(const Vec2* pts, int n) {
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return std::abs(twice) * 0.5;
}

bool lexicographically_before(const Box3D& a, const Box3D& b) {
  if (a.cx != b.cx) return a.cx < b.cx;
  if (a.cy != b.cy) return a.cy < b.cy;
  if (a.cz != b.cz) return a.cz < b.cz;
  if (a.length != b.length) return a.length < b.length;
  if (a.width != b.width) return a.width < b.width;
  if (a.height != b.height) return a.height < b.height;
  return a.yaw < b.yaw;
}

}  // namespace

double normalize_angle(double radians) {
  double r = std::fmod(radians, 2.0 * kPi);
  if (r <= -kPi) {
    r += 2.0 * kPi;
  } else if (r > kPi) {
    r -= 2.0 * kPi;
  }
  return r;
}

bool box_is_valid(const Box3D& box) {
  const double fields[7] = {box.cx,    box.cy,     box.cz,  box.length,
                            box.width, box.height, box.yaw};
  for (double f : fields) {
    if (!std::isfinite(f)) return false;
  }
  return box.length > 0.0 && box.width > 0.0 && box.height > 0.0;
}

void require_valid_box(const Box3D& box) {
  if (!box_is_valid(box)) {
    throw InvalidBoxError("box has non-finite fields or non-positive dimensions");
  }
}

double box_volume(const Box3D& box) { return box.length * box.width * box.height; }

std::array<Vec2, 4> bev_corners(const Box3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.length;
  const double hw = 0.5 * box.width;
  // Counterclockwise footprint.
  const double dx[4] = {+hl, -hl, -hl, +hl};
  const double dy[4] = {+hw, +hw, -hw, -hw};
  std::array<Vec2, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = Vec2{box.cx + dx[i] * c - dy[i] * s, box.cy + dx[i] * s + dy[i] * c};
  }
  return out;
}

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  const std::array<Vec2, 4> pa = bev_corners(a);
  const std::array<Vec2, 4> pb = bev_corners(b);
  // Clip a's footprint by each edge of b's footprint. A rectangle clipped by
  // four half-planes has at most eight vertices; sixteen leaves headroom for
  // epsilon duplicates.
  Vec2 buf[2][16];
  for (int i = 0; i < 4; ++i) buf[0][i] = pa[i];
  int n = 4;
  int cur = 0;
  for (int e = 0; e < 4 && n > 0; ++e) {
    n = clip_by_edge(buf[cur], n, pb[e], pb[(e + 1) % 4], buf[1 - cur]);
    cur = 1 - cur;
  }
  return polygon_area(buf[cur], n);
}

bool box_contains(const Box3D& box, double x, double y, double z) {
  if (std::abs(z - box.cz) > 0.5 * box.height) return false;
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double dx = x - box.cx;
  const double dy = y - box.cy;
  const double lx = dx * c + dy * s;   // into box-local coordinates
  const double ly = -dx * s + dy * c;
  return std::abs(lx) <= 0.5 * box.length && std::abs(ly) <= 0.5 * box.width;
}

double iou3d(const Box3D& a_in, const Box3D& b_in) {
  require_valid_box(a_in);
  require_valid_box(b_in);
  // A box overlaps itself exactly; skip the clipper, whose rounding would
  // otherwise put self-IoU a few ulps under one at some yaws.
  if (a_in.cx == b_in.cx && a_in.cy == b_in.cy && a_in.cz == b_in.cz &&
      a_in.length == b_in.length && a_in.width == b_in.width &&
      a_in.height == b_in.height && a_in.yaw == b_in.yaw) {
    return 1.0;
  }
  // Canonical operand order makes the result exactly symmetric; the shared
  // midpoint shift keeps the clipper well conditioned far from the origin.
  const bool swap = lexicographically_before(b_in, a_in);
  Box3D a = swap ? b_in : a_in;
  Box3D b = swap ? a_in : b_in;
  const double mx = 0.5 * (a.cx + b.cx);
  const double my = 0.5 * (a.cy + b.cy);
  const double mz = 0.5 * (a.cz + b.cz);
  a.cx -= mx; a.cy -= my; a.cz -= mz;
  b.cx -= mx; b.cy -= my; b.cz -= mz;

  const double z_lo = std::max(a.cz - 0.5 * a.height, b.cz - 0.5 * b.height);
  const double z_hi = std::min(a.cz + 0.5 * a.height, b.cz + 0.5 * b.height);
  const double dz = z_hi - z_lo;
  if (dz <= 0.0) return 0.0;  // touching top/bottom faces counts as disjoint

  const double area = bev_intersection_area(a, b);
  const double inter = area * dz;
  if (inter <= 0.0) return 0.0;

  const double uni = box_volume(a) + box_volume(b) - inter;
  double r = inter / uni;
  if (r < 0.0) r = 0.0;
  if (r > 1.0) r = 1.0;
  return r;
}

double center_distance_ground(const Box3D& a, const Box3D& b) {
  require_valid_box(a);
  require_valid_box(b);
  const double dx = a.cx - b.cx;
  const double dy = a.cy - b.cy;
  return std::sqrt(dx * dx + dy * dy);
}

double height_error(const Box3D& a, const Box3D& b) {
  require_valid_box(a);
  require_valid_box(b);
  return std::abs(a.cz - b.cz);
}

double yaw_delta(const Box3D& a, const Box3D& b) {
  require_valid_box(a);
  require_valid_box(b);
  return std::abs(normalize_angle(a.yaw - b.yaw));
}

double aligned_iou(const Box3D& a, const Box3D& b) {
  require_valid_box(a);
  require_valid_box(b);
  const double inter = std::min(a.length, b.length) * std::min(a.width, b.width) *
                       std::min(a.height, b.height);
  const double uni = box_volume(a) + box_volume(b) - inter;
  return inter / uni;
}

}  // namespace det3eval
