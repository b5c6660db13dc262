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

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "det3eval/geometry.hpp"
#include "det3eval/synth.hpp"
#include "helpers.hpp"

using namespace det3eval;
using testutil::make_box;
using testutil::unit_cube;

namespace {
constexpr double kTau = 6.28318530717958647692;
constexpr double kHalfTurn = kTau / 2.0;
}  // namespace

TEST_CASE("normalize_angle wraps into the half-open interval") {
  CHECK(normalize_angle(0.0) == doctest::Approx(0.0));
  CHECK(normalize_angle(kHalfTurn) == doctest::Approx(kHalfTurn));
  CHECK(normalize_angle(-kHalfTurn) == doctest::Approx(kHalfTurn));
  CHECK(normalize_angle(3.0 * kHalfTurn) == doctest::Approx(kHalfTurn));
  CHECK(normalize_angle(kTau + 0.25) == doctest::Approx(0.25));
  CHECK(normalize_angle(-kTau - 0.25) == doctest::Approx(-0.25));
}

TEST_CASE("yaw_delta is the smaller angle between headings") {
  const auto at_yaw = [](double yaw) { return unit_cube(0, 0, 0, yaw); };
  CHECK(yaw_delta(at_yaw(0.1), at_yaw(-0.1)) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(yaw_delta(at_yaw(kHalfTurn - 0.05), at_yaw(-kHalfTurn + 0.05)) ==
        doctest::Approx(0.1).epsilon(1e-9));
  CHECK(yaw_delta(at_yaw(0.0), at_yaw(kHalfTurn)) == doctest::Approx(kHalfTurn));
}

TEST_CASE("box_volume multiplies the extents") {
  CHECK(box_volume(make_box(0, 0, 0, 2, 3, 4)) == doctest::Approx(24.0));
}

TEST_CASE("require_valid_box rejects degenerate input") {
  CHECK_THROWS_AS(require_valid_box(make_box(0, 0, 0, 0.0, 1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(require_valid_box(make_box(0, 0, 0, -1.0, 1, 1)),
                  std::invalid_argument);
  auto nan_box = unit_cube();
  nan_box.cx = std::nan("");
  CHECK_THROWS_AS(require_valid_box(nan_box), std::invalid_argument);
}

TEST_CASE("identical boxes overlap completely") {
  CHECK(iou3d(unit_cube(), unit_cube()) == doctest::Approx(1.0).epsilon(1e-12));
  const auto yawed = unit_cube(3.0, -2.0, 1.0, 0.7);
  CHECK(iou3d(yawed, yawed) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit cubes offset by half a side overlap one third") {
  // intersection 0.5, union 1.5
  CHECK(std::abs(iou3d(unit_cube(), unit_cube(0.5)) - 1.0 / 3.0) < 1e-9);
}

TEST_CASE("rotating a unit cube 45 degrees leaves the octagon overlap") {
  // Footprint intersection is the regular octagon of area 2*sqrt(2) - 2.
  const double octagon = 2.0 * std::sqrt(2.0) - 2.0;
  const double expected = octagon / (2.0 - octagon);
  CHECK(std::abs(iou3d(unit_cube(), unit_cube(0, 0, 0, kHalfTurn / 4.0)) - expected) <
        1e-9);
}

TEST_CASE("vertical offsets scale the overlap by the z slab") {
  CHECK(std::abs(iou3d(unit_cube(), unit_cube(0, 0, 0.5)) - 1.0 / 3.0) < 1e-9);
  CHECK(iou3d(unit_cube(), unit_cube(0, 0, 1.0)) == doctest::Approx(0.0));
}

TEST_CASE("separated footprints do not overlap") {
  CHECK(iou3d(unit_cube(), unit_cube(5.0)) == doctest::Approx(0.0));
}

TEST_CASE("overlap is symmetric") {
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    const auto a = make_box(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1),
                            rng.uniform(0.5, 3), rng.uniform(0.5, 3),
                            rng.uniform(0.5, 3), rng.uniform(-3, 3));
    const auto b = make_box(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1),
                            rng.uniform(0.5, 3), rng.uniform(0.5, 3),
                            rng.uniform(0.5, 3), rng.uniform(-3, 3));
    CHECK(std::abs(iou3d(a, b) - iou3d(b, a)) < 1e-12);
  }
}

TEST_CASE("overlap is invariant under shared translation and rotation") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto a = make_box(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1),
                            rng.uniform(0.5, 3), rng.uniform(0.5, 3),
                            rng.uniform(0.5, 3), rng.uniform(-3, 3));
    const auto b = make_box(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1),
                            rng.uniform(0.5, 3), rng.uniform(0.5, 3),
                            rng.uniform(0.5, 3), rng.uniform(-3, 3));
    const double base = iou3d(a, b);

    const double tx = rng.uniform(-10, 10), ty = rng.uniform(-10, 10);
    auto at = a, bt = b;
    at.cx += tx; at.cy += ty; bt.cx += tx; bt.cy += ty;
    CHECK(std::abs(iou3d(at, bt) - base) < 1e-9);

    const double phi = rng.uniform(-3, 3);
    const double c = std::cos(phi), s = std::sin(phi);
    auto ar = a, br = b;
    ar.cx = c * a.cx - s * a.cy; ar.cy = s * a.cx + c * a.cy;
    br.cx = c * b.cx - s * b.cy; br.cy = s * b.cx + c * b.cy;
    ar.yaw = normalize_angle(a.yaw + phi);
    br.yaw = normalize_angle(b.yaw + phi);
    CHECK(std::abs(iou3d(ar, br) - base) < 1e-9);
  }
}

TEST_CASE("aligned overlap ignores pose") {
  // Same dims anywhere: 1. Nested cube of double side: 1/8. Stretched z: 1/3.
  CHECK(aligned_iou(unit_cube(5, 5, 5, 1.2), unit_cube()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(aligned_iou(unit_cube(), make_box(9, 9, 9, 2, 2, 2)) - 0.125) < 1e-12);
  CHECK(std::abs(aligned_iou(unit_cube(), make_box(0, 0, 0, 1, 1, 3)) - 1.0 / 3.0) <
        1e-12);
}

TEST_CASE("ground-plane center distance ignores height") {
  CHECK(center_distance_ground(make_box(0, 0, 0, 1, 1, 1),
                               make_box(3, 4, 17, 1, 1, 1)) ==
        doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("height error is the center gap") {
  CHECK(height_error(make_box(0, 0, 1.0, 1, 1, 1), make_box(0, 0, -0.25, 1, 1, 1)) ==
        doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("containment respects the yawed frame") {
  const auto box = make_box(0, 0, 0, 4, 2, 2, kHalfTurn / 2.0);  // 90 degrees
  // After the quarter turn the long axis lies along y.
  CHECK(box_contains(box, 0.0, 1.9, 0.0));
  CHECK(!box_contains(box, 1.9, 0.0, 0.0));
  CHECK(!box_contains(box, 0.0, 1.9, 1.5));
}

TEST_CASE("bev corners trace the footprint") {
  const auto corners = bev_corners(make_box(1, 2, 0, 2, 1, 1));
  double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
  for (const auto& c : corners) {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  CHECK(min_x == doctest::Approx(0.0));
  CHECK(max_x == doctest::Approx(2.0));
  CHECK(min_y == doctest::Approx(1.5));
  CHECK(max_y == doctest::Approx(2.5));
}
