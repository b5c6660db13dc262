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

#pragma once

#include <array>
#include <stdexcept>

namespace det3eval {

// Oriented 3D bounding box in the canonical frame: z up, ground plane xy,
// pose given by the geometric center plus a yaw rotation about z.
struct Box3D {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double length = 1.0;  // extent along the local x axis at yaw = 0
  double width = 1.0;   // extent along the local y axis at yaw = 0
  double height = 1.0;  // extent along z
  double yaw = 0.0;     // radians, normalized to (-pi, pi] at ingestion
};

class InvalidBoxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Wraps an angle into (-pi, pi]. Values already in range pass through
// unchanged bit for bit.
double normalize_angle(double radians);

// Finite fields and strictly positive dimensions.
bool box_is_valid(const Box3D& box);

// Throws InvalidBoxError when box_is_valid fails.
void require_valid_box(const Box3D& box);

double box_volume(const Box3D& box);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Footprint corners in the ground plane, counterclockwise.
std::array<Vec2, 4> bev_corners(const Box3D& box);

// Footprint intersection area of two boxes (convex polygon clipping with an
// epsilon of 1e-9 m for on-edge classification).
double bev_intersection_area(const Box3D& a, const Box3D& b);

// True when the point lies inside the closed box.
bool box_contains(const Box3D& box, double x, double y, double z);

// Volumetric intersection-over-union of two yaw-only boxes in [0, 1].
// 1.0 iff the boxes coincide; 0.0 iff they are disjoint (touching faces or
// edges count as disjoint). Symmetric by construction.
double iou3d(const Box3D& a, const Box3D& b);

// Euclidean distance between the centers projected onto the ground plane.
double center_distance_ground(const Box3D& a, const Box3D& b);

// Absolute difference of the center heights.
double height_error(const Box3D& a, const Box3D& b);

// Smallest absolute yaw difference modulo 2*pi, in [0, pi].
double yaw_delta(const Box3D& a, const Box3D& b);

// iou3d after translating b's center and yaw onto a's; depends only on the
// two dimension triples.
double aligned_iou(const Box3D& a, const Box3D& b);

}  // namespace det3eval
