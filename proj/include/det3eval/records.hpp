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

#include <optional>
#include <string>
#include <vector>

#include "det3eval/geometry.hpp"

namespace det3eval {

// Image-plane rectangle in pixels.
struct BBox2D {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double height() const { return bottom - top; }
};

struct Velocity2D {
  double vx = 0.0;
  double vy = 0.0;
};

// Annotated object. Records with ignore = true (e.g. label rows marking
// unlabeled regions) are excluded from evaluation entirely: they are never
// matched, never counted in the ground-truth total, and never tagged as
// undetected. Their raw fields pass through conversions untouched so label
// files survive round trips byte for byte.
struct GroundTruth {
  Box3D box;
  std::string class_name;
  std::optional<double> truncation;
  std::optional<int> occlusion;
  std::optional<BBox2D> bbox2d;
  std::optional<Velocity2D> velocity;
  std::optional<std::string> attribute;
  std::optional<double> alpha;  // image-plane observation angle passthrough
  bool ignore = false;
};

struct Detection {
  Box3D box;
  std::string class_name;
  double score = 0.0;  // in [0, 1]
  std::optional<Velocity2D> velocity;
  std::optional<std::string> attribute;
  // Label-format passthrough so detection files survive conversion round
  // trips byte for byte.
  std::optional<double> truncation;
  std::optional<int> occlusion;
  std::optional<BBox2D> bbox2d;
  std::optional<double> alpha;
};

struct Frame {
  std::string id;
  std::vector<GroundTruth> gts;
  std::vector<Detection> dets;
};

enum class SourceConvention { kitti_camera, canonical };

// A corpus of frames with unique ids. Boxes are in the canonical frame after
// ingestion (directory loaders and the JSON loader take care of that).
struct FrameSet {
  std::vector<Frame> frames;
  SourceConvention convention = SourceConvention::canonical;
};

// Annotation tiers. easy/moderate/hard follow the usual 2D-height,
// occlusion and truncation cutoffs; "all" disables tier filtering and admits
// every non-ignored ground truth (the natural choice for data that carries
// no image-plane metadata). "ignored" marks records that qualify for no tier.
enum class Difficulty { easy, moderate, hard, all, ignored };

const char* difficulty_name(Difficulty d);
std::optional<Difficulty> difficulty_from_name(const std::string& name);

// Strictest tier the record qualifies for; ignored when the image-plane
// fields are missing or no tier's cutoffs are met.
Difficulty assign_difficulty(const GroundTruth& gt);

// Tier membership predicate. Tiers nest: easy implies moderate implies hard.
bool qualifies(const GroundTruth& gt, Difficulty tier);

}  // namespace det3eval
