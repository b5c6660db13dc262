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

#include <string>
#include <vector>

#include "det3eval/records.hpp"

namespace det3eval {

enum class MetricFamily { iou3d, center_distance };

const char* metric_family_name(MetricFamily f);

// Pair quality under the configured family: IoU for the volumetric family,
// negated ground-plane distance for the center-distance family. Larger is
// always better, so one code path serves both.
double pair_quality(MetricFamily family, const Box3D& det, const Box3D& gt);

// True when the quality reaches the matching threshold (IoU >= threshold, or
// distance <= threshold).
bool quality_meets(MetricFamily family, double quality, double threshold);

struct MatcherConfig {
  MetricFamily family = MetricFamily::iou3d;
  double threshold = 0.7;
  std::string class_name;
  Difficulty tier = Difficulty::all;
};

enum class DetOutcome {
  true_positive,
  false_positive,
  // Matched a ground truth outside the active tier: neither rewarded nor
  // penalized, and absent from the precision-recall curve.
  absorbed,
};

struct DetMatch {
  int det_index = -1;  // index into the frame's detection vector
  DetOutcome outcome = DetOutcome::false_positive;
  int gt_index = -1;   // index into the frame's ground-truth vector, -1 if none
  double quality = 0.0;
};

struct FrameMatchResult {
  std::vector<DetMatch> dets;              // this class only, processing order
  std::vector<int> unmatched_active_gts;   // active GTs with no detection
  int active_gt_count = 0;
};

// Greedy confidence-ordered assignment. Detections of the configured class
// are processed by descending score (ties by input order); each claims the
// best-quality unclaimed same-class ground truth whose quality meets the
// threshold. Ground truths outside the active tier stay in the pool but
// absorb their match silently. Each side is matched at most once.
FrameMatchResult match_frame(const Frame& frame, const MatcherConfig& cfg);

// Same greedy pass with an explicit processing order over detection indices
// (used by the quality-reordering analysis). Indices not of the configured
// class are skipped.
FrameMatchResult match_frame_ordered(const Frame& frame, const MatcherConfig& cfg,
                                     const std::vector<int>& det_order);

}  // namespace det3eval
