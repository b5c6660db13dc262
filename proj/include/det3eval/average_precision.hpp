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
#include <string>
#include <vector>

namespace det3eval {

// One counted detection in the corpus-wide ranking. Absorbed detections are
// not entries: they contribute neither a true nor a false positive.
struct CurveEntry {
  double sort_key = 0.0;   // descending; the score under confidence ordering
  std::string frame_id;    // tie-break 1
  int det_index = 0;       // tie-break 2 (input order within the frame)
  bool is_tp = false;
  double confidence = 0.0; // reported on the curve point
};

struct PRPoint {
  double confidence = 0.0;
  long n_tp = 0;
  long n_fp = 0;
  double precision = 0.0;
  double recall = 0.0;
};

// Cumulative precision/recall per ranked prefix. Empty when n_gt == 0; both
// area summaries define AP as 0 in that case.
struct PRCurve {
  std::vector<PRPoint> points;
  long n_gt = 0;
};

PRCurve build_pr_curve(std::vector<CurveEntry> entries, long n_gt);

// Interpolated precision p(r) = max precision over points with recall >= r,
// 0 beyond the last reached recall.
double interpolated_precision(const PRCurve& curve, double recall);

// p(r) sampled at r = k/40 for k = 1..40.
std::array<double, 40> interpolated_precision_40(const PRCurve& curve);

// Mean interpolated precision over the 40 recall samples.
double ap40(const PRCurve& curve);

// Normalized area of the interpolated curve over recall in [0.1, 1] with a
// 0.1 precision floor:  AP = (1/0.81) * integral of max(0, p(r) - 0.1).
// A detector with p(r) = 1 everywhere scores exactly 1, one with
// p(r) <= 0.1 everywhere scores 0. The area is integrated exactly from the
// step structure of p(r), not sampled.
double ap_distance(const PRCurve& curve);

enum class ApStyle { ap40, ap_distance };

double average_precision(const PRCurve& curve, ApStyle style);

}  // namespace det3eval
