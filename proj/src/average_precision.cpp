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

#include "det3eval/average_precision.hpp"

#include <algorithm>

namespace det3eval {

PRCurve build_pr_curve(std::vector<CurveEntry> entries, long n_gt) {
  PRCurve curve;
  curve.n_gt = n_gt;
  if (n_gt <= 0) return curve;  // empty curve, AP defined as 0

  std::sort(entries.begin(), entries.end(), [](const CurveEntry& a, const CurveEntry& b) {
    if (a.sort_key != b.sort_key) return a.sort_key > b.sort_key;
    if (a.frame_id != b.frame_id) return a.frame_id < b.frame_id;
    return a.det_index < b.det_index;
  });

  long tp = 0;
  long fp = 0;
  curve.points.reserve(entries.size());
  for (const CurveEntry& e : entries) {
    if (e.is_tp)
      ++tp;
    else
      ++fp;
    PRPoint p;
    p.confidence = e.confidence;
    p.n_tp = tp;
    p.n_fp = fp;
    p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    p.recall = static_cast<double>(tp) / static_cast<double>(n_gt);
    curve.points.push_back(p);
  }
  return curve;
}

namespace {

// Suffix maxima of precision: envelope[i] = max precision over points i..end.
std::vector<double> precision_envelope(const PRCurve& curve) {
  std::vector<double> env(curve.points.size());
  double running = 0.0;
  for (std::size_t i = curve.points.size(); i-- > 0;) {
    running = std::max(running, curve.points[i].precision);
    env[i] = running;
  }
  return env;
}

}  // namespace

double interpolated_precision(const PRCurve& curve, double recall) {
  double best = 0.0;
  for (const PRPoint& p : curve.points) {
    if (p.recall >= recall) best = std::max(best, p.precision);
  }
  return best;
}

std::array<double, 40> interpolated_precision_40(const PRCurve& curve) {
  std::array<double, 40> out{};
  const std::vector<double> env = precision_envelope(curve);
  std::size_t i = 0;
  for (int k = 1; k <= 40; ++k) {
    const double r = static_cast<double>(k) / 40.0;
    while (i < curve.points.size() && curve.points[i].recall < r) ++i;
    out[k - 1] = (i < curve.points.size()) ? env[i] : 0.0;
  }
  return out;
}

double ap40(const PRCurve& curve) {
  if (curve.n_gt <= 0) return 0.0;
  const std::array<double, 40> p = interpolated_precision_40(curve);
  double sum = 0.0;
  for (double v : p) sum += v;
  return sum / 40.0;
}

double ap_distance(const PRCurve& curve) {
  if (curve.n_gt <= 0) return 0.0;
  constexpr double kMinRecall = 0.1;
  constexpr double kMinPrecision = 0.1;
  const std::vector<double> env = precision_envelope(curve);

  // p(r) is a step function, constant on (recall[i-1], recall[i]] with value
  // env[i]; integrate each step clipped to [kMinRecall, 1].
  double area = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double r = curve.points[i].recall;
    if (r > prev_recall) {
      const double lo = std::max(prev_recall, kMinRecall);
      const double hi = std::min(r, 1.0);
      if (hi > lo) area += (hi - lo) * std::max(0.0, env[i] - kMinPrecision);
      prev_recall = r;
    }
  }
  return area / ((1.0 - kMinRecall) * (1.0 - kMinPrecision));
}

double average_precision(const PRCurve& curve, ApStyle style) {
  return style == ApStyle::ap40 ? ap40(curve) : ap_distance(curve);
}

}  // namespace det3eval
