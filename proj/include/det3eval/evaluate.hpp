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
#include <optional>
#include <string>
#include <vector>

#include "det3eval/average_precision.hpp"
#include "det3eval/matching.hpp"
#include "det3eval/records.hpp"

namespace det3eval {

// True-positive alignment metrics, sampled per matched pair at the operating
// threshold of the center-distance family:
//   ate  ground-plane center distance (m)
//   ase  1 - aligned_iou (pose-free shape disagreement)
//   aoe  absolute yaw difference (rad)
//   ave  ground-plane velocity difference (m/s); needs velocity on both sides
//   aae  attribute mismatch indicator; needs attributes on both sides
//   ahe  absolute center-height difference (m)
enum class TpMetric { ate, ase, aoe, ave, aae, ahe };
inline constexpr int kTpMetricCount = 6;
const char* tp_metric_name(TpMetric m);

struct TPMetricSamples {
  std::array<std::vector<double>, kTpMetricCount> samples;
  // A metric is available when every matched pair carries what it needs.
  std::array<bool, kTpMetricCount> available{true, true, true, true, true, true};
  long pair_count = 0;
};

// Collects alignment samples for one class. Matching runs with the
// center-distance family at tp_threshold over the whole corpus.
TPMetricSamples tp_errors(const FrameSet& fs, const std::string& class_name,
                          double tp_threshold, Difficulty tier = Difficulty::all);

// Composite score: (5 * mAP + sum over k of (1 - min(1, mtp_k))) / (5 + K)
// where K is the number of supplied alignment means. With the full
// five-metric set this is the usual 1/10 weighting; with fewer metrics the
// denominator shrinks so a perfect detector still scores 1. Negative mtp
// values and an out-of-range mAP raise std::invalid_argument.
double nds(double map, const std::vector<double>& mtps);

struct EvalProfile {
  MetricFamily family = MetricFamily::iou3d;
  ApStyle ap_style = ApStyle::ap40;
  std::vector<double> thresholds;             // IoU fractions or meters
  std::vector<Difficulty> tiers{Difficulty::all};
  std::vector<std::string> classes;           // empty: derive from ground truth
  double tp_threshold = 2.0;                  // center-distance family only
  bool with_tp_metrics = false;               // collect alignment metrics + nds
};

// Ready-made profiles. The volumetric profile evaluates AP at IoU
// {0.7, 0.5, 0.25} per difficulty tier; the center-distance profile
// evaluates AP at {0.5, 1, 2, 4} m, collects alignment metrics at 2 m and
// derives the composite score.
EvalProfile kitti_profile();
EvalProfile nuscenes_profile();

struct ApCell {
  std::string class_name;
  double threshold = 0.0;
  Difficulty tier = Difficulty::all;
  long n_gt = 0;
  double ap = 0.0;
  PRCurve curve;
};

struct ClassTpSummary {
  std::string class_name;
  std::array<double, kTpMetricCount> mean{};  // valid where count > 0
  long count = 0;
};

struct TpBlock {
  std::vector<ClassTpSummary> per_class;
  std::array<double, kTpMetricCount> mtp{};       // mean over classes with pairs
  std::array<bool, kTpMetricCount> available{};   // corpus-wide availability
  std::vector<TpMetric> nds_components;           // subset used by the score
  double nds_value = 0.0;
};

struct TierAggregate {
  Difficulty tier = Difficulty::all;
  double map = 0.0;  // mean AP over class x threshold at this tier
};

struct EvalReport {
  EvalProfile profile;
  std::vector<std::string> classes;      // resolved evaluation classes
  std::vector<ApCell> cells;             // class-major, then threshold, then tier
  std::vector<TierAggregate> tier_maps;
  double map = 0.0;                      // mean over all cells
  std::optional<TpBlock> tp;             // present for with_tp_metrics profiles
};

// Full corpus evaluation. Cells are computed independently; jobs > 1 spreads
// them over worker threads without changing any result.
EvalReport evaluate(const FrameSet& fs, const EvalProfile& profile, int jobs = 1);

// Single (class, threshold, tier) evaluation, the unit everything else is
// assembled from.
ApCell evaluate_cell(const FrameSet& fs, MetricFamily family, double threshold,
                     Difficulty tier, const std::string& class_name, ApStyle style);

// Distinct ground-truth classes (ignore rows excluded), sorted.
std::vector<std::string> derive_classes(const FrameSet& fs);

}  // namespace det3eval
