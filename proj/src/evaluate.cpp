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

#include "det3eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "parallel_for.hpp"

namespace det3eval {

const char* tp_metric_name(TpMetric m) {
  switch (m) {
    case TpMetric::ate: return "ate";
    case TpMetric::ase: return "ase";
    case TpMetric::aoe: return "aoe";
    case TpMetric::ave: return "ave";
    case TpMetric::aae: return "aae";
    case TpMetric::ahe: return "ahe";
  }
  return "?";
}

TPMetricSamples tp_errors(const FrameSet& fs, const std::string& class_name,
                          double tp_threshold, Difficulty tier) {
  MatcherConfig cfg;
  cfg.family = MetricFamily::center_distance;
  cfg.threshold = tp_threshold;
  cfg.class_name = class_name;
  cfg.tier = tier;

  TPMetricSamples out;
  for (const Frame& frame : fs.frames) {
    const FrameMatchResult fm = match_frame(frame, cfg);
    for (const DetMatch& m : fm.dets) {
      if (m.outcome != DetOutcome::true_positive) continue;
      const Detection& det = frame.dets[m.det_index];
      const GroundTruth& gt = frame.gts[m.gt_index];
      ++out.pair_count;
      out.samples[0].push_back(center_distance_ground(det.box, gt.box));
      out.samples[1].push_back(1.0 - aligned_iou(det.box, gt.box));
      out.samples[2].push_back(yaw_delta(det.box, gt.box));
      if (det.velocity && gt.velocity) {
        const double dvx = det.velocity->vx - gt.velocity->vx;
        const double dvy = det.velocity->vy - gt.velocity->vy;
        out.samples[3].push_back(std::sqrt(dvx * dvx + dvy * dvy));
      } else {
        out.available[3] = false;
      }
      if (det.attribute && gt.attribute) {
        out.samples[4].push_back(*det.attribute == *gt.attribute ? 0.0 : 1.0);
      } else {
        out.available[4] = false;
      }
      out.samples[5].push_back(height_error(det.box, gt.box));
    }
  }
  return out;
}

double nds(double map, const std::vector<double>& mtps) {
  if (!(map >= 0.0 && map <= 1.0)) {
    throw std::invalid_argument("mAP must lie in [0, 1]");
  }
  double sum = 5.0 * map;
  for (double m : mtps) {
    if (m < 0.0) throw std::invalid_argument("alignment means must be non-negative");
    sum += 1.0 - std::min(1.0, m);
  }
  return sum / (5.0 + static_cast<double>(mtps.size()));
}

EvalProfile kitti_profile() {
  EvalProfile p;
  p.family = MetricFamily::iou3d;
  p.ap_style = ApStyle::ap40;
  p.thresholds = {0.7, 0.5, 0.25};
  p.tiers = {Difficulty::easy, Difficulty::moderate, Difficulty::hard};
  p.with_tp_metrics = false;
  return p;
}

EvalProfile nuscenes_profile() {
  EvalProfile p;
  p.family = MetricFamily::center_distance;
  p.ap_style = ApStyle::ap_distance;
  p.thresholds = {0.5, 1.0, 2.0, 4.0};
  p.tiers = {Difficulty::all};
  p.tp_threshold = 2.0;
  p.with_tp_metrics = true;
  return p;
}

ApCell evaluate_cell(const FrameSet& fs, MetricFamily family, double threshold,
                     Difficulty tier, const std::string& class_name, ApStyle style) {
  MatcherConfig cfg;
  cfg.family = family;
  cfg.threshold = threshold;
  cfg.class_name = class_name;
  cfg.tier = tier;

  long n_gt = 0;
  std::vector<CurveEntry> entries;
  for (const Frame& frame : fs.frames) {
    const FrameMatchResult fm = match_frame(frame, cfg);
    n_gt += fm.active_gt_count;
    for (const DetMatch& m : fm.dets) {
      if (m.outcome == DetOutcome::absorbed) continue;
      CurveEntry e;
      e.sort_key = frame.dets[m.det_index].score;
      e.confidence = e.sort_key;
      e.frame_id = frame.id;
      e.det_index = m.det_index;
      e.is_tp = (m.outcome == DetOutcome::true_positive);
      entries.push_back(std::move(e));
    }
  }

  ApCell cell;
  cell.class_name = class_name;
  cell.threshold = threshold;
  cell.tier = tier;
  cell.curve = build_pr_curve(std::move(entries), n_gt);
  cell.n_gt = n_gt;
  cell.ap = average_precision(cell.curve, style);
  return cell;
}

std::vector<std::string> derive_classes(const FrameSet& fs) {
  std::set<std::string> names;
  for (const Frame& frame : fs.frames) {
    for (const GroundTruth& gt : frame.gts) {
      if (!gt.ignore) names.insert(gt.class_name);
    }
  }
  return {names.begin(), names.end()};
}

EvalReport evaluate(const FrameSet& fs, const EvalProfile& profile, int jobs) {
  EvalReport report;
  report.profile = profile;
  report.classes = profile.classes.empty() ? derive_classes(fs) : profile.classes;
  if (report.classes.empty()) {
    throw std::invalid_argument("no evaluation classes: ground truth is empty");
  }
  if (profile.thresholds.empty()) {
    throw std::invalid_argument("profile has no thresholds");
  }

  struct Task {
    std::string class_name;
    double threshold;
    Difficulty tier;
  };
  std::vector<Task> tasks;
  for (const std::string& c : report.classes) {
    for (double t : profile.thresholds) {
      for (Difficulty tier : profile.tiers) {
        tasks.push_back(Task{c, t, tier});
      }
    }
  }
  report.cells.resize(tasks.size());
  detail::parallel_for(jobs, static_cast<int>(tasks.size()), [&](int i) {
    const Task& t = tasks[i];
    report.cells[i] = evaluate_cell(fs, profile.family, t.threshold, t.tier,
                                    t.class_name, profile.ap_style);
  });

  double total = 0.0;
  for (Difficulty tier : profile.tiers) {
    TierAggregate agg;
    agg.tier = tier;
    double sum = 0.0;
    long n = 0;
    for (const ApCell& cell : report.cells) {
      if (cell.tier == tier) {
        sum += cell.ap;
        ++n;
      }
    }
    agg.map = n > 0 ? sum / static_cast<double>(n) : 0.0;
    report.tier_maps.push_back(agg);
    total += sum;
  }
  report.map = report.cells.empty() ? 0.0 : total / static_cast<double>(report.cells.size());

  if (profile.with_tp_metrics) {
    TpBlock block;
    std::array<double, kTpMetricCount> sums{};
    std::array<long, kTpMetricCount> class_counts{};
    block.available.fill(true);
    for (const std::string& c : report.classes) {
      const TPMetricSamples s = tp_errors(fs, c, profile.tp_threshold, Difficulty::all);
      ClassTpSummary summary;
      summary.class_name = c;
      summary.count = s.pair_count;
      for (int k = 0; k < kTpMetricCount; ++k) {
        if (!s.available[k]) block.available[k] = false;
        if (!s.samples[k].empty()) {
          double sum = 0.0;
          for (double v : s.samples[k]) sum += v;
          summary.mean[k] = sum / static_cast<double>(s.samples[k].size());
        }
      }
      block.per_class.push_back(summary);
      for (int k = 0; k < kTpMetricCount; ++k) {
        if (!s.samples[k].empty()) {
          sums[k] += summary.mean[k];
          ++class_counts[k];
        }
      }
    }
    for (int k = 0; k < kTpMetricCount; ++k) {
      block.mtp[k] = class_counts[k] > 0 ? sums[k] / static_cast<double>(class_counts[k]) : 0.0;
      if (class_counts[k] == 0) block.available[k] = false;
    }
    // The composite score uses the available alignment metrics except the
    // center-height extension, which is reported on its own.
    std::vector<double> mtps;
    for (TpMetric m : {TpMetric::ate, TpMetric::ase, TpMetric::aoe, TpMetric::ave,
                       TpMetric::aae}) {
      const int k = static_cast<int>(m);
      if (block.available[k]) {
        block.nds_components.push_back(m);
        mtps.push_back(block.mtp[k]);
      }
    }
    block.nds_value = nds(std::clamp(report.map, 0.0, 1.0), mtps);
    report.tp = std::move(block);
  }
  return report;
}

}  // namespace det3eval
