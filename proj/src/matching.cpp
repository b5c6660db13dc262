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

#include "det3eval/matching.hpp"

#include <algorithm>

namespace det3eval {

const char* metric_family_name(MetricFamily f) {
  return f == MetricFamily::iou3d ? "iou3d" : "center_distance";
}

double pair_quality(MetricFamily family, const Box3D& det, const Box3D& gt) {
  if (family == MetricFamily::iou3d) return iou3d(det, gt);
  return -center_distance_ground(det, gt);
}

bool quality_meets(MetricFamily family, double quality, double threshold) {
  if (family == MetricFamily::iou3d) return quality >= threshold;
  return -quality <= threshold;
}

FrameMatchResult match_frame(const Frame& frame, const MatcherConfig& cfg) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(frame.dets.size()); ++i) {
    if (frame.dets[i].class_name == cfg.class_name) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return frame.dets[a].score > frame.dets[b].score;
  });
  return match_frame_ordered(frame, cfg, order);
}

FrameMatchResult match_frame_ordered(const Frame& frame, const MatcherConfig& cfg,
                                     const std::vector<int>& det_order) {
  struct GtSlot {
    int index;
    bool active;
    bool claimed = false;
  };
  std::vector<GtSlot> pool;
  for (int g = 0; g < static_cast<int>(frame.gts.size()); ++g) {
    const GroundTruth& gt = frame.gts[g];
    if (gt.ignore || gt.class_name != cfg.class_name) continue;
    pool.push_back(GtSlot{g, qualifies(gt, cfg.tier)});
  }

  FrameMatchResult result;
  for (const GtSlot& slot : pool) {
    if (slot.active) ++result.active_gt_count;
  }

  for (int d : det_order) {
    const Detection& det = frame.dets[d];
    if (det.class_name != cfg.class_name) continue;
    DetMatch m;
    m.det_index = d;
    int best = -1;
    double best_q = 0.0;
    bool best_active = false;
    for (std::size_t s = 0; s < pool.size(); ++s) {
      if (pool[s].claimed) continue;
      const double q = pair_quality(cfg.family, det.box, frame.gts[pool[s].index].box);
      if (!quality_meets(cfg.family, q, cfg.threshold)) continue;
      // Best quality wins; on exact ties prefer in-tier ground truths, then
      // the lower index, so results never depend on container order.
      const bool better =
          best < 0 || q > best_q ||
          (q == best_q && pool[s].active && !best_active);
      if (better) {
        best = static_cast<int>(s);
        best_q = q;
        best_active = pool[s].active;
      }
    }
    if (best >= 0) {
      pool[best].claimed = true;
      m.gt_index = pool[best].index;
      m.quality = best_q;
      m.outcome = pool[best].active ? DetOutcome::true_positive : DetOutcome::absorbed;
    } else {
      m.outcome = DetOutcome::false_positive;
    }
    result.dets.push_back(m);
  }

  for (const GtSlot& slot : pool) {
    if (slot.active && !slot.claimed) result.unmatched_active_gts.push_back(slot.index);
  }
  return result;
}

}  // namespace det3eval
