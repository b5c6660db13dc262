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
#include <utility>
#include <vector>

#include "det3eval/records.hpp"

namespace testutil {

inline det3eval::Box3D make_box(double cx, double cy, double cz, double l, double w,
                                double h, double yaw = 0.0) {
  det3eval::Box3D box;
  box.cx = cx;
  box.cy = cy;
  box.cz = cz;
  box.length = l;
  box.width = w;
  box.height = h;
  box.yaw = yaw;
  return box;
}

inline det3eval::Box3D unit_cube(double cx = 0.0, double cy = 0.0, double cz = 0.0,
                                 double yaw = 0.0) {
  return make_box(cx, cy, cz, 1.0, 1.0, 1.0, yaw);
}

inline det3eval::GroundTruth make_gt(const std::string& class_name,
                                     const det3eval::Box3D& box) {
  det3eval::GroundTruth gt;
  gt.class_name = class_name;
  gt.box = box;
  return gt;
}

inline det3eval::Detection make_det(const std::string& class_name,
                                    const det3eval::Box3D& box, double score) {
  det3eval::Detection det;
  det.class_name = class_name;
  det.box = box;
  det.score = score;
  return det;
}

inline det3eval::Frame make_frame(std::string id, std::vector<det3eval::GroundTruth> gts,
                                  std::vector<det3eval::Detection> dets) {
  det3eval::Frame frame;
  frame.id = std::move(id);
  frame.gts = std::move(gts);
  frame.dets = std::move(dets);
  return frame;
}

inline det3eval::FrameSet single_frame(std::vector<det3eval::GroundTruth> gts,
                                       std::vector<det3eval::Detection> dets) {
  det3eval::FrameSet fs;
  fs.frames.push_back(make_frame("000000", std::move(gts), std::move(dets)));
  return fs;
}

// Attaches the image-plane metadata the tier rules look at.
inline det3eval::GroundTruth with_meta(det3eval::GroundTruth gt, double truncation,
                                       int occlusion, double bbox_height) {
  gt.truncation = truncation;
  gt.occlusion = occlusion;
  gt.bbox2d = det3eval::BBox2D{100.0, 100.0, 100.0 + bbox_height / 2.0,
                               100.0 + bbox_height};
  return gt;
}

}  // namespace testutil
