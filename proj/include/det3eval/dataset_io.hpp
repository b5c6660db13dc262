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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "det3eval/errors.hpp"
#include "det3eval/records.hpp"

namespace det3eval {

// --- KITTI-style label text ------------------------------------------------
//
// One object per line, 15 whitespace-separated fields (16 with a trailing
// score on detection files):
//   type truncated occluded alpha bbox_left bbox_top bbox_right bbox_bottom
//   height width length x y z rotation_y [score]
// Parsed records stay in the camera convention (x right, y down, z forward,
// location at the bottom-face center); convert with to_canonical before
// evaluating. Rows of type "DontCare" come back with ignore = true and their
// sentinel values preserved verbatim.

std::vector<GroundTruth> parse_kitti_ground_truth(std::string_view text);
std::vector<Detection> parse_kitti_detections(std::string_view text);

// Fixed two-decimal formatting (occlusion as a bare integer), the format the
// parsers above read back losslessly. Records must carry the image-plane
// fields (truncation, occlusion, alpha, bbox2d) and are expected in the
// camera convention; convert with from_canonical first.
std::string serialize_kitti(const std::vector<GroundTruth>& gts);
std::string serialize_kitti(const std::vector<Detection>& dets);

// --- Frame conversions -------------------------------------------------------
//
// Camera -> canonical: (x, y, z) -> (z, -x, h/2 - y) so the stored center is
// the geometric box center, and yaw = wrap(-(rotation_y + pi/2)). The map is
// its own inverse on the angle, so converting back reproduces the original
// fields to within one or two ulps. Records with ignore = true pass through
// untouched (their geometry is sentinel data, not a pose).

GroundTruth to_canonical(const GroundTruth& gt, SourceConvention from);
Detection to_canonical(const Detection& det, SourceConvention from);
GroundTruth from_canonical(const GroundTruth& gt, SourceConvention to);
Detection from_canonical(const Detection& det, SourceConvention to);
FrameSet to_canonical(FrameSet fs);

// --- Canonical JSON interchange ---------------------------------------------
//
// {"frames": [{"id": str,
//              "gts":  [{"class": str, "box": {cx,cy,cz,l,w,h,yaw},
//                        "truncation"?, "occlusion"?, "bbox2d"?,
//                        "velocity"?, "attribute"?, "alpha"?, "ignore"?}],
//              "dets": [{"class": str, "box": {...}, "score": num,
//                        "velocity"?, "attribute"?, "truncation"?,
//                        "occlusion"?, "bbox2d"?, "alpha"?}]}]}
// bbox2d is {"left","top","right","bottom"}; velocity is [vx, vy]. Scores
// must lie in [0, 1]; range and type violations raise SchemaError with the
// JSON path of the offending value.

FrameSet load_canonical_json(std::string_view text);
std::string save_canonical_json(const FrameSet& fs);

// --- Directory helpers --------------------------------------------------------
//
// Label directories hold one <frame_id>.txt per frame. Loaders return
// canonical-frame FrameSets with frames in filename order.

FrameSet load_kitti_dirs(const std::filesystem::path& gt_dir,
                         const std::optional<std::filesystem::path>& pred_dir);
void save_kitti_dirs(const FrameSet& fs, const std::filesystem::path& gt_dir,
                     const std::optional<std::filesystem::path>& pred_dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace det3eval
