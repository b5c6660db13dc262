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

#include "det3eval/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace det3eval {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

// --- label-line tokenization -------------------------------------------------

struct RawLabel {
  std::string type;
  // truncated, occluded, alpha, bbox x4, height, width, length, x, y, z,
  // rotation_y, and optionally score.
  double v[15] = {};
  int line = 0;
};

double parse_double(std::string_view tok, int line) {
  double out = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("unparsable number '" + std::string(tok) + "'", line);
  }
  return out;
}

std::vector<RawLabel> parse_label_lines(std::string_view text, bool with_score) {
  std::vector<RawLabel> out;
  const std::size_t expected = with_score ? 16 : 15;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) toks.push_back(line.substr(i, j - i));
      i = j;
    }
    if (toks.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (toks.size() != expected) {
      throw ParseError("expected " + std::to_string(expected) + " fields, got " +
                           std::to_string(toks.size()),
                       line_no);
    }
    RawLabel raw;
    raw.type = std::string(toks[0]);
    for (std::size_t k = 1; k < toks.size(); ++k) {
      raw.v[k - 1] = parse_double(toks[k], line_no);
    }
    raw.line = line_no;
    out.push_back(std::move(raw));
    if (eol == text.size()) break;
  }
  return out;
}

// Camera-convention box from raw label values. The Box3D fields hold the raw
// camera quantities (cx = x, cy = y, cz = z, yaw = rotation_y) until
// to_canonical rewrites them.
void fill_common(const RawLabel& raw, Box3D& box, std::optional<double>& truncation,
                 std::optional<int>& occlusion, std::optional<BBox2D>& bbox2d,
                 std::optional<double>& alpha) {
  truncation = raw.v[0];
  occlusion = static_cast<int>(std::lround(raw.v[1]));
  alpha = raw.v[2];
  bbox2d = BBox2D{raw.v[3], raw.v[4], raw.v[5], raw.v[6]};
  box.height = raw.v[7];
  box.width = raw.v[8];
  box.length = raw.v[9];
  box.cx = raw.v[10];
  box.cy = raw.v[11];
  box.cz = raw.v[12];
  box.yaw = raw.v[13];
}

char* append_line(char* dst, std::size_t cap, const char* type, double trunc, int occ,
                  double alpha, const BBox2D& bb, const Box3D& box,
                  const double* score) {
  int n;
  if (score) {
    n = std::snprintf(dst, cap,
                      "%s %.2f %d %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f "
                      "%.2f %.2f %.2f\n",
                      type, trunc, occ, alpha, bb.left, bb.top, bb.right, bb.bottom,
                      box.height, box.width, box.length, box.cx, box.cy, box.cz,
                      box.yaw, *score);
  } else {
    n = std::snprintf(dst, cap,
                      "%s %.2f %d %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f "
                      "%.2f %.2f\n",
                      type, trunc, occ, alpha, bb.left, bb.top, bb.right, bb.bottom,
                      box.height, box.width, box.length, box.cx, box.cy, box.cz,
                      box.yaw);
  }
  return dst + (n > 0 ? n : 0);
}

template <typename Record>
void require_label_fields(const Record& r) {
  if (!r.truncation || !r.occlusion || !r.bbox2d || !r.alpha) {
    throw std::invalid_argument(
        "record lacks the image-plane fields required for label serialization");
  }
}

Box3D camera_to_canonical(const Box3D& cam) {
  Box3D out;
  out.length = cam.length;
  out.width = cam.width;
  out.height = cam.height;
  out.cx = cam.cz;
  out.cy = -cam.cx;
  out.cz = 0.5 * cam.height - cam.cy;
  out.yaw = normalize_angle(-(cam.yaw + kHalfPi));
  return out;
}

Box3D canonical_to_camera(const Box3D& box) {
  Box3D out;
  out.length = box.length;
  out.width = box.width;
  out.height = box.height;
  out.cx = -box.cy;
  out.cy = 0.5 * box.height - box.cz;
  out.cz = box.cx;
  out.yaw = normalize_angle(-(box.yaw + kHalfPi));
  return out;
}

// --- canonical JSON ----------------------------------------------------------

std::string idx_path(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

const json& need_member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError("expected an object", path);
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(std::string("missing key '") + key + "'", path);
  return *it;
}

double need_finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError("expected a number", path);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError("expected a finite number", path);
  return v;
}

std::string need_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError("expected a string", path);
  return j.get<std::string>();
}

Box3D parse_box(const json& j, const std::string& path, bool validate_dims) {
  Box3D box;
  box.cx = need_finite_number(need_member(j, "cx", path), path + "/cx");
  box.cy = need_finite_number(need_member(j, "cy", path), path + "/cy");
  box.cz = need_finite_number(need_member(j, "cz", path), path + "/cz");
  box.length = need_finite_number(need_member(j, "l", path), path + "/l");
  box.width = need_finite_number(need_member(j, "w", path), path + "/w");
  box.height = need_finite_number(need_member(j, "h", path), path + "/h");
  // Verbatim: load must invert save exactly (ignore rows carry sentinel
  // angles), and every consumer is angle-periodic anyway.
  box.yaw = need_finite_number(need_member(j, "yaw", path), path + "/yaw");
  if (validate_dims && !(box.length > 0.0 && box.width > 0.0 && box.height > 0.0)) {
    throw SchemaError("box dimensions must be positive", path);
  }
  return box;
}

BBox2D parse_bbox2d(const json& j, const std::string& path) {
  BBox2D bb;
  bb.left = need_finite_number(need_member(j, "left", path), path + "/left");
  bb.top = need_finite_number(need_member(j, "top", path), path + "/top");
  bb.right = need_finite_number(need_member(j, "right", path), path + "/right");
  bb.bottom = need_finite_number(need_member(j, "bottom", path), path + "/bottom");
  if (bb.right < bb.left || bb.bottom < bb.top) {
    throw SchemaError("bbox2d sides are inverted", path);
  }
  return bb;
}

Velocity2D parse_velocity(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw SchemaError("velocity must be an array [vx, vy]", path);
  }
  Velocity2D v;
  v.vx = need_finite_number(j[0], path + "/0");
  v.vy = need_finite_number(j[1], path + "/1");
  return v;
}

GroundTruth parse_gt(const json& j, const std::string& path) {
  GroundTruth gt;
  if (auto it = j.find("ignore"); it != j.end()) {
    if (!it->is_boolean()) throw SchemaError("expected a boolean", path + "/ignore");
    gt.ignore = it->get<bool>();
  }
  gt.class_name = need_string(need_member(j, "class", path), path + "/class");
  gt.box = parse_box(need_member(j, "box", path), path + "/box", !gt.ignore);
  if (auto it = j.find("truncation"); it != j.end()) {
    const double t = need_finite_number(*it, path + "/truncation");
    if (!gt.ignore && (t < 0.0 || t > 1.0)) {
      throw SchemaError("truncation must lie in [0, 1]", path + "/truncation");
    }
    gt.truncation = t;
  }
  if (auto it = j.find("occlusion"); it != j.end()) {
    if (!it->is_number_integer()) {
      throw SchemaError("occlusion must be an integer", path + "/occlusion");
    }
    const int o = it->get<int>();
    if (!gt.ignore && (o < 0 || o > 3)) {
      throw SchemaError("occlusion must lie in {0, 1, 2, 3}", path + "/occlusion");
    }
    gt.occlusion = o;
  }
  if (auto it = j.find("bbox2d"); it != j.end()) {
    gt.bbox2d = parse_bbox2d(*it, path + "/bbox2d");
  }
  if (auto it = j.find("velocity"); it != j.end()) {
    gt.velocity = parse_velocity(*it, path + "/velocity");
  }
  if (auto it = j.find("attribute"); it != j.end()) {
    gt.attribute = need_string(*it, path + "/attribute");
  }
  if (auto it = j.find("alpha"); it != j.end()) {
    gt.alpha = need_finite_number(*it, path + "/alpha");
  }
  return gt;
}

Detection parse_det(const json& j, const std::string& path) {
  Detection det;
  det.class_name = need_string(need_member(j, "class", path), path + "/class");
  det.box = parse_box(need_member(j, "box", path), path + "/box", true);
  det.score = need_finite_number(need_member(j, "score", path), path + "/score");
  if (det.score < 0.0 || det.score > 1.0) {
    throw SchemaError("score must lie in [0, 1]", path + "/score");
  }
  if (auto it = j.find("velocity"); it != j.end()) {
    det.velocity = parse_velocity(*it, path + "/velocity");
  }
  if (auto it = j.find("attribute"); it != j.end()) {
    det.attribute = need_string(*it, path + "/attribute");
  }
  if (auto it = j.find("truncation"); it != j.end()) {
    det.truncation = need_finite_number(*it, path + "/truncation");
  }
  if (auto it = j.find("occlusion"); it != j.end()) {
    if (!it->is_number_integer()) {
      throw SchemaError("occlusion must be an integer", path + "/occlusion");
    }
    det.occlusion = it->get<int>();
  }
  if (auto it = j.find("bbox2d"); it != j.end()) {
    det.bbox2d = parse_bbox2d(*it, path + "/bbox2d");
  }
  if (auto it = j.find("alpha"); it != j.end()) {
    det.alpha = need_finite_number(*it, path + "/alpha");
  }
  return det;
}

ordered_json box_to_json(const Box3D& box) {
  ordered_json j;
  j["cx"] = box.cx;
  j["cy"] = box.cy;
  j["cz"] = box.cz;
  j["l"] = box.length;
  j["w"] = box.width;
  j["h"] = box.height;
  j["yaw"] = box.yaw;
  return j;
}

ordered_json bbox2d_to_json(const BBox2D& bb) {
  ordered_json j;
  j["left"] = bb.left;
  j["top"] = bb.top;
  j["right"] = bb.right;
  j["bottom"] = bb.bottom;
  return j;
}

ordered_json gt_to_json(const GroundTruth& gt) {
  ordered_json j;
  j["class"] = gt.class_name;
  j["box"] = box_to_json(gt.box);
  if (gt.truncation) j["truncation"] = *gt.truncation;
  if (gt.occlusion) j["occlusion"] = *gt.occlusion;
  if (gt.bbox2d) j["bbox2d"] = bbox2d_to_json(*gt.bbox2d);
  if (gt.velocity) j["velocity"] = {gt.velocity->vx, gt.velocity->vy};
  if (gt.attribute) j["attribute"] = *gt.attribute;
  if (gt.alpha) j["alpha"] = *gt.alpha;
  if (gt.ignore) j["ignore"] = true;
  return j;
}

ordered_json det_to_json(const Detection& det) {
  ordered_json j;
  j["class"] = det.class_name;
  j["box"] = box_to_json(det.box);
  j["score"] = det.score;
  if (det.velocity) j["velocity"] = {det.velocity->vx, det.velocity->vy};
  if (det.attribute) j["attribute"] = *det.attribute;
  if (det.truncation) j["truncation"] = *det.truncation;
  if (det.occlusion) j["occlusion"] = *det.occlusion;
  if (det.bbox2d) j["bbox2d"] = bbox2d_to_json(*det.bbox2d);
  if (det.alpha) j["alpha"] = *det.alpha;
  return j;
}

}  // namespace

std::vector<GroundTruth> parse_kitti_ground_truth(std::string_view text) {
  std::vector<GroundTruth> out;
  for (const RawLabel& raw : parse_label_lines(text, /*with_score=*/false)) {
    GroundTruth gt;
    gt.class_name = raw.type;
    gt.ignore = (raw.type == "DontCare");
    fill_common(raw, gt.box, gt.truncation, gt.occlusion, gt.bbox2d, gt.alpha);
    out.push_back(std::move(gt));
  }
  return out;
}

std::vector<Detection> parse_kitti_detections(std::string_view text) {
  std::vector<Detection> out;
  for (const RawLabel& raw : parse_label_lines(text, /*with_score=*/true)) {
    Detection det;
    det.class_name = raw.type;
    fill_common(raw, det.box, det.truncation, det.occlusion, det.bbox2d, det.alpha);
    det.score = raw.v[14];
    out.push_back(std::move(det));
  }
  return out;
}

std::string serialize_kitti(const std::vector<GroundTruth>& gts) {
  std::string out;
  char buf[512];
  for (const GroundTruth& gt : gts) {
    require_label_fields(gt);
    char* end = append_line(buf, sizeof buf, gt.class_name.c_str(), *gt.truncation,
                            *gt.occlusion, *gt.alpha, *gt.bbox2d, gt.box, nullptr);
    out.append(buf, end);
  }
  return out;
}

std::string serialize_kitti(const std::vector<Detection>& dets) {
  std::string out;
  char buf[512];
  for (const Detection& det : dets) {
    require_label_fields(det);
    char* end = append_line(buf, sizeof buf, det.class_name.c_str(), *det.truncation,
                            *det.occlusion, *det.alpha, *det.bbox2d, det.box,
                            &det.score);
    out.append(buf, end);
  }
  return out;
}

GroundTruth to_canonical(const GroundTruth& gt, SourceConvention from) {
  if (from == SourceConvention::canonical || gt.ignore) return gt;
  GroundTruth out = gt;
  require_valid_box(Box3D{0, 0, 0, gt.box.length, gt.box.width, gt.box.height, 0});
  out.box = camera_to_canonical(gt.box);
  return out;
}

Detection to_canonical(const Detection& det, SourceConvention from) {
  if (from == SourceConvention::canonical) return det;
  Detection out = det;
  require_valid_box(Box3D{0, 0, 0, det.box.length, det.box.width, det.box.height, 0});
  out.box = camera_to_canonical(det.box);
  return out;
}

GroundTruth from_canonical(const GroundTruth& gt, SourceConvention to) {
  if (to == SourceConvention::canonical || gt.ignore) return gt;
  GroundTruth out = gt;
  out.box = canonical_to_camera(gt.box);
  return out;
}

Detection from_canonical(const Detection& det, SourceConvention to) {
  if (to == SourceConvention::canonical) return det;
  Detection out = det;
  out.box = canonical_to_camera(det.box);
  return out;
}

FrameSet to_canonical(FrameSet fs) {
  if (fs.convention == SourceConvention::canonical) return fs;
  for (Frame& frame : fs.frames) {
    for (GroundTruth& gt : frame.gts) gt = to_canonical(gt, fs.convention);
    for (Detection& det : frame.dets) det = to_canonical(det, fs.convention);
  }
  fs.convention = SourceConvention::canonical;
  return fs;
}

FrameSet load_canonical_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  const json& frames = need_member(root, "frames", "");
  if (!frames.is_array()) throw SchemaError("expected an array", "/frames");

  FrameSet fs;
  fs.convention = SourceConvention::canonical;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string fpath = idx_path("/frames", i);
    const json& jf = frames[i];
    Frame frame;
    frame.id = need_string(need_member(jf, "id", fpath), fpath + "/id");
    if (!seen_ids.insert(frame.id).second) {
      throw SchemaError("duplicate frame id '" + frame.id + "'", fpath + "/id");
    }
    if (auto it = jf.find("gts"); it != jf.end()) {
      if (!it->is_array()) throw SchemaError("expected an array", fpath + "/gts");
      for (std::size_t g = 0; g < it->size(); ++g) {
        frame.gts.push_back(parse_gt((*it)[g], idx_path(fpath + "/gts", g)));
      }
    }
    if (auto it = jf.find("dets"); it != jf.end()) {
      if (!it->is_array()) throw SchemaError("expected an array", fpath + "/dets");
      for (std::size_t d = 0; d < it->size(); ++d) {
        frame.dets.push_back(parse_det((*it)[d], idx_path(fpath + "/dets", d)));
      }
    }
    fs.frames.push_back(std::move(frame));
  }
  return fs;
}

std::string save_canonical_json(const FrameSet& fs) {
  ordered_json root;
  root["frames"] = ordered_json::array();
  for (const Frame& frame : fs.frames) {
    ordered_json jf;
    jf["id"] = frame.id;
    jf["gts"] = ordered_json::array();
    for (const GroundTruth& gt : frame.gts) jf["gts"].push_back(gt_to_json(gt));
    jf["dets"] = ordered_json::array();
    for (const Detection& det : frame.dets) jf["dets"].push_back(det_to_json(det));
    root["frames"].push_back(std::move(jf));
  }
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

FrameSet load_kitti_dirs(const std::filesystem::path& gt_dir,
                         const std::optional<std::filesystem::path>& pred_dir) {
  namespace fsys = std::filesystem;
  if (!fsys::is_directory(gt_dir)) {
    throw std::runtime_error("not a directory: " + gt_dir.string());
  }
  std::vector<fsys::path> files;
  for (const auto& entry : fsys::directory_iterator(gt_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  FrameSet fs;
  fs.convention = SourceConvention::kitti_camera;
  for (const fsys::path& file : files) {
    Frame frame;
    frame.id = file.stem().string();
    try {
      frame.gts = parse_kitti_ground_truth(read_text_file(file));
      if (pred_dir) {
        const fsys::path pred = *pred_dir / file.filename();
        if (fsys::exists(pred)) {
          frame.dets = parse_kitti_detections(read_text_file(pred));
        }
      }
    } catch (const ParseError& e) {
      throw ParseError(file.filename().string() + ": " + e.what(), 0);
    }
    fs.frames.push_back(std::move(frame));
  }
  return to_canonical(std::move(fs));
}

void save_kitti_dirs(const FrameSet& fs, const std::filesystem::path& gt_dir,
                     const std::optional<std::filesystem::path>& pred_dir) {
  namespace fsys = std::filesystem;
  fsys::create_directories(gt_dir);
  if (pred_dir) fsys::create_directories(*pred_dir);
  for (const Frame& frame : fs.frames) {
    std::vector<GroundTruth> gts;
    gts.reserve(frame.gts.size());
    for (const GroundTruth& gt : frame.gts) {
      gts.push_back(from_canonical(gt, SourceConvention::kitti_camera));
    }
    write_text_file(gt_dir / (frame.id + ".txt"), serialize_kitti(gts));
    if (pred_dir) {
      std::vector<Detection> dets;
      dets.reserve(frame.dets.size());
      for (const Detection& det : frame.dets) {
        dets.push_back(from_canonical(det, SourceConvention::kitti_camera));
      }
      write_text_file(*pred_dir / (frame.id + ".txt"), serialize_kitti(dets));
    }
  }
}

}  // namespace det3eval
