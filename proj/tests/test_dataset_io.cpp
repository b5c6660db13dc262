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

#include <cmath>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "det3eval/dataset_io.hpp"
#include "det3eval/errors.hpp"
#include "det3eval/synth.hpp"
#include "helpers.hpp"

using namespace det3eval;
using testutil::make_det;
using testutil::make_gt;
using testutil::single_frame;
using testutil::unit_cube;

namespace {

const std::string kGtLine =
    "Car 0.00 0 -1.58 100.00 100.00 150.00 180.00 1.65 1.80 4.20 "
    "0.00 1.65 10.00 -1.58\n";
const std::string kDontCareLine =
    "DontCare -1.00 -1 -10.00 503.89 169.71 590.61 190.13 -1.00 -1.00 -1.00 "
    "-1000.00 -1000.00 -1000.00 -10.00\n";
const std::string kDetLine =
    "Car 0.00 0 -1.58 100.00 100.00 150.00 180.00 1.65 1.80 4.20 "
    "0.00 1.65 10.00 -1.58 0.87\n";

}  // namespace

TEST_CASE("label lines parse into camera-frame records") {
  const auto gts = parse_kitti_ground_truth(kGtLine);
  REQUIRE(gts.size() == 1);
  const GroundTruth& gt = gts[0];
  CHECK(gt.class_name == "Car");
  CHECK(!gt.ignore);
  CHECK(*gt.truncation == doctest::Approx(0.0));
  CHECK(*gt.occlusion == 0);
  CHECK(*gt.alpha == doctest::Approx(-1.58));
  CHECK(gt.bbox2d->height() == doctest::Approx(80.0));
  CHECK(gt.box.height == doctest::Approx(1.65));
  CHECK(gt.box.width == doctest::Approx(1.80));
  CHECK(gt.box.length == doctest::Approx(4.20));
  CHECK(gt.box.cx == doctest::Approx(0.0));   // camera x
  CHECK(gt.box.cy == doctest::Approx(1.65));  // camera y
  CHECK(gt.box.cz == doctest::Approx(10.0));  // camera z
}

TEST_CASE("camera to canonical moves the center and flips axes") {
  auto gts = parse_kitti_ground_truth(kGtLine);
  const GroundTruth canon = to_canonical(gts[0], SourceConvention::kitti_camera);
  CHECK(canon.box.cx == doctest::Approx(10.0));
  CHECK(canon.box.cy == doctest::Approx(0.0));
  CHECK(canon.box.cz == doctest::Approx(-0.825));
  CHECK(canon.box.length == doctest::Approx(4.20));
}

TEST_CASE("label serialization is the parser's inverse, byte for byte") {
  const std::string text = kGtLine + kDontCareLine;
  CHECK(serialize_kitti(parse_kitti_ground_truth(text)) == text);
  CHECK(serialize_kitti(parse_kitti_detections(kDetLine)) == kDetLine);
}

TEST_CASE("sentinel rows are excluded from evaluation but preserved") {
  const auto gts = parse_kitti_ground_truth(kDontCareLine);
  REQUIRE(gts.size() == 1);
  CHECK(gts[0].ignore);
  CHECK(gts[0].box.cx == doctest::Approx(-1000.0));
  // Conversion leaves sentinel geometry untouched.
  const GroundTruth canon = to_canonical(gts[0], SourceConvention::kitti_camera);
  CHECK(canon.box.cx == doctest::Approx(-1000.0));
}

TEST_CASE("detections carry their score") {
  const auto dets = parse_kitti_detections(kDetLine);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].score == doctest::Approx(0.87));
}

TEST_CASE("malformed label lines report their position") {
  try {
    parse_kitti_ground_truth("Car 1 2 3\n");
    FAIL("expected a parse failure");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_kitti_ground_truth(kGtLine + "Car bogus\n"), ParseError);
  // Detection lines need the score field.
  CHECK_THROWS_AS(parse_kitti_detections(kGtLine), ParseError);
}

TEST_CASE("camera conversion inverts to within rounding") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    GroundTruth gt = make_gt("Car", unit_cube());
    gt.box.cx = rng.uniform(-20, 20);
    gt.box.cy = rng.uniform(-2, 2);
    gt.box.cz = rng.uniform(2, 60);
    gt.box.length = rng.uniform(0.5, 5);
    gt.box.width = rng.uniform(0.5, 2);
    gt.box.height = rng.uniform(0.5, 2);
    gt.box.yaw = rng.uniform(-3.1, 3.1);

    const GroundTruth canon = to_canonical(gt, SourceConvention::kitti_camera);
    const GroundTruth back = from_canonical(canon, SourceConvention::kitti_camera);
    CHECK(std::abs(back.box.cx - gt.box.cx) < 1e-12);
    CHECK(std::abs(back.box.cy - gt.box.cy) < 1e-12);
    CHECK(std::abs(back.box.cz - gt.box.cz) < 1e-12);
    CHECK(std::abs(back.box.yaw - gt.box.yaw) < 1e-9);
  }
}

TEST_CASE("canonical JSON survives a save/load cycle with identical values") {
  auto gt = make_gt("Car", unit_cube(1.5, -2.0, 0.8));
  gt.velocity = Velocity2D{1.0, -0.5};
  gt.attribute = "moving";
  auto det = make_det("Car", unit_cube(1.4, -2.1, 0.8, 0.3), 0.75);
  det.velocity = Velocity2D{0.9, -0.4};
  FrameSet fs = single_frame({gt}, {det});
  fs.frames.push_back(testutil::make_frame("000001", {}, {}));

  const std::string text = save_canonical_json(fs);
  const FrameSet loaded = load_canonical_json(text);
  CHECK(save_canonical_json(loaded) == text);
  CHECK(nlohmann::json::parse(save_canonical_json(loaded)) ==
        nlohmann::json::parse(text));
  REQUIRE(loaded.frames.size() == 2);
  REQUIRE(loaded.frames[0].dets.size() == 1);
  CHECK(loaded.frames[0].dets[0].velocity->vx == doctest::Approx(0.9));
}

TEST_CASE("canonical JSON rejects out-of-range and malformed input") {
  CHECK_THROWS_AS(load_canonical_json("{"), ParseError);
  const std::string bad_score = R"({"frames":[{"id":"f","gts":[],"dets":[
      {"class":"Car","box":{"cx":0,"cy":0,"cz":0,"l":1,"w":1,"h":1,"yaw":0},
       "score":1.5}]}]})";
  CHECK_THROWS_AS(load_canonical_json(bad_score), SchemaError);
  try {
    load_canonical_json(bad_score);
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("score") != std::string::npos);
  }
}
