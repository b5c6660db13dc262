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
#include <stdexcept>

#include <doctest.h>

#include "det3eval/diagnosis.hpp"
#include "det3eval/geometry.hpp"
#include "helpers.hpp"

using namespace det3eval;
using testutil::make_box;
using testutil::make_det;
using testutil::make_gt;
using testutil::single_frame;
using testutil::unit_cube;

namespace {

DiagnosisConfig iou_config() {
  DiagnosisConfig cfg;
  cfg.family = MetricFamily::iou3d;
  cfg.t_p = 0.7;
  cfg.t_f = 0.1;
  return cfg;
}

long count_of(const ErrorLedger& ledger, ErrorType t, const std::string& scope = {}) {
  return ledger.counts(scope)[static_cast<int>(t)];
}

}  // namespace

TEST_CASE("a precise box under the wrong label is a classification error") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                   {make_det("Cyclist", unit_cube(), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  const FpError& e = ledger.fp_errors[0];
  CHECK(e.tag == ErrorType::classification);
  REQUIRE(e.target.has_value());
  CHECK(e.target->gt_index == 0);
  CHECK(e.target->class_name == "Car");
  CHECK(!e.target_matched);
  // The covered ground truth is explained by the tag, not reported missing.
  CHECK(ledger.missing.empty());
  CHECK(count_of(ledger, ErrorType::classification) == 1);
  CHECK(count_of(ledger, ErrorType::classification, "Cyclist") == 1);
  CHECK(count_of(ledger, ErrorType::classification, "Car") == 0);
}

TEST_CASE("an imprecise same-class box is a localization error with component flags") {
  SUBCASE("center offset") {
    const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                     {make_det("Car", unit_cube(0.5), 0.9)});
    const ErrorLedger ledger = classify_errors(fs, iou_config());
    REQUIRE(ledger.fp_errors.size() == 1);
    CHECK(ledger.fp_errors[0].tag == ErrorType::localization);
    CHECK(ledger.fp_errors[0].off_location);
    CHECK(!ledger.fp_errors[0].off_dimension);
    CHECK(!ledger.fp_errors[0].off_orientation);
    CHECK(ledger.missing.empty());
  }
  SUBCASE("inflated extents") {
    const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                     {make_det("Car", make_box(0, 0, 0, 2, 2, 2), 0.9)});
    const ErrorLedger ledger = classify_errors(fs, iou_config());
    REQUIRE(ledger.fp_errors.size() == 1);
    CHECK(ledger.fp_errors[0].tag == ErrorType::localization);
    CHECK(!ledger.fp_errors[0].off_location);
    CHECK(ledger.fp_errors[0].off_dimension);
    CHECK(!ledger.fp_errors[0].off_orientation);
  }
  SUBCASE("rotated box") {
    const Box3D gt_box = make_box(0, 0, 0, 4, 1, 1, 0.0);
    const Box3D det_box = make_box(0, 0, 0, 4, 1, 1, 0.3);
    const double q = iou3d(det_box, gt_box);
    REQUIRE(q >= 0.1);  // fixture must sit inside the imprecise band
    REQUIRE(q < 0.7);
    const FrameSet fs =
        single_frame({make_gt("Car", gt_box)}, {make_det("Car", det_box, 0.9)});
    const ErrorLedger ledger = classify_errors(fs, iou_config());
    REQUIRE(ledger.fp_errors.size() == 1);
    CHECK(ledger.fp_errors[0].tag == ErrorType::localization);
    CHECK(!ledger.fp_errors[0].off_location);
    CHECK(!ledger.fp_errors[0].off_dimension);
    CHECK(ledger.fp_errors[0].off_orientation);
  }
}

TEST_CASE("wrong class and imprecise box at once tags both, leaving the gt missing") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                   {make_det("Cyclist", unit_cube(0.5), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  CHECK(ledger.fp_errors[0].tag == ErrorType::both);
  REQUIRE(ledger.missing.size() == 1);
  CHECK(ledger.missing[0].gt_index == 0);
}

TEST_CASE("a second precise hit on a claimed ground truth is duplication") {
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube())},
      {make_det("Car", unit_cube(), 0.9), make_det("Car", unit_cube(), 0.8)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  CHECK(ledger.fp_errors[0].det_index == 1);
  CHECK(ledger.fp_errors[0].tag == ErrorType::duplication);
  CHECK(ledger.fp_errors[0].target_matched);
  CHECK(ledger.missing.empty());
}

TEST_CASE("a detection overlapping nothing is background and the gt stays missing") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                   {make_det("Car", unit_cube(50.0), 0.5)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  CHECK(ledger.fp_errors[0].tag == ErrorType::background);
  CHECK(!ledger.fp_errors[0].target.has_value());
  REQUIRE(ledger.missing.size() == 1);
  CHECK(count_of(ledger, ErrorType::missing, "Car") == 1);
}

TEST_CASE("classification outranks localization when both conditions hold") {
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube()), make_gt("Cyclist", unit_cube(0.5))},
      {make_det("Cyclist", unit_cube(), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  CHECK(ledger.fp_errors[0].tag == ErrorType::classification);
  CHECK(ledger.fp_errors[0].target->class_name == "Car");
  // The imprecisely covered same-class gt is not explained by this tag.
  REQUIRE(ledger.missing.size() == 1);
  CHECK(ledger.missing[0].class_name == "Cyclist");
}

TEST_CASE("localization outranks the both tag when its condition holds") {
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube(0.5)), make_gt("Cyclist", unit_cube(-0.5))},
      {make_det("Car", unit_cube(), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  CHECK(ledger.fp_errors[0].tag == ErrorType::localization);
  CHECK(ledger.fp_errors[0].target->class_name == "Car");
  REQUIRE(ledger.missing.size() == 1);
  CHECK(ledger.missing[0].class_name == "Cyclist");
}

TEST_CASE("the foreground threshold must be looser than the matching threshold") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())}, {});
  DiagnosisConfig cfg = iou_config();
  cfg.t_f = 0.7;
  CHECK_THROWS_AS(classify_errors(fs, cfg), std::invalid_argument);
  cfg.family = MetricFamily::center_distance;
  cfg.t_p = 2.0;
  cfg.t_f = 1.0;  // tighter than the matching distance: rejected
  CHECK_THROWS_AS(classify_errors(fs, cfg), std::invalid_argument);
  CHECK(default_tf(MetricFamily::iou3d) == doctest::Approx(0.1));
  CHECK(default_tf(MetricFamily::center_distance) == doctest::Approx(5.0));
}

TEST_CASE("relabeling repairs a classification error and leaves nothing behind") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                   {make_det("Cyclist", unit_cube(), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  const FrameSet fixed = apply_oracle(fs, ledger, ErrorType::classification);
  REQUIRE(fixed.frames[0].dets.size() == 1);
  CHECK(fixed.frames[0].dets[0].class_name == "Car");
  CHECK(fixed.frames[0].dets[0].score == doctest::Approx(0.9));
  const ApCell cell = evaluate_cell(fixed, MetricFamily::iou3d, 0.7, Difficulty::all,
                                    "Car", ApStyle::ap40);
  CHECK(cell.ap == doctest::Approx(1.0).epsilon(1e-12));
  const ErrorLedger again = classify_errors(fixed, iou_config());
  CHECK(again.fp_errors.empty());
  CHECK(again.missing.empty());
}

TEST_CASE("relabeling that would duplicate an existing claim deletes instead") {
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube())},
      {make_det("Car", unit_cube(), 0.9), make_det("Cyclist", unit_cube(), 0.8)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  REQUIRE(ledger.fp_errors.size() == 1);
  CHECK(ledger.fp_errors[0].tag == ErrorType::classification);
  CHECK(ledger.fp_errors[0].target_matched);
  const FrameSet fixed = apply_oracle(fs, ledger, ErrorType::classification);
  REQUIRE(fixed.frames[0].dets.size() == 1);
  CHECK(fixed.frames[0].dets[0].class_name == "Car");
}

TEST_CASE("the class scope limits a repair to one class's errors") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                   {make_det("Cyclist", unit_cube(), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  const FrameSet untouched = apply_oracle(fs, ledger, ErrorType::classification, "Car");
  CHECK(untouched.frames[0].dets[0].class_name == "Cyclist");
  const FrameSet fixed = apply_oracle(fs, ledger, ErrorType::classification, "Cyclist");
  CHECK(fixed.frames[0].dets[0].class_name == "Car");
}

TEST_CASE("box substitution repairs a localization error") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                   {make_det("Car", unit_cube(0.5), 0.9)});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  const FrameSet fixed = apply_oracle(fs, ledger, ErrorType::localization);
  CHECK(fixed.frames[0].dets[0].box.cx == doctest::Approx(0.0));
  const ApCell cell = evaluate_cell(fixed, MetricFamily::iou3d, 0.7, Difficulty::all,
                                    "Car", ApStyle::ap40);
  CHECK(cell.ap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("deletion repairs duplication, background, both and missing") {
  SUBCASE("duplication") {
    const FrameSet fs = single_frame(
        {make_gt("Car", unit_cube())},
        {make_det("Car", unit_cube(), 0.9), make_det("Car", unit_cube(), 0.8)});
    const FrameSet fixed =
        apply_oracle(fs, classify_errors(fs, iou_config()), ErrorType::duplication);
    REQUIRE(fixed.frames[0].dets.size() == 1);
    CHECK(fixed.frames[0].dets[0].score == doctest::Approx(0.9));
  }
  SUBCASE("background") {
    const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                     {make_det("Car", unit_cube(50.0), 0.5)});
    const FrameSet fixed =
        apply_oracle(fs, classify_errors(fs, iou_config()), ErrorType::background);
    CHECK(fixed.frames[0].dets.empty());
  }
  SUBCASE("both") {
    const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                     {make_det("Cyclist", unit_cube(0.5), 0.9)});
    const FrameSet fixed =
        apply_oracle(fs, classify_errors(fs, iou_config()), ErrorType::both);
    CHECK(fixed.frames[0].dets.empty());
  }
  SUBCASE("missing deletes the uncovered ground truth") {
    const FrameSet fs = single_frame({make_gt("Car", unit_cube())},
                                     {make_det("Car", unit_cube(50.0), 0.5)});
    const FrameSet fixed =
        apply_oracle(fs, classify_errors(fs, iou_config()), ErrorType::missing);
    CHECK(fixed.frames[0].gts.empty());
    CHECK(fixed.frames[0].dets.size() == 1);  // the background box stays
  }
}

TEST_CASE("the ranking repair is not a record edit") {
  const FrameSet fs = single_frame({make_gt("Car", unit_cube())}, {});
  const ErrorLedger ledger = classify_errors(fs, iou_config());
  CHECK_THROWS_AS(apply_oracle(fs, ledger, ErrorType::ranking), std::invalid_argument);
}

TEST_CASE("a component fix repairs exactly the chosen box component") {
  const FrameSet offset_scene = single_frame({make_gt("Car", unit_cube())},
                                             {make_det("Car", unit_cube(0.5), 0.9)});
  const ErrorLedger offset_ledger = classify_errors(offset_scene, iou_config());
  const auto ap_of = [](const FrameSet& s) {
    return evaluate_cell(s, MetricFamily::iou3d, 0.7, Difficulty::all, "Car",
                         ApStyle::ap40)
        .ap;
  };
  CHECK(ap_of(apply_component_fix(offset_scene, offset_ledger, BoxComponent::location)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ap_of(apply_component_fix(offset_scene, offset_ledger, BoxComponent::dimension)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const FrameSet fat_scene = single_frame({make_gt("Car", unit_cube())},
                                          {make_det("Car", make_box(0, 0, 0, 2, 2, 2), 0.9)});
  const ErrorLedger fat_ledger = classify_errors(fat_scene, iou_config());
  const FrameSet dim_fixed = apply_component_fix(fat_scene, fat_ledger, BoxComponent::dimension);
  CHECK(dim_fixed.frames[0].dets[0].box.length == doctest::Approx(1.0));
  CHECK(ap_of(dim_fixed) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ap_of(apply_component_fix(fat_scene, fat_ledger, BoxComponent::orientation)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reordering by quality lifts the mid-ranked false positive to the bottom") {
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube()), make_gt("Car", unit_cube(50.0))},
      {make_det("Car", unit_cube(), 0.9), make_det("Car", unit_cube(100.0, 50.0), 0.8),
       make_det("Car", unit_cube(50.0), 0.7)});
  const RankingResult r = ranking_oracle(fs, MetricFamily::iou3d, 0.7, Difficulty::all,
                                         "Car", ApStyle::ap40);
  CHECK(r.ap_before == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(r.ap_after == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.delta == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // Reordering is dominant: interpolated precision never drops at any of the
  // 40 sampled recall levels.
  const auto before = interpolated_precision_40(r.before);
  const auto after = interpolated_precision_40(r.after);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] >= before[i] - 1e-12);

  // Materializing the same order as confidences reproduces the repaired score.
  const FrameSet rescored =
      apply_ranking_scores(fs, MetricFamily::iou3d, 0.7, Difficulty::all);
  REQUIRE(rescored.frames[0].dets.size() == 3);
  const ApCell cell = evaluate_cell(rescored, MetricFamily::iou3d, 0.7, Difficulty::all,
                                    "Car", ApStyle::ap40);
  CHECK(cell.ap == doctest::Approx(r.ap_after).epsilon(1e-12));
}

TEST_CASE("a perfect-overlap duplicate cannot leapfrog a weaker true positive") {
  // At a loose threshold the half-offset detection is a true positive of
  // quality 1/3 while the duplicate overlaps its claimed object perfectly;
  // sorting on quality alone would move the false positive ahead of it and
  // lower the curve. Accurate detections lead instead.
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube()), make_gt("Car", unit_cube(50.0))},
      {make_det("Car", unit_cube(), 0.9), make_det("Car", unit_cube(50.5), 0.7),
       make_det("Car", unit_cube(), 0.5)});
  const RankingResult r = ranking_oracle(fs, MetricFamily::iou3d, 0.25, Difficulty::all,
                                         "Car", ApStyle::ap40);
  CHECK(r.ap_before == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.ap_after == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.delta) <= 1e-12);

  const auto before = interpolated_precision_40(r.before);
  const auto after = interpolated_precision_40(r.after);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] >= before[i] - 1e-12);
}

TEST_CASE("diagnosing a perfect corpus reports zero everywhere") {
  FrameSet fs = single_frame(
      {make_gt("Car", unit_cube()), make_gt("Cyclist", unit_cube(30.0))},
      {make_det("Car", unit_cube(), 0.9), make_det("Cyclist", unit_cube(30.0), 0.8)});
  EvalProfile profile;
  profile.family = MetricFamily::iou3d;
  profile.ap_style = ApStyle::ap40;
  profile.thresholds = {0.7, 0.5};
  profile.tiers = {Difficulty::all};

  const DiagnosisReport report = diagnose(fs, profile, 0.1);
  CHECK(report.baseline.map == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!report.aggregate.has_value());
  REQUIRE(report.cells.size() == 4);
  for (const CellDiagnosis& cell : report.cells) {
    CHECK(cell.baseline_ap == doctest::Approx(1.0).epsilon(1e-12));
    for (double d : cell.delta) CHECK(std::abs(d) <= 1e-12);
    for (long c : cell.counts) CHECK(c == 0);
    for (int k = 0; k < kBoxComponentCount; ++k) {
      CHECK(cell.sub_available[k]);
      CHECK(std::abs(cell.sub_delta[k]) <= 1e-12);
    }
  }
}

TEST_CASE("diagnosis of the one-bad-ranking scene isolates the two live repairs") {
  const FrameSet fs = single_frame(
      {make_gt("Car", unit_cube()), make_gt("Car", unit_cube(50.0))},
      {make_det("Car", unit_cube(), 0.9), make_det("Car", unit_cube(100.0, 50.0), 0.8),
       make_det("Car", unit_cube(50.0), 0.7)});
  EvalProfile profile;
  profile.family = MetricFamily::iou3d;
  profile.ap_style = ApStyle::ap40;
  profile.thresholds = {0.7};
  profile.tiers = {Difficulty::all};

  const DiagnosisReport report = diagnose(fs, profile, 0.1);
  REQUIRE(report.cells.size() == 1);
  const CellDiagnosis& cell = report.cells[0];
  CHECK(cell.baseline_ap == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(cell.delta[static_cast<int>(ErrorType::ranking)] ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(cell.delta[static_cast<int>(ErrorType::background)] ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(cell.counts[static_cast<int>(ErrorType::background)] == 1);
  CHECK(std::abs(cell.delta[static_cast<int>(ErrorType::classification)]) <= 1e-12);
  CHECK(std::abs(cell.delta[static_cast<int>(ErrorType::localization)]) <= 1e-12);
  CHECK(std::abs(cell.delta[static_cast<int>(ErrorType::duplication)]) <= 1e-12);
  CHECK(std::abs(cell.delta[static_cast<int>(ErrorType::missing)]) <= 1e-12);
  REQUIRE(!cell.curve_before.points.empty());
  REQUIRE(!cell.curve_after_ranking.points.empty());
}

TEST_CASE("distance-based profiles roll up into the composite aggregate") {
  auto gt0 = make_gt("Car", unit_cube());
  gt0.velocity = Velocity2D{1.0, 0.0};
  gt0.attribute = "moving";
  auto gt1 = make_gt("Car", unit_cube(40.0));
  gt1.velocity = Velocity2D{0.0, 0.0};
  gt1.attribute = "stationary";
  auto det0 = make_det("Car", unit_cube(), 0.9);
  det0.velocity = gt0.velocity;
  det0.attribute = gt0.attribute;
  auto det1 = make_det("Car", unit_cube(40.0), 0.8);
  det1.velocity = gt1.velocity;
  det1.attribute = gt1.attribute;
  const FrameSet fs = single_frame({gt0, gt1}, {det0, det1});

  const DiagnosisReport report = diagnose(fs, nuscenes_profile(), 5.0);
  REQUIRE(report.aggregate.has_value());
  const AggregateDiagnosis& agg = *report.aggregate;
  CHECK(agg.baseline_nds == doctest::Approx(1.0).epsilon(1e-12));
  for (double d : agg.delta_map) CHECK(std::abs(d) <= 1e-12);
  for (double d : agg.delta_nds) CHECK(std::abs(d) <= 1e-12);
  for (long c : agg.counts) CHECK(c == 0);
  // Center-distance matching sees only the location component.
  CHECK(agg.sub_available[static_cast<int>(BoxComponent::location)]);
  CHECK(!agg.sub_available[static_cast<int>(BoxComponent::dimension)]);
  CHECK(!agg.sub_available[static_cast<int>(BoxComponent::orientation)]);
}
