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
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "det3eval/evaluate.hpp"

namespace det3eval {

// The error taxonomy. Every false positive receives exactly one of the first
// five tags; missing covers undetected ground truth not already explained by
// a classification or localization tag; ranking is the ordering mismatch
// between confidence and localization quality (it tags no individual record).
enum class ErrorType {
  classification,
  localization,
  both,          // wrong class and imprecise box at once
  duplication,
  background,
  missing,
  ranking,
};
inline constexpr int kErrorTypeCount = 7;
const char* error_type_name(ErrorType t);

// Components a localization repair can be restricted to.
enum class BoxComponent { location, dimension, orientation };
inline constexpr int kBoxComponentCount = 3;
const char* box_component_name(BoxComponent c);

// Foreground threshold convention: detections whose best quality falls below
// t_f are background; between t_f and the matching threshold they are
// imprecise foreground.
double default_tf(MetricFamily family);

struct DiagnosisConfig {
  MetricFamily family = MetricFamily::iou3d;
  double t_p = 0.7;   // matching threshold (IoU fraction, or meters)
  double t_f = 0.1;   // foreground threshold (IoU fraction, or meters)
  Difficulty tier = Difficulty::all;
  std::vector<std::string> classes;  // evaluation set; empty derives from GT
};

struct GtRef {
  std::size_t frame_index = 0;
  std::size_t gt_index = 0;
  std::string class_name;
};

struct FpError {
  std::size_t frame_index = 0;
  std::size_t det_index = 0;
  std::string det_class;
  ErrorType tag = ErrorType::background;
  // classification: the other-class ground truth the box sits on;
  // localization: the same-class ground truth it imprecisely covers;
  // duplication: the already-claimed ground truth.
  std::optional<GtRef> target;
  bool target_matched = false;  // target already claimed by a true positive
  // localization only: which box components actually differ from the target.
  bool off_location = false;
  bool off_dimension = false;
  bool off_orientation = false;
};

struct ErrorLedger {
  DiagnosisConfig config;
  std::vector<FpError> fp_errors;  // ordered by (frame, detection index)
  std::vector<GtRef> missing;      // ordered by (frame, gt index)

  // Per-type tallies. class_scope empty counts everything; otherwise FP tags
  // are counted by detection class and missing by ground-truth class. The
  // ranking slot is always zero.
  std::array<long, kErrorTypeCount> counts(const std::string& class_scope = {}) const;
};

// Tags every false positive under the configured matching and collects the
// uncovered missing ground truths. Target selection and ground-truth activity
// are restricted to the evaluation class set and the configured tier, but
// detections of classes outside the set are still tagged (a cross-class
// confusion lands on evaluated ground truth regardless of its own label).
// Throws std::invalid_argument when t_f does not lie on the loose side of
// t_p for the family.
ErrorLedger classify_errors(const FrameSet& fs, const DiagnosisConfig& config);

// Counterfactual repair of one error type, applied to a copy of the corpus:
//   classification  relabel the detection to the target's class (keep score);
//                   drop it instead when that would duplicate an existing or
//                   higher-scoring claim on the same target
//   localization    substitute the target's box, same duplicate rule
//   both/duplication/background  delete the tagged detections
//   missing         delete the tagged ground truths
// class_scope empty repairs every class; otherwise only errors attributed to
// that class (by detection class, or ground-truth class for missing).
// ErrorType::ranking is not expressible as a record edit here; use
// ranking_oracle / apply_ranking_scores. Throws std::invalid_argument for it.
FrameSet apply_oracle(const FrameSet& fs, const ErrorLedger& ledger, ErrorType type,
                      const std::string& class_scope = {});

// Partial localization repair: overwrite only the chosen box component
// (center, extents, or yaw) of localization-tagged detections with the
// target's values. No deletions; detections keep their scores.
FrameSet apply_component_fix(const FrameSet& fs, const ErrorLedger& ledger,
                             BoxComponent component, const std::string& class_scope = {});

struct RankingResult {
  PRCurve before;
  PRCurve after;
  double ap_before = 0.0;
  double ap_after = 0.0;
  double delta = 0.0;  // ap_after - ap_before
};

// Reorders one class's detections with accurate detections first — true
// positives by descending matched quality, then the rest by their best
// quality against active same-class ground truth — and reports both curves.
// Quality ties keep the original confidence order. Verdicts stay as matched
// under the baseline order (the repair recalibrates confidence, it does not
// re-decide matches), so the repaired curve dominates the baseline curve at
// every recall level on any input.
RankingResult ranking_oracle(const FrameSet& fs, MetricFamily family, double threshold,
                             Difficulty tier, const std::string& class_name, ApStyle style);

// Materializes the same reordering as new confidence scores across all
// classes, so a full evaluation can be re-run on the result.
FrameSet apply_ranking_scores(const FrameSet& fs, MetricFamily family, double threshold,
                              Difficulty tier);

struct CellDiagnosis {
  std::string class_name;
  double threshold = 0.0;
  Difficulty tier = Difficulty::all;
  double baseline_ap = 0.0;
  std::array<double, kErrorTypeCount> delta{};   // AP gain per repaired type
  std::array<long, kErrorTypeCount> counts{};    // ledger tallies for this class
  std::array<double, kBoxComponentCount> sub_delta{};
  std::array<bool, kBoxComponentCount> sub_available{};
  PRCurve curve_before;
  PRCurve curve_after_ranking;
};

// Corpus-level roll-up for profiles evaluated across distance thresholds:
// mean AP gains over every (class, threshold) cell, plus composite-score
// gains from a single repair at the alignment threshold.
struct AggregateDiagnosis {
  std::array<double, kErrorTypeCount> delta_map{};
  std::array<double, kErrorTypeCount> delta_nds{};
  std::array<long, kErrorTypeCount> counts{};    // ledger at the alignment threshold
  std::array<double, kBoxComponentCount> sub_delta_map{};
  std::array<bool, kBoxComponentCount> sub_available{};
  double baseline_nds = 0.0;
};

struct DiagnosisReport {
  EvalProfile profile;
  double t_f = 0.1;
  std::vector<std::string> classes;
  EvalReport baseline;
  std::vector<CellDiagnosis> cells;  // class-major, then threshold, then tier
  std::optional<AggregateDiagnosis> aggregate;  // with_tp_metrics profiles
};

// Full diagnosis: baseline evaluation, one ledger per (threshold, tier), and
// per-cell AP gains with each repair applied independently to the unmodified
// baseline. Volumetric profiles get all three partial localization repairs;
// center-distance matching is blind to dimensions and yaw, so only the
// location component is measured there (the others are marked unavailable).
DiagnosisReport diagnose(const FrameSet& fs, const EvalProfile& profile, double t_f,
                         int jobs = 1);

}  // namespace det3eval
