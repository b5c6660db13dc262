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

#include <json.hpp>

#include "det3eval/diagnosis.hpp"
#include "det3eval/evaluate.hpp"
#include "det3eval/synth.hpp"

namespace det3eval {

// All report documents share a header: schema version, tool identity, and an
// echo of the run configuration. The echo must hold only result-determining
// settings (never the parallelism degree), so identical inputs always render
// byte-identical documents.
nlohmann::ordered_json eval_report_json(const EvalReport& report,
                                        const nlohmann::ordered_json& config_echo);
nlohmann::ordered_json diagnosis_report_json(const DiagnosisReport& report,
                                             const nlohmann::ordered_json& config_echo);
nlohmann::ordered_json expected_ledger_json(const GeneratedScene& scene,
                                            const nlohmann::ordered_json& config_echo);

// Canonical serialization of a report document: two-space indent, trailing
// newline.
std::string json_text(const nlohmann::ordered_json& doc);

// Long-form tables, one row per (class, threshold, tier, metric).
std::string eval_report_csv(const EvalReport& report);
std::string diagnosis_report_csv(const DiagnosisReport& report);

// Share-of-gains pie over the seven error types plus a bar triple for the
// localization components. Fixed palette and ordering; labels to two
// decimals; byte-deterministic output.
std::string render_error_chart(const std::string& title,
                               const std::array<double, kErrorTypeCount>& delta,
                               const std::array<long, kErrorTypeCount>& counts,
                               const std::array<double, kBoxComponentCount>& sub_delta,
                               const std::array<bool, kBoxComponentCount>& sub_available);

// Precision/recall step curves before and after the quality reordering, each
// with its interpolated-precision envelope.
std::string render_pr(const std::string& title, const PRCurve& before,
                      const PRCurve& after);

// One measured curve with its envelope (plain evaluation, no counterfactual).
std::string render_pr_measured(const std::string& title, const PRCurve& curve);

// Display names for the alignment metrics (translation, scale, ...).
const char* tp_metric_human_name(TpMetric m);

// "TP metrics: translation, scale, orientation only" when part of the
// standard five is unavailable; nullopt when all five are measured.
std::optional<std::string> tp_availability_note(const TpBlock& tp);

}  // namespace det3eval
