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

#include "det3eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "det3eval/version.hpp"

namespace det3eval {

using nlohmann::ordered_json;

namespace {

std::string num(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

const char* ap_style_name(ApStyle style) {
  return style == ApStyle::ap40 ? "ap40" : "integral";
}

ordered_json header_json(const ordered_json& config_echo) {
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["config"] = config_echo;
  return doc;
}

ordered_json curve_json(const PRCurve& curve) {
  ordered_json j;
  j["n_gt"] = curve.n_gt;
  j["points"] = ordered_json::array();
  for (const PRPoint& p : curve.points) {
    j["points"].push_back({{"confidence", p.confidence},
                           {"tp", p.n_tp},
                           {"fp", p.n_fp},
                           {"precision", p.precision},
                           {"recall", p.recall}});
  }
  return j;
}

ordered_json tp_block_json(const TpBlock& tp, double alignment_threshold) {
  ordered_json j;
  j["alignment_threshold"] = alignment_threshold;
  j["per_class"] = ordered_json::array();
  for (const ClassTpSummary& c : tp.per_class) {
    ordered_json means;
    for (int m = 0; m < kTpMetricCount; ++m) {
      const char* name = tp_metric_name(static_cast<TpMetric>(m));
      if (c.count > 0 && tp.available[static_cast<std::size_t>(m)]) {
        means[name] = c.mean[static_cast<std::size_t>(m)];
      } else {
        means[name] = nullptr;
      }
    }
    j["per_class"].push_back(
        {{"class", c.class_name}, {"pairs", c.count}, {"means", means}});
  }
  ordered_json mtp, available;
  for (int m = 0; m < kTpMetricCount; ++m) {
    const char* name = tp_metric_name(static_cast<TpMetric>(m));
    available[name] = tp.available[static_cast<std::size_t>(m)];
    if (tp.available[static_cast<std::size_t>(m)]) {
      mtp[name] = tp.mtp[static_cast<std::size_t>(m)];
    } else {
      mtp[name] = nullptr;
    }
  }
  j["mtp"] = mtp;
  j["available"] = available;
  j["nds_components"] = ordered_json::array();
  for (TpMetric m : tp.nds_components) {
    j["nds_components"].push_back(tp_metric_name(m));
  }
  j["nds"] = tp.nds_value;
  return j;
}

ordered_json eval_body(const EvalReport& report) {
  ordered_json j;
  j["family"] = metric_family_name(report.profile.family);
  j["ap_style"] = ap_style_name(report.profile.ap_style);
  j["classes"] = report.classes;
  j["cells"] = ordered_json::array();
  for (const ApCell& cell : report.cells) {
    j["cells"].push_back({{"class", cell.class_name},
                          {"threshold", cell.threshold},
                          {"tier", difficulty_name(cell.tier)},
                          {"n_gt", cell.n_gt},
                          {"ap", cell.ap},
                          {"curve", curve_json(cell.curve)}});
  }
  j["tier_map"] = ordered_json::array();
  for (const TierAggregate& t : report.tier_maps) {
    j["tier_map"].push_back({{"tier", difficulty_name(t.tier)}, {"map", t.map}});
  }
  j["map"] = report.map;
  if (report.tp) {
    j["tp_metrics"] = tp_block_json(*report.tp, report.profile.tp_threshold);
  }
  return j;
}

ordered_json notes_json(const EvalReport& report) {
  ordered_json notes = ordered_json::array();
  if (report.tp) {
    if (auto note = tp_availability_note(*report.tp)) notes.push_back(*note);
  }
  return notes;
}

void append_row(std::string& out, const std::string& cls, const std::string& threshold,
                const std::string& tier, const std::string& metric,
                const std::string& value) {
  out += cls;
  out += ',';
  out += threshold;
  out += ',';
  out += tier;
  out += ',';
  out += metric;
  out += ',';
  out += value;
  out += '\n';
}

std::string csv_num(double v) { return num("%.10g", v); }

void eval_csv_rows(std::string& out, const EvalReport& report) {
  for (const ApCell& cell : report.cells) {
    const std::string thr = csv_num(cell.threshold);
    append_row(out, cell.class_name, thr, difficulty_name(cell.tier), "ap",
               csv_num(cell.ap));
    append_row(out, cell.class_name, thr, difficulty_name(cell.tier), "n_gt",
               std::to_string(cell.n_gt));
  }
  for (const TierAggregate& t : report.tier_maps) {
    append_row(out, "", "", difficulty_name(t.tier), "map", csv_num(t.map));
  }
  append_row(out, "", "", "", "map", csv_num(report.map));
  if (report.tp) {
    const TpBlock& tp = *report.tp;
    const std::string thr = csv_num(report.profile.tp_threshold);
    for (const ClassTpSummary& c : tp.per_class) {
      append_row(out, c.class_name, thr, "all", "tp_pairs", std::to_string(c.count));
      for (int m = 0; m < kTpMetricCount; ++m) {
        if (c.count > 0 && tp.available[static_cast<std::size_t>(m)]) {
          append_row(out, c.class_name, thr, "all",
                     std::string(tp_metric_name(static_cast<TpMetric>(m))) + "_mean",
                     csv_num(c.mean[static_cast<std::size_t>(m)]));
        }
      }
    }
    for (int m = 0; m < kTpMetricCount; ++m) {
      const char* name = tp_metric_name(static_cast<TpMetric>(m));
      if (tp.available[static_cast<std::size_t>(m)]) {
        append_row(out, "", thr, "all", std::string("mtp_") + name,
                   csv_num(tp.mtp[static_cast<std::size_t>(m)]));
      }
      append_row(out, "", thr, "all", std::string("available_") + name,
                 tp.available[static_cast<std::size_t>(m)] ? "1" : "0");
    }
    append_row(out, "", "", "", "nds", csv_num(tp.nds_value));
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// One palette entry per error type, in taxonomy order.
constexpr const char* kTypeColor[kErrorTypeCount] = {
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3"};

constexpr double kChartPi = 3.14159265358979323846;

}  // namespace

const char* tp_metric_human_name(TpMetric m) {
  switch (m) {
    case TpMetric::ate: return "translation";
    case TpMetric::ase: return "scale";
    case TpMetric::aoe: return "orientation";
    case TpMetric::ave: return "velocity";
    case TpMetric::aae: return "attribute";
    case TpMetric::ahe: return "height";
  }
  return "?";
}

std::optional<std::string> tp_availability_note(const TpBlock& tp) {
  static constexpr TpMetric kStandardFive[] = {TpMetric::ate, TpMetric::ase,
                                               TpMetric::aoe, TpMetric::ave,
                                               TpMetric::aae};
  bool all = true;
  for (TpMetric m : kStandardFive) {
    all = all && tp.available[static_cast<std::size_t>(m)];
  }
  if (all) return std::nullopt;
  std::string note = "TP metrics: ";
  bool any = false;
  for (TpMetric m : kStandardFive) {
    if (!tp.available[static_cast<std::size_t>(m)]) continue;
    if (any) note += ", ";
    note += tp_metric_human_name(m);
    any = true;
  }
  if (!any) return std::string("TP metrics: none available");
  note += " only";
  return note;
}

ordered_json eval_report_json(const EvalReport& report,
                              const ordered_json& config_echo) {
  ordered_json doc = header_json(config_echo);
  doc["notes"] = notes_json(report);
  doc.update(eval_body(report));
  return doc;
}

ordered_json diagnosis_report_json(const DiagnosisReport& report,
                                   const ordered_json& config_echo) {
  ordered_json doc = header_json(config_echo);
  doc["notes"] = notes_json(report.baseline);
  doc["family"] = metric_family_name(report.profile.family);
  doc["ap_style"] = ap_style_name(report.profile.ap_style);
  doc["matching_thresholds"] = report.profile.thresholds;
  doc["foreground_threshold"] = report.t_f;
  doc["tiers"] = ordered_json::array();
  for (Difficulty tier : report.profile.tiers) {
    doc["tiers"].push_back(difficulty_name(tier));
  }
  doc["classes"] = report.classes;
  doc["baseline"] = eval_body(report.baseline);

  doc["cells"] = ordered_json::array();
  for (const CellDiagnosis& cell : report.cells) {
    ordered_json errors;
    for (int t = 0; t < kErrorTypeCount; ++t) {
      const auto type = static_cast<ErrorType>(t);
      ordered_json entry;
      entry["delta_ap"] = cell.delta[static_cast<std::size_t>(t)];
      if (type != ErrorType::ranking) {
        entry["count"] = cell.counts[static_cast<std::size_t>(t)];
      }
      errors[error_type_name(type)] = entry;
    }
    ordered_json components;
    for (int c = 0; c < kBoxComponentCount; ++c) {
      const char* name = box_component_name(static_cast<BoxComponent>(c));
      if (cell.sub_available[static_cast<std::size_t>(c)]) {
        components[name] = {{"delta_ap", cell.sub_delta[static_cast<std::size_t>(c)]}};
      } else {
        components[name] = nullptr;
      }
    }
    doc["cells"].push_back({{"class", cell.class_name},
                            {"threshold", cell.threshold},
                            {"tier", difficulty_name(cell.tier)},
                            {"baseline_ap", cell.baseline_ap},
                            {"errors", errors},
                            {"localization_components", components},
                            {"pr_before", curve_json(cell.curve_before)},
                            {"pr_after_ranking", curve_json(cell.curve_after_ranking)}});
  }

  if (report.aggregate) {
    const AggregateDiagnosis& agg = *report.aggregate;
    ordered_json delta_map, delta_nds, counts;
    for (int t = 0; t < kErrorTypeCount; ++t) {
      const char* name = error_type_name(static_cast<ErrorType>(t));
      delta_map[name] = agg.delta_map[static_cast<std::size_t>(t)];
      delta_nds[name] = agg.delta_nds[static_cast<std::size_t>(t)];
      if (static_cast<ErrorType>(t) != ErrorType::ranking) {
        counts[name] = agg.counts[static_cast<std::size_t>(t)];
      }
    }
    ordered_json components;
    for (int c = 0; c < kBoxComponentCount; ++c) {
      const char* name = box_component_name(static_cast<BoxComponent>(c));
      if (agg.sub_available[static_cast<std::size_t>(c)]) {
        components[name] = {
            {"delta_map", agg.sub_delta_map[static_cast<std::size_t>(c)]}};
      } else {
        components[name] = nullptr;
      }
    }
    doc["aggregate"] = {{"baseline_nds", agg.baseline_nds},
                        {"delta_map", delta_map},
                        {"delta_nds", delta_nds},
                        {"counts", counts},
                        {"localization_components_map", components}};
  }
  return doc;
}

ordered_json expected_ledger_json(const GeneratedScene& scene,
                                  const ordered_json& config_echo) {
  ordered_json doc = header_json(config_echo);
  ordered_json counts;
  for (int t = 0; t < kErrorTypeCount; ++t) {
    counts[error_type_name(static_cast<ErrorType>(t))] =
        scene.expected.counts[static_cast<std::size_t>(t)];
  }
  doc["expected_counts"] = counts;
  doc["clean_ap"] = scene.expected.clean_ap;
  long n_gts = 0, n_dets = 0;
  for (const Frame& f : scene.frames.frames) {
    n_gts += static_cast<long>(f.gts.size());
    n_dets += static_cast<long>(f.dets.size());
  }
  doc["frames"] = scene.frames.frames.size();
  doc["ground_truths"] = n_gts;
  doc["detections"] = n_dets;
  return doc;
}

std::string json_text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string eval_report_csv(const EvalReport& report) {
  std::string out = "class,threshold,tier,metric,value\n";
  eval_csv_rows(out, report);
  return out;
}

std::string diagnosis_report_csv(const DiagnosisReport& report) {
  std::string out = "class,threshold,tier,metric,value\n";
  for (const CellDiagnosis& cell : report.cells) {
    const std::string thr = csv_num(cell.threshold);
    const std::string tier = difficulty_name(cell.tier);
    append_row(out, cell.class_name, thr, tier, "baseline_ap",
               csv_num(cell.baseline_ap));
    for (int t = 0; t < kErrorTypeCount; ++t) {
      const auto type = static_cast<ErrorType>(t);
      append_row(out, cell.class_name, thr, tier,
                 std::string("delta_ap_") + error_type_name(type),
                 csv_num(cell.delta[static_cast<std::size_t>(t)]));
      if (type != ErrorType::ranking) {
        append_row(out, cell.class_name, thr, tier,
                   std::string("count_") + error_type_name(type),
                   std::to_string(cell.counts[static_cast<std::size_t>(t)]));
      }
    }
    for (int c = 0; c < kBoxComponentCount; ++c) {
      if (!cell.sub_available[static_cast<std::size_t>(c)]) continue;
      append_row(out, cell.class_name, thr, tier,
                 std::string("delta_ap_") +
                     box_component_name(static_cast<BoxComponent>(c)),
                 csv_num(cell.sub_delta[static_cast<std::size_t>(c)]));
    }
  }
  if (report.aggregate) {
    const AggregateDiagnosis& agg = *report.aggregate;
    append_row(out, "", "", "", "baseline_nds", csv_num(agg.baseline_nds));
    for (int t = 0; t < kErrorTypeCount; ++t) {
      const auto type = static_cast<ErrorType>(t);
      append_row(out, "", "", "", std::string("delta_map_") + error_type_name(type),
                 csv_num(agg.delta_map[static_cast<std::size_t>(t)]));
      append_row(out, "", "", "", std::string("delta_nds_") + error_type_name(type),
                 csv_num(agg.delta_nds[static_cast<std::size_t>(t)]));
      if (type != ErrorType::ranking) {
        append_row(out, "", "", "", std::string("count_") + error_type_name(type),
                   std::to_string(agg.counts[static_cast<std::size_t>(t)]));
      }
    }
    for (int c = 0; c < kBoxComponentCount; ++c) {
      if (!agg.sub_available[static_cast<std::size_t>(c)]) continue;
      append_row(out, "", "", "",
                 std::string("delta_map_") +
                     box_component_name(static_cast<BoxComponent>(c)),
                 csv_num(agg.sub_delta_map[static_cast<std::size_t>(c)]));
    }
  }
  return out;
}

std::string render_error_chart(const std::string& title,
                               const std::array<double, kErrorTypeCount>& delta,
                               const std::array<long, kErrorTypeCount>& counts,
                               const std::array<double, kBoxComponentCount>& sub_delta,
                               const std::array<bool, kBoxComponentCount>& sub_available) {
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
      "viewBox=\"0 0 640 400\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"16\" y=\"28\" font-size=\"16\" font-weight=\"bold\">" +
         xml_escape(title) + "</text>\n";

  const double cx = 170.0, cy = 215.0, r = 115.0;
  double total = 0.0;
  for (double d : delta) total += std::max(0.0, d);

  if (total <= 1e-12) {
    svg += "<circle cx=\"" + num("%.2f", cx) + "\" cy=\"" + num("%.2f", cy) +
           "\" r=\"" + num("%.2f", r) +
           "\" fill=\"#eeeeee\" stroke=\"#bbbbbb\"/>\n";
    svg += "<text x=\"" + num("%.2f", cx) + "\" y=\"" + num("%.2f", cy + 5.0) +
           "\" font-size=\"14\" fill=\"#666666\" text-anchor=\"middle\">no errors"
           "</text>\n";
  } else {
    double cum = 0.0;
    for (int t = 0; t < kErrorTypeCount; ++t) {
      const double share = std::max(0.0, delta[static_cast<std::size_t>(t)]) / total;
      if (share <= 0.0) continue;
      if (share >= 1.0 - 1e-9) {
        svg += "<circle cx=\"" + num("%.2f", cx) + "\" cy=\"" + num("%.2f", cy) +
               "\" r=\"" + num("%.2f", r) + "\" fill=\"" +
               kTypeColor[t] + "\" stroke=\"#ffffff\"/>\n";
        break;
      }
      const double a0 = -kChartPi / 2.0 + 2.0 * kChartPi * cum;
      const double a1 = -kChartPi / 2.0 + 2.0 * kChartPi * (cum + share);
      const double x0 = cx + r * std::cos(a0), y0 = cy + r * std::sin(a0);
      const double x1 = cx + r * std::cos(a1), y1 = cy + r * std::sin(a1);
      svg += "<path d=\"M " + num("%.3f", cx) + " " + num("%.3f", cy) + " L " +
             num("%.3f", x0) + " " + num("%.3f", y0) + " A " + num("%.3f", r) + " " +
             num("%.3f", r) + " 0 " + (share > 0.5 ? "1" : "0") + " 1 " +
             num("%.3f", x1) + " " + num("%.3f", y1) + " Z\" fill=\"" +
             kTypeColor[t] + "\" stroke=\"#ffffff\"/>\n";
      cum += share;
    }
  }

  double y = 70.0;
  for (int t = 0; t < kErrorTypeCount; ++t) {
    const auto type = static_cast<ErrorType>(t);
    svg += "<rect x=\"330\" y=\"" + num("%.2f", y - 11.0) +
           "\" width=\"14\" height=\"14\" fill=\"" + kTypeColor[t] + "\"/>\n";
    std::string label = std::string(error_type_name(type)) + "  " +
                        num("%+.2f", delta[static_cast<std::size_t>(t)]);
    if (type != ErrorType::ranking) {
      label += " (n=" + std::to_string(counts[static_cast<std::size_t>(t)]) + ")";
    }
    svg += "<text x=\"352\" y=\"" + num("%.2f", y) + "\" font-size=\"13\">" +
           xml_escape(label) + "</text>\n";
    y += 26.0;
  }

  y += 14.0;
  svg += "<text x=\"330\" y=\"" + num("%.2f", y) +
         "\" font-size=\"13\" font-weight=\"bold\">localization components</text>\n";
  y += 20.0;
  double sub_max = 0.0;
  for (int c = 0; c < kBoxComponentCount; ++c) {
    if (sub_available[static_cast<std::size_t>(c)]) {
      sub_max = std::max(sub_max, std::max(0.0, sub_delta[static_cast<std::size_t>(c)]));
    }
  }
  for (int c = 0; c < kBoxComponentCount; ++c) {
    const char* name = box_component_name(static_cast<BoxComponent>(c));
    svg += "<text x=\"330\" y=\"" + num("%.2f", y) + "\" font-size=\"12\">" +
           xml_escape(name) + "</text>\n";
    if (sub_available[static_cast<std::size_t>(c)]) {
      const double value = std::max(0.0, sub_delta[static_cast<std::size_t>(c)]);
      const double width = sub_max > 0.0 ? 160.0 * value / sub_max : 0.0;
      svg += "<rect x=\"412\" y=\"" + num("%.2f", y - 10.0) + "\" width=\"" +
             num("%.2f", width) + "\" height=\"12\" fill=\"" +
             kTypeColor[static_cast<int>(ErrorType::localization)] + "\"/>\n";
      svg += "<text x=\"" + num("%.2f", 412.0 + width + 6.0) + "\" y=\"" +
             num("%.2f", y) + "\" font-size=\"12\">" +
             num("%+.2f", sub_delta[static_cast<std::size_t>(c)]) + "</text>\n";
    } else {
      svg += "<text x=\"412\" y=\"" + num("%.2f", y) +
             "\" font-size=\"12\" fill=\"#999999\">n/a</text>\n";
    }
    y += 22.0;
  }

  svg += "</svg>\n";
  return svg;
}

namespace {

constexpr double kPlotX0 = 60.0, kPlotX1 = 610.0;
constexpr double kPlotY0 = 40.0, kPlotY1 = 380.0;

double plot_x(double recall) { return kPlotX0 + recall * (kPlotX1 - kPlotX0); }
double plot_y(double precision) { return kPlotY1 - precision * (kPlotY1 - kPlotY0); }

void append_point(std::string& path, double x, double y) {
  path += path.empty() ? "M " : " L ";
  path += num("%.2f", x) + " " + num("%.2f", y);
}

std::string step_path(const PRCurve& curve) {
  std::string path;
  double prev_p = curve.points.empty() ? 0.0 : curve.points.front().precision;
  append_point(path, plot_x(0.0), plot_y(prev_p));
  for (const PRPoint& p : curve.points) {
    append_point(path, plot_x(p.recall), plot_y(prev_p));
    append_point(path, plot_x(p.recall), plot_y(p.precision));
    prev_p = p.precision;
  }
  return path;
}

std::string envelope_path(const PRCurve& curve) {
  // Distinct achieved recalls, ascending, with the interpolated precision on
  // each interval (constant between consecutive recalls, zero beyond the
  // last).
  std::vector<double> marks;
  for (const PRPoint& p : curve.points) marks.push_back(p.recall);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  if (marks.empty()) return {};

  const auto env_at = [&](double recall) {
    double best = 0.0;
    for (const PRPoint& p : curve.points) {
      if (p.recall >= recall) best = std::max(best, p.precision);
    }
    return best;
  };

  std::string path;
  append_point(path, plot_x(0.0), plot_y(env_at(marks.front())));
  double prev_r = 0.0;
  for (double r : marks) {
    const double e = env_at(r);
    append_point(path, plot_x(prev_r), plot_y(e));
    append_point(path, plot_x(r), plot_y(e));
    prev_r = r;
  }
  if (prev_r < 1.0) {
    append_point(path, plot_x(prev_r), plot_y(0.0));
    append_point(path, plot_x(1.0), plot_y(0.0));
  }
  return path;
}

void append_curve(std::string& svg, const PRCurve& curve, const char* color) {
  if (curve.points.empty()) return;
  svg += "<path d=\"" + step_path(curve) + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1.8\"/>\n";
  svg += "<path d=\"" + envelope_path(curve) + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1.2\" stroke-dasharray=\"6 3\" opacity=\"0.75\"/>\n";
}

}  // namespace

namespace {

std::string pr_frame(const std::string& title) {
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
      "viewBox=\"0 0 640 420\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"640\" height=\"420\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"16\" y=\"24\" font-size=\"15\" font-weight=\"bold\">" +
         xml_escape(title) + "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double frac = static_cast<double>(i) / 5.0;
    const double gx = plot_x(frac);
    const double gy = plot_y(frac);
    svg += "<line x1=\"" + num("%.2f", gx) + "\" y1=\"" + num("%.2f", kPlotY0) +
           "\" x2=\"" + num("%.2f", gx) + "\" y2=\"" + num("%.2f", kPlotY1) +
           "\" stroke=\"#e5e5e5\"/>\n";
    svg += "<line x1=\"" + num("%.2f", kPlotX0) + "\" y1=\"" + num("%.2f", gy) +
           "\" x2=\"" + num("%.2f", kPlotX1) + "\" y2=\"" + num("%.2f", gy) +
           "\" stroke=\"#e5e5e5\"/>\n";
    svg += "<text x=\"" + num("%.2f", gx) + "\" y=\"" + num("%.2f", kPlotY1 + 18.0) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + num("%.1f", frac) +
           "</text>\n";
    svg += "<text x=\"" + num("%.2f", kPlotX0 - 8.0) + "\" y=\"" +
           num("%.2f", gy + 4.0) + "\" font-size=\"11\" text-anchor=\"end\">" +
           num("%.1f", frac) + "</text>\n";
  }
  svg += "<rect x=\"" + num("%.2f", kPlotX0) + "\" y=\"" + num("%.2f", kPlotY0) +
         "\" width=\"" + num("%.2f", kPlotX1 - kPlotX0) + "\" height=\"" +
         num("%.2f", kPlotY1 - kPlotY0) + "\" fill=\"none\" stroke=\"#444444\"/>\n";
  svg += "<text x=\"" + num("%.2f", (kPlotX0 + kPlotX1) / 2.0) +
         "\" y=\"414\" font-size=\"12\" text-anchor=\"middle\">recall</text>\n";
  svg += "<text x=\"16\" y=\"" + num("%.2f", (kPlotY0 + kPlotY1) / 2.0) +
         "\" font-size=\"12\" transform=\"rotate(-90 16 " +
         num("%.2f", (kPlotY0 + kPlotY1) / 2.0) + ")\" text-anchor=\"middle\">"
         "precision</text>\n";
  return svg;
}

}  // namespace

std::string render_pr(const std::string& title, const PRCurve& before,
                      const PRCurve& after) {
  std::string svg = pr_frame(title);
  append_curve(svg, before, "#999999");
  append_curve(svg, after, "#2b7de9");

  svg += "<line x1=\"440\" y1=\"52\" x2=\"470\" y2=\"52\" stroke=\"#999999\" "
         "stroke-width=\"1.8\"/>\n";
  svg += "<text x=\"476\" y=\"56\" font-size=\"12\">before reordering</text>\n";
  svg += "<line x1=\"440\" y1=\"70\" x2=\"470\" y2=\"70\" stroke=\"#2b7de9\" "
         "stroke-width=\"1.8\"/>\n";
  svg += "<text x=\"476\" y=\"74\" font-size=\"12\">after reordering</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string render_pr_measured(const std::string& title, const PRCurve& curve) {
  std::string svg = pr_frame(title);
  append_curve(svg, curve, "#2b7de9");
  svg += "<line x1=\"440\" y1=\"52\" x2=\"470\" y2=\"52\" stroke=\"#2b7de9\" "
         "stroke-width=\"1.8\"/>\n";
  svg += "<text x=\"476\" y=\"56\" font-size=\"12\">measured</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace det3eval
