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

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "det3eval/dataset_io.hpp"
#include "det3eval/diagnosis.hpp"
#include "det3eval/errors.hpp"
#include "det3eval/evaluate.hpp"
#include "det3eval/report.hpp"
#include "det3eval/synth.hpp"
#include "det3eval/version.hpp"

namespace {

namespace fsys = std::filesystem;
using det3eval::Difficulty;
using det3eval::EvalProfile;
using det3eval::FrameSet;
using det3eval::MetricFamily;
using nlohmann::ordered_json;

// Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 internal.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int fail(int code, const std::string& message) {
  std::cerr << "det3eval: error: " << one_line(message) << "\n";
  return code;
}

// All output files are staged in memory and flushed together, so a failing
// run leaves nothing half-written on disk.
class OutputStage {
 public:
  void add(fsys::path path, std::string content) {
    staged_.emplace_back(std::move(path), std::move(content));
  }

  void flush() {
    std::vector<fsys::path> written;
    try {
      for (const auto& [path, content] : staged_) {
        if (path.has_parent_path()) fsys::create_directories(path.parent_path());
        det3eval::write_text_file(path, content);
        written.push_back(path);
      }
    } catch (...) {
      std::error_code ec;
      for (const fsys::path& path : written) fsys::remove(path, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fsys::path, std::string>> staged_;
};

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::string threshold_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

fsys::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DET3EVAL_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

struct InputArgs {
  std::string scene;     // canonical JSON file
  std::string gt_dir;    // KITTI label directory
  std::string pred_dir;  // KITTI detection directory
};

void add_input_options(CLI::App* cmd, InputArgs* in) {
  cmd->add_option("--input", in->scene, "Scene file in the canonical JSON schema");
  cmd->add_option("--gt-dir", in->gt_dir, "Directory of KITTI-format label files");
  cmd->add_option("--pred-dir", in->pred_dir,
                  "Directory of KITTI-format detection files (with scores)");
}

FrameSet load_input(const InputArgs& in) {
  const bool json_mode = !in.scene.empty();
  const bool dir_mode = !in.gt_dir.empty();
  if (json_mode == dir_mode) {
    throw UsageError("give exactly one of --input or --gt-dir");
  }
  if (json_mode && !in.pred_dir.empty()) {
    throw UsageError("--pred-dir only applies to --gt-dir input");
  }
  if (json_mode) {
    return det3eval::load_canonical_json(det3eval::read_text_file(in.scene));
  }
  std::optional<fsys::path> pred;
  if (!in.pred_dir.empty()) pred = in.pred_dir;
  return det3eval::load_kitti_dirs(in.gt_dir, pred);
}

struct ProfileArgs {
  std::string profile = "kitti";
  std::vector<double> iou_thresholds;
  std::vector<double> distance_thresholds;
  std::vector<std::string> classes;
  std::string difficulty;
};

void add_profile_options(CLI::App* cmd, ProfileArgs* p) {
  cmd->add_option("--profile", p->profile, "Metric profile")
      ->check(CLI::IsMember({"kitti", "nuscenes"}))
      ->capture_default_str();
  cmd->add_option("--iou-thresholds", p->iou_thresholds,
                  "Volumetric matching thresholds (kitti profile)")
      ->delimiter(',');
  cmd->add_option("--distance-thresholds", p->distance_thresholds,
                  "Center-distance matching thresholds in meters (nuscenes profile)")
      ->delimiter(',');
  cmd->add_option("--classes", p->classes,
                  "Evaluation classes (default: every ground-truth class)")
      ->delimiter(',');
  cmd->add_option("--difficulty", p->difficulty,
                  "Annotation tier: easy, moderate, hard or all (default: all "
                  "KITTI tiers when the labels carry image-plane metadata)");
}

bool has_tier_metadata(const FrameSet& fs) {
  for (const auto& frame : fs.frames) {
    for (const auto& gt : frame.gts) {
      if (!gt.ignore && gt.bbox2d && gt.truncation && gt.occlusion) return true;
    }
  }
  return false;
}

EvalProfile resolve_profile(const ProfileArgs& args, const FrameSet& fs) {
  EvalProfile profile = args.profile == "kitti" ? det3eval::kitti_profile()
                                                : det3eval::nuscenes_profile();
  if (!args.iou_thresholds.empty()) {
    if (profile.family != MetricFamily::iou3d) {
      throw UsageError("--iou-thresholds applies to the kitti profile");
    }
    profile.thresholds = args.iou_thresholds;
  }
  if (!args.distance_thresholds.empty()) {
    if (profile.family != MetricFamily::center_distance) {
      throw UsageError("--distance-thresholds applies to the nuscenes profile");
    }
    profile.thresholds = args.distance_thresholds;
  }
  for (double t : profile.thresholds) {
    const bool ok = profile.family == MetricFamily::iou3d ? (t > 0.0 && t <= 1.0)
                                                          : (t > 0.0 && t < 1e6);
    if (!ok) throw UsageError("threshold out of range: " + threshold_text(t));
  }
  profile.classes = args.classes;

  if (!args.difficulty.empty()) {
    const auto tier = det3eval::difficulty_from_name(args.difficulty);
    if (!tier || *tier == Difficulty::ignored) {
      throw UsageError("unknown difficulty: " + args.difficulty);
    }
    profile.tiers = {*tier};
  } else if (profile.family == MetricFamily::iou3d) {
    profile.tiers = has_tier_metadata(fs)
                        ? std::vector<Difficulty>{Difficulty::easy, Difficulty::moderate,
                                                  Difficulty::hard}
                        : std::vector<Difficulty>{Difficulty::all};
  }
  return profile;
}

std::vector<std::string> parse_formats(const std::vector<std::string>& raw) {
  std::vector<std::string> formats;
  for (const std::string& f : raw) {
    if (f != "json" && f != "csv" && f != "svg") {
      throw UsageError("unknown output format: " + f);
    }
    if (std::find(formats.begin(), formats.end(), f) == formats.end()) {
      formats.push_back(f);
    }
  }
  return formats;
}

ordered_json profile_echo(const std::string& command, const ProfileArgs& args,
                          const EvalProfile& profile, const InputArgs& in,
                          const std::vector<std::string>& formats) {
  ordered_json echo;
  echo["command"] = command;
  echo["profile"] = args.profile;
  echo["family"] = det3eval::metric_family_name(profile.family);
  echo["thresholds"] = profile.thresholds;
  ordered_json tiers = ordered_json::array();
  for (Difficulty tier : profile.tiers) tiers.push_back(det3eval::difficulty_name(tier));
  echo["tiers"] = tiers;
  echo["classes"] = profile.classes;
  if (profile.with_tp_metrics) {
    echo["alignment_threshold"] = profile.tp_threshold;
  }
  ordered_json inputs;
  if (!in.scene.empty()) {
    inputs["scene"] = in.scene;
  } else {
    inputs["gt_dir"] = in.gt_dir;
    if (!in.pred_dir.empty()) inputs["pred_dir"] = in.pred_dir;
  }
  echo["inputs"] = inputs;
  echo["formats"] = formats;
  return echo;
}

std::string cell_title(const std::string& class_name, MetricFamily family,
                       double threshold, Difficulty tier) {
  char buf[96];
  if (family == MetricFamily::iou3d) {
    std::snprintf(buf, sizeof buf, " — IoU %.2f, %s", threshold,
                  det3eval::difficulty_name(tier));
  } else {
    std::snprintf(buf, sizeof buf, " — %.2f m, %s", threshold,
                  det3eval::difficulty_name(tier));
  }
  return class_name + buf;
}

std::string cell_file_suffix(const std::string& class_name, double threshold,
                             Difficulty tier) {
  return slug(class_name) + "_" + threshold_text(threshold) + "_" +
         det3eval::difficulty_name(tier) + ".svg";
}

int run_eval(const InputArgs& in, const ProfileArgs& pargs,
             const std::vector<std::string>& raw_formats, const std::string& out_flag,
             int jobs) {
  const std::vector<std::string> formats = parse_formats(raw_formats);
  const FrameSet fs = load_input(in);
  const EvalProfile profile = resolve_profile(pargs, fs);
  const ordered_json echo = profile_echo("eval", pargs, profile, in, formats);

  const det3eval::EvalReport report = det3eval::evaluate(fs, profile, jobs);

  OutputStage stage;
  const fsys::path out = resolve_out_dir(out_flag);
  for (const std::string& format : formats) {
    if (format == "json") {
      stage.add(out / "report.json",
                det3eval::json_text(det3eval::eval_report_json(report, echo)));
    } else if (format == "csv") {
      stage.add(out / "report.csv", det3eval::eval_report_csv(report));
    } else {
      for (const det3eval::ApCell& cell : report.cells) {
        stage.add(out / ("pr_" + cell_file_suffix(cell.class_name, cell.threshold,
                                                  cell.tier)),
                  det3eval::render_pr_measured(
                      cell_title(cell.class_name, profile.family, cell.threshold,
                                 cell.tier),
                      cell.curve));
      }
    }
  }
  stage.flush();
  return kExitOk;
}

int run_diagnose(const InputArgs& in, const ProfileArgs& pargs, double tf_flag,
                 bool tf_given, const std::vector<std::string>& raw_formats,
                 const std::string& out_flag, int jobs) {
  const std::vector<std::string> formats = parse_formats(raw_formats);
  const FrameSet fs = load_input(in);
  const EvalProfile profile = resolve_profile(pargs, fs);
  const double tf = tf_given ? tf_flag : det3eval::default_tf(profile.family);
  for (double t : profile.thresholds) {
    const bool ok = profile.family == MetricFamily::iou3d ? (tf > 0.0 && tf < t)
                                                          : (tf > t);
    if (!ok) {
      throw UsageError("foreground threshold " + threshold_text(tf) +
                       " must be on the loose side of matching threshold " +
                       threshold_text(t));
    }
  }

  ordered_json echo = profile_echo("diagnose", pargs, profile, in, formats);
  echo["foreground_threshold"] = tf;

  const det3eval::DiagnosisReport report = det3eval::diagnose(fs, profile, tf, jobs);

  OutputStage stage;
  const fsys::path out = resolve_out_dir(out_flag);
  for (const std::string& format : formats) {
    if (format == "json") {
      stage.add(out / "report.json",
                det3eval::json_text(det3eval::diagnosis_report_json(report, echo)));
    } else if (format == "csv") {
      stage.add(out / "report.csv", det3eval::diagnosis_report_csv(report));
    } else {
      for (const det3eval::CellDiagnosis& cell : report.cells) {
        const std::string title =
            cell_title(cell.class_name, profile.family, cell.threshold, cell.tier);
        const std::string suffix =
            cell_file_suffix(cell.class_name, cell.threshold, cell.tier);
        stage.add(out / ("error_chart_" + suffix),
                  det3eval::render_error_chart(title, cell.delta, cell.counts,
                                               cell.sub_delta, cell.sub_available));
        stage.add(out / ("pr_" + suffix),
                  det3eval::render_pr(title, cell.curve_before,
                                      cell.curve_after_ranking));
      }
      if (report.aggregate) {
        const det3eval::AggregateDiagnosis& agg = *report.aggregate;
        stage.add(out / "error_chart_aggregate.svg",
                  det3eval::render_error_chart(
                      "all classes — mean AP gain over thresholds", agg.delta_map,
                      agg.counts, agg.sub_delta_map, agg.sub_available));
      }
    }
  }
  stage.flush();
  return kExitOk;
}

ordered_json recipe_echo(const det3eval::SceneRecipe& recipe,
                         const std::string& recipe_file) {
  ordered_json echo;
  echo["command"] = "generate";
  echo["recipe_file"] = recipe_file;
  ordered_json r;
  r["seed"] = recipe.seed;
  r["frames"] = recipe.n_frames;
  r["gts_per_frame"] = recipe.gts_per_frame;
  r["extent"] = recipe.extent;
  r["family"] = det3eval::metric_family_name(recipe.family);
  r["t_p"] = recipe.t_p;
  r["t_f"] = recipe.t_f;
  r["placement"] = det3eval::score_placement_name(recipe.placement);
  r["with_velocity"] = recipe.with_velocity;
  ordered_json classes = ordered_json::array();
  for (const det3eval::ClassSpec& c : recipe.classes) {
    classes.push_back({{"name", c.name},
                       {"length", {c.length_min, c.length_max}},
                       {"width", {c.width_min, c.width_max}},
                       {"height", {c.height_min, c.height_max}}});
  }
  r["classes"] = classes;
  ordered_json injections = ordered_json::array();
  for (const det3eval::Injection& inj : recipe.injections) {
    injections.push_back({{"type", det3eval::injection_type_name(inj.type)},
                          {"magnitude", inj.magnitude},
                          {"count", inj.count}});
  }
  r["injections"] = injections;
  echo["recipe"] = r;
  return echo;
}

int run_generate(const std::string& recipe_file, std::uint64_t seed, bool seed_given,
                 const std::string& out_flag) {
  det3eval::SceneRecipe recipe =
      det3eval::load_recipe_json(det3eval::read_text_file(recipe_file));
  if (seed_given) recipe.seed = seed;

  const det3eval::GeneratedScene scene = det3eval::generate(recipe);

  OutputStage stage;
  const fsys::path out = resolve_out_dir(out_flag);
  stage.add(out / "scene.json", det3eval::save_canonical_json(scene.frames));
  stage.add(out / "expected.json",
            det3eval::json_text(det3eval::expected_ledger_json(
                scene, recipe_echo(recipe, recipe_file))));
  stage.flush();
  return kExitOk;
}

int run_convert(const InputArgs& in, const std::string& out_flag) {
  const bool json_mode = !in.scene.empty();
  const bool dir_mode = !in.gt_dir.empty();
  if (json_mode == dir_mode) {
    throw UsageError("give exactly one of --input or --gt-dir");
  }
  OutputStage stage;
  const fsys::path out = resolve_out_dir(out_flag);

  if (dir_mode) {
    std::optional<fsys::path> pred;
    if (!in.pred_dir.empty()) pred = in.pred_dir;
    const FrameSet fs = det3eval::load_kitti_dirs(in.gt_dir, pred);
    stage.add(out / "scene.json", det3eval::save_canonical_json(fs));
    stage.flush();
    return kExitOk;
  }

  const FrameSet fs =
      det3eval::load_canonical_json(det3eval::read_text_file(in.scene));
  bool any_dets = false;
  for (const auto& frame : fs.frames) any_dets = any_dets || !frame.dets.empty();
  for (const auto& frame : fs.frames) {
    std::vector<det3eval::GroundTruth> gts;
    gts.reserve(frame.gts.size());
    for (const auto& gt : frame.gts) {
      gts.push_back(det3eval::from_canonical(gt, det3eval::SourceConvention::kitti_camera));
    }
    stage.add(out / "gt" / (frame.id + ".txt"), det3eval::serialize_kitti(gts));
    if (any_dets) {
      std::vector<det3eval::Detection> dets;
      dets.reserve(frame.dets.size());
      for (const auto& det : frame.dets) {
        dets.push_back(
            det3eval::from_canonical(det, det3eval::SourceConvention::kitti_camera));
      }
      stage.add(out / "pred" / (frame.id + ".txt"), det3eval::serialize_kitti(dets));
    }
  }
  stage.flush();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D object detection evaluation and error diagnosis"};
  app.set_version_flag("--version",
                       std::string(det3eval::kToolName) + " " + det3eval::kToolVersion);
  app.require_subcommand(1);

  InputArgs eval_in, diag_in, conv_in;
  ProfileArgs eval_profile, diag_profile;
  std::vector<std::string> eval_formats{"json"}, diag_formats{"json"};
  std::string eval_out, diag_out, gen_out, conv_out;
  int eval_jobs = 1, diag_jobs = 1;
  double diag_tf = 0.0;
  std::string recipe_file;
  std::uint64_t gen_seed = 0;

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate detections");
  add_input_options(eval_cmd, &eval_in);
  add_profile_options(eval_cmd, &eval_profile);
  eval_cmd->add_option("--format", eval_formats, "Output formats: json, csv, svg")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "Output directory");
  eval_cmd->add_option("--jobs", eval_jobs, "Worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* diag_cmd =
      app.add_subcommand("diagnose", "Evaluate and attribute errors to the taxonomy");
  add_input_options(diag_cmd, &diag_in);
  add_profile_options(diag_cmd, &diag_profile);
  CLI::Option* tf_opt = diag_cmd->add_option(
      "--tf", diag_tf, "Foreground threshold separating imprecise from background");
  diag_cmd->add_option("--format", diag_formats, "Output formats: json, csv, svg")
      ->delimiter(',')
      ->capture_default_str();
  diag_cmd->add_option("--out", diag_out, "Output directory");
  diag_cmd->add_option("--jobs", diag_jobs, "Worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* gen_cmd =
      app.add_subcommand("generate", "Build a synthetic scene from a recipe");
  gen_cmd->add_option("--recipe", recipe_file, "Recipe JSON file")->required();
  CLI::Option* seed_opt =
      gen_cmd->add_option("--seed", gen_seed, "Override the recipe seed");
  gen_cmd->add_option("--out", gen_out, "Output directory");

  CLI::App* conv_cmd = app.add_subcommand(
      "convert", "Translate between KITTI labels and the canonical JSON schema");
  add_input_options(conv_cmd, &conv_in);
  conv_cmd->add_option("--out", conv_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, e.what());
  }

  try {
    if (*eval_cmd) {
      return run_eval(eval_in, eval_profile, eval_formats, eval_out, eval_jobs);
    }
    if (*diag_cmd) {
      return run_diagnose(diag_in, diag_profile, diag_tf, tf_opt->count() > 0,
                          diag_formats, diag_out, diag_jobs);
    }
    if (*gen_cmd) {
      return run_generate(recipe_file, gen_seed, seed_opt->count() > 0, gen_out);
    }
    return run_convert(conv_in, conv_out);
  } catch (const UsageError& e) {
    return fail(kExitUsage, e.what());
  } catch (const det3eval::ParseError& e) {
    return fail(kExitInput, e.what());
  } catch (const det3eval::SchemaError& e) {
    return fail(kExitInput, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitInput, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitInput, e.what());
  } catch (const std::runtime_error& e) {
    return fail(kExitInput, e.what());
  } catch (const std::exception& e) {
    return fail(kExitInternal, e.what());
  }
}
