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

#include "det3eval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "det3eval/errors.hpp"

namespace det3eval {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const char* injection_type_name(InjectionType t) {
  switch (t) {
    case InjectionType::center_jitter: return "center_jitter";
    case InjectionType::dim_scale: return "dim_scale";
    case InjectionType::yaw_offset: return "yaw_offset";
    case InjectionType::drop_gt_detection: return "drop_gt_detection";
    case InjectionType::add_background_fp: return "add_background_fp";
    case InjectionType::class_swap: return "class_swap";
    case InjectionType::add_cross_class_fp: return "add_cross_class_fp";
    case InjectionType::duplicate: return "duplicate";
    case InjectionType::confidence_shuffle: return "confidence_shuffle";
  }
  return "?";
}

InjectionType injection_type_from_name(const std::string& name) {
  for (int i = 0; i < kInjectionTypeCount; ++i) {
    const auto t = static_cast<InjectionType>(i);
    if (name == injection_type_name(t)) return t;
  }
  throw std::invalid_argument("unknown injection type: " + name);
}

const char* score_placement_name(ScorePlacement p) {
  return p == ScorePlacement::interleaved ? "interleaved" : "below_tp";
}

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<ClassSpec> default_class_specs() {
  ClassSpec car;
  car.name = "Car";
  ClassSpec cyclist;
  cyclist.name = "Cyclist";
  cyclist.length_min = 1.6;
  cyclist.length_max = 2.0;
  cyclist.width_min = 0.5;
  cyclist.width_max = 0.7;
  cyclist.height_min = 1.6;
  cyclist.height_max = 1.8;
  return {car, cyclist};
}

[[noreturn]] void infeasible(const std::string& why) {
  throw std::invalid_argument("infeasible recipe: " + why);
}

// Imprecision band inside (t_f, t_p), kept clear of both thresholds so the
// injected error cannot straddle a boundary.
struct QualityBand {
  double lo = 0.0;
  double hi = 0.0;
  double at(double position) const { return lo + (hi - lo) * position; }
};

QualityBand iou_band(double t_f, double t_p) {
  if (!(t_p - t_f > 0.1)) {
    infeasible("the overlap band between t_f and t_p is thinner than the 0.05 margins");
  }
  return QualityBand{t_f + 0.05, t_p - 0.05};
}

QualityBand distance_band(double t_p, double t_f) {
  const double margin = 0.1 * (t_f - t_p);
  return QualityBand{t_p + margin, t_f - margin};
}

double band_position(const Injection& inj) {
  if (inj.magnitude > 0.0 && inj.magnitude < 1.0) return inj.magnitude;
  return 0.5;
}

// Offset (meters, ground plane) that brings a box copy to the target overlap
// with the original. The overlap of a convex box with its own translate
// decreases monotonically along any fixed direction, so bisection applies.
double bisect_offset_for_iou(const Box3D& box, double dir_x, double dir_y,
                             double target) {
  const auto iou_at = [&](double r) {
    Box3D moved = box;
    moved.cx += dir_x * r;
    moved.cy += dir_y * r;
    return iou3d(moved, box);
  };
  double hi = std::sqrt(box.length * box.length + box.width * box.width);
  int guard = 0;
  while (iou_at(hi) > target) {
    hi *= 2.0;
    if (++guard > 60) infeasible("overlap calibration failed to bracket the band");
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (iou_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Yaw perturbation hitting the target overlap; overlap of a box with its
// rotated self decreases over (0, pi/2] for elongated footprints.
double bisect_yaw_for_iou(const Box3D& box, double target) {
  const auto iou_at = [&](double delta) {
    Box3D turned = box;
    turned.yaw = normalize_angle(box.yaw + delta);
    return iou3d(turned, box);
  };
  const double floor_iou = iou_at(kPi / 2.0);
  if (target <= floor_iou + 0.01) {
    infeasible(
        "yaw_offset cannot reach the band: the footprint is too square for the "
        "requested overlap");
  }
  double lo = 0.0;
  double hi = kPi / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (iou_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct DetSlot {
  std::size_t frame = 0;
  std::size_t det = 0;  // index into the frame's detections
};

}  // namespace

GeneratedScene generate(const SceneRecipe& recipe) {
  if (recipe.n_frames < 1) infeasible("n_frames must be at least 1");
  if (recipe.gts_per_frame < 0) infeasible("gts_per_frame must be non-negative");
  if (!(recipe.extent > 0.0) || !std::isfinite(recipe.extent)) {
    infeasible("extent must be positive and finite");
  }
  const std::vector<ClassSpec> specs =
      recipe.classes.empty() ? default_class_specs() : recipe.classes;
  for (const ClassSpec& s : specs) {
    if (s.name.empty()) infeasible("class spec without a name");
    if (!(s.length_min > 0.0 && s.length_min <= s.length_max) ||
        !(s.width_min > 0.0 && s.width_min <= s.width_max) ||
        !(s.height_min > 0.0 && s.height_min <= s.height_max)) {
      infeasible("class spec '" + s.name + "' has an invalid dimension range");
    }
  }
  if (recipe.family == MetricFamily::iou3d) {
    if (!(recipe.t_f > 0.0 && recipe.t_f < recipe.t_p && recipe.t_p <= 1.0)) {
      infeasible("volumetric thresholds need 0 < t_f < t_p <= 1");
    }
  } else {
    if (!(recipe.t_p > 0.0 && recipe.t_f > recipe.t_p)) {
      infeasible("distance thresholds need 0 < t_p < t_f");
    }
  }

  long n_band = 0, n_targets = 0, n_background = 0, n_error_scores = 0;
  bool needs_two_classes = false;
  for (const Injection& inj : recipe.injections) {
    if (inj.count < 0) infeasible("negative injection count");
    if (!std::isfinite(inj.magnitude)) infeasible("non-finite injection magnitude");
    const bool band_error =
        recipe.family == MetricFamily::iou3d ||
        inj.type == InjectionType::center_jitter ||
        inj.type == InjectionType::add_cross_class_fp;
    switch (inj.type) {
      case InjectionType::center_jitter:
      case InjectionType::dim_scale:
      case InjectionType::yaw_offset:
        n_targets += inj.count;
        if (band_error) {
          n_band += inj.count;
          n_error_scores += inj.count;
        }
        break;
      case InjectionType::drop_gt_detection:
        n_targets += inj.count;
        break;
      case InjectionType::add_background_fp:
        n_background += inj.count;
        n_error_scores += inj.count;
        break;
      case InjectionType::class_swap:
        n_targets += inj.count;
        n_error_scores += inj.count;
        needs_two_classes = needs_two_classes || inj.count > 0;
        break;
      case InjectionType::add_cross_class_fp:
        n_targets += inj.count;
        n_band += inj.count;
        n_error_scores += inj.count;
        needs_two_classes = needs_two_classes || inj.count > 0;
        break;
      case InjectionType::duplicate:
        n_targets += inj.count;
        n_error_scores += inj.count;
        break;
      case InjectionType::confidence_shuffle:
        n_targets += inj.count;
        break;
    }
  }
  if (needs_two_classes && specs.size() < 2) {
    infeasible("class_swap and add_cross_class_fp need at least two classes");
  }
  if (n_band > 0 && recipe.family == MetricFamily::iou3d) {
    iou_band(recipe.t_f, recipe.t_p);  // validates the margins
  }
  const long total_clean = static_cast<long>(recipe.n_frames) * recipe.gts_per_frame;
  if (n_targets > total_clean) {
    infeasible("injections target more detections than the recipe creates");
  }

  // Grid pitch: boxes can never overlap a neighbour, and no injected offset
  // can put a detection within the foreground band of the wrong ground truth.
  double max_diag = 0.0;
  for (const ClassSpec& s : specs) {
    max_diag = std::max(max_diag,
                        std::sqrt(s.length_max * s.length_max + s.width_max * s.width_max));
  }
  double pitch = 4.0 * max_diag;
  if (recipe.family == MetricFamily::center_distance) {
    pitch = std::max(pitch, 3.2 * recipe.t_f);
  }
  const int cells = static_cast<int>(std::floor(recipe.extent / pitch));
  if (cells < 1 || static_cast<long>(cells) * cells < recipe.gts_per_frame) {
    infeasible("extent too small: fitting " + std::to_string(recipe.gts_per_frame) +
               " isolated ground truths needs a grid pitch of " + std::to_string(pitch) +
               " m");
  }
  const long midpoint_capacity = static_cast<long>(cells - 1) * (cells - 1);
  const long background_per_frame =
      (n_background + recipe.n_frames - 1) / recipe.n_frames;
  if (n_background > 0 && background_per_frame > midpoint_capacity) {
    infeasible("extent too small for the requested background detections");
  }

  GeneratedScene scene;
  scene.frames.convention = SourceConvention::canonical;
  scene.expected.clean_ap = 1.0;

  const bool all_perfect_scores = recipe.injections.empty();
  const double clean_step = 0.4 / static_cast<double>(total_clean + 1);
  long clean_ordinal = 0;

  std::vector<DetSlot> pool;  // clean detections still unclaimed by injections
  for (int fi = 0; fi < recipe.n_frames; ++fi) {
    Rng rng(mix_seed(recipe.seed, static_cast<std::uint64_t>(fi)));
    Frame frame;
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "%06d", fi);
    frame.id = idbuf;

    // Occupy grid cells in a deterministic shuffled order.
    std::vector<int> cell_order(static_cast<std::size_t>(cells) * cells);
    for (std::size_t i = 0; i < cell_order.size(); ++i) cell_order[i] = static_cast<int>(i);
    for (std::size_t i = cell_order.size(); i > 1; --i) {
      std::swap(cell_order[i - 1],
                cell_order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }

    for (int g = 0; g < recipe.gts_per_frame; ++g) {
      const int cell = cell_order[static_cast<std::size_t>(g)];
      const double base_x = (cell % cells + 0.5) * pitch;
      const double base_y = (cell / cells + 0.5) * pitch;
      const ClassSpec& spec =
          specs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(specs.size()) - 1))];
      GroundTruth gt;
      gt.class_name = spec.name;
      gt.box.cx = base_x + rng.uniform(-pitch / 8.0, pitch / 8.0);
      gt.box.cy = base_y + rng.uniform(-pitch / 8.0, pitch / 8.0);
      gt.box.length = rng.uniform(spec.length_min, spec.length_max);
      gt.box.width = rng.uniform(spec.width_min, spec.width_max);
      gt.box.height = rng.uniform(spec.height_min, spec.height_max);
      gt.box.cz = gt.box.height / 2.0;
      gt.box.yaw = normalize_angle(rng.uniform(-kPi, kPi));
      if (recipe.with_velocity) {
        gt.velocity = Velocity2D{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        gt.attribute = rng.uniform() < 0.5 ? "moving" : "stationary";
      }

      Detection det;
      det.box = gt.box;
      det.class_name = gt.class_name;
      det.velocity = gt.velocity;
      det.attribute = gt.attribute;
      det.score = all_perfect_scores
                      ? 1.0
                      : 0.9 - static_cast<double>(clean_ordinal + 1) * clean_step;
      ++clean_ordinal;

      pool.push_back(DetSlot{static_cast<std::size_t>(fi), frame.dets.size()});
      frame.gts.push_back(std::move(gt));
      frame.dets.push_back(std::move(det));
    }
    scene.frames.frames.push_back(std::move(frame));
  }

  Rng inj_rng(mix_seed(recipe.seed, 0xE5531EC7ULL));
  const double error_step = 0.3 / static_cast<double>(n_error_scores + 1);
  long error_ordinal = 0;
  const auto next_error_score = [&](double primary_score) {
    if (recipe.placement == ScorePlacement::below_tp) {
      return 0.4 - static_cast<double>(++error_ordinal) * error_step;
    }
    if (primary_score > 0.0) return primary_score - clean_step / 2.0;
    return inj_rng.uniform(0.52, 0.88);
  };
  const auto take_slot = [&]() {
    const int i = inj_rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
    const DetSlot slot = pool[static_cast<std::size_t>(i)];
    pool.erase(pool.begin() + i);
    return slot;
  };
  const auto other_class = [&](const std::string& name) {
    std::vector<const ClassSpec*> others;
    for (const ClassSpec& s : specs) {
      if (s.name != name) others.push_back(&s);
    }
    return others[static_cast<std::size_t>(
        inj_rng.uniform_int(0, static_cast<int>(others.size()) - 1))];
  };

  std::vector<std::vector<char>> dropped(scene.frames.frames.size());
  for (std::size_t fi = 0; fi < scene.frames.frames.size(); ++fi) {
    dropped[fi].assign(scene.frames.frames[fi].dets.size(), 0);
  }
  std::vector<long> background_cursor(static_cast<std::size_t>(recipe.n_frames), 0);
  long background_ordinal = 0;
  auto& counts = scene.expected.counts;

  for (const Injection& inj : recipe.injections) {
    for (int k = 0; k < inj.count; ++k) {
      switch (inj.type) {
        case InjectionType::center_jitter: {
          const DetSlot slot = take_slot();
          Frame& frame = scene.frames.frames[slot.frame];
          Detection& det = frame.dets[slot.det];
          const double angle = inj_rng.uniform(0.0, 2.0 * kPi);
          double offset;
          if (recipe.family == MetricFamily::iou3d) {
            const QualityBand band = iou_band(recipe.t_f, recipe.t_p);
            offset = bisect_offset_for_iou(det.box, std::cos(angle), std::sin(angle),
                                           band.at(band_position(inj)));
          } else {
            offset = distance_band(recipe.t_p, recipe.t_f).at(band_position(inj));
          }
          det.box.cx += offset * std::cos(angle);
          det.box.cy += offset * std::sin(angle);
          det.score = next_error_score(0.0);
          ++counts[static_cast<int>(ErrorType::localization)];
          break;
        }
        case InjectionType::dim_scale: {
          const DetSlot slot = take_slot();
          Detection& det = scene.frames.frames[slot.frame].dets[slot.det];
          double s;
          if (recipe.family == MetricFamily::iou3d) {
            const QualityBand band = iou_band(recipe.t_f, recipe.t_p);
            s = std::cbrt(band.at(band_position(inj)));
            det.score = next_error_score(0.0);
            ++counts[static_cast<int>(ErrorType::localization)];
          } else {
            // Center distance ignores extents: the detection stays correct
            // and only its shape-alignment measure degrades.
            s = inj.magnitude > 0.0 && inj.magnitude < 1.0 ? inj.magnitude : 0.8;
          }
          det.box.length *= s;
          det.box.width *= s;
          det.box.height *= s;
          break;
        }
        case InjectionType::yaw_offset: {
          const DetSlot slot = take_slot();
          Detection& det = scene.frames.frames[slot.frame].dets[slot.det];
          if (recipe.family == MetricFamily::iou3d) {
            const QualityBand band = iou_band(recipe.t_f, recipe.t_p);
            const double delta =
                bisect_yaw_for_iou(det.box, band.at(band_position(inj)));
            const double sign = inj_rng.uniform() < 0.5 ? -1.0 : 1.0;
            det.box.yaw = normalize_angle(det.box.yaw + sign * delta);
            det.score = next_error_score(0.0);
            ++counts[static_cast<int>(ErrorType::localization)];
          } else {
            const double delta =
                (inj.magnitude > 0.0 && inj.magnitude < 1.0 ? inj.magnitude : 0.5) *
                kPi / 2.0;
            det.box.yaw = normalize_angle(det.box.yaw + delta);
          }
          break;
        }
        case InjectionType::drop_gt_detection: {
          const DetSlot slot = take_slot();
          dropped[slot.frame][slot.det] = 1;
          ++counts[static_cast<int>(ErrorType::missing)];
          break;
        }
        case InjectionType::add_background_fp: {
          const auto fi = static_cast<std::size_t>(background_ordinal % recipe.n_frames);
          ++background_ordinal;
          const long spot = background_cursor[fi]++;
          if (spot >= midpoint_capacity) {
            infeasible("ran out of isolated spots for background detections");
          }
          const ClassSpec& spec = specs[static_cast<std::size_t>(
              inj_rng.uniform_int(0, static_cast<int>(specs.size()) - 1))];
          Detection det;
          det.class_name = spec.name;
          det.box.cx = (spot % (cells - 1) + 1) * pitch;
          det.box.cy = (spot / (cells - 1) + 1) * pitch;
          det.box.length = inj_rng.uniform(spec.length_min, spec.length_max);
          det.box.width = inj_rng.uniform(spec.width_min, spec.width_max);
          det.box.height = inj_rng.uniform(spec.height_min, spec.height_max);
          det.box.cz = det.box.height / 2.0;
          det.box.yaw = normalize_angle(inj_rng.uniform(-kPi, kPi));
          det.score = next_error_score(0.0);
          if (recipe.with_velocity) {
            det.velocity = Velocity2D{inj_rng.uniform(-8.0, 8.0), inj_rng.uniform(-8.0, 8.0)};
            det.attribute = inj_rng.uniform() < 0.5 ? "moving" : "stationary";
          }
          Frame& frame = scene.frames.frames[fi];
          dropped[fi].push_back(0);
          frame.dets.push_back(std::move(det));
          ++counts[static_cast<int>(ErrorType::background)];
          break;
        }
        case InjectionType::class_swap: {
          const DetSlot slot = take_slot();
          Detection& det = scene.frames.frames[slot.frame].dets[slot.det];
          det.class_name = other_class(det.class_name)->name;
          det.score = next_error_score(0.0);
          ++counts[static_cast<int>(ErrorType::classification)];
          break;
        }
        case InjectionType::add_cross_class_fp: {
          const DetSlot slot = take_slot();
          Frame& frame = scene.frames.frames[slot.frame];
          const Detection& primary = frame.dets[slot.det];
          Detection det;
          det.box = primary.box;
          det.class_name = other_class(primary.class_name)->name;
          const double angle = inj_rng.uniform(0.0, 2.0 * kPi);
          double offset;
          if (recipe.family == MetricFamily::iou3d) {
            const QualityBand band = iou_band(recipe.t_f, recipe.t_p);
            offset = bisect_offset_for_iou(det.box, std::cos(angle), std::sin(angle),
                                           band.at(band_position(inj)));
          } else {
            offset = distance_band(recipe.t_p, recipe.t_f).at(band_position(inj));
          }
          det.box.cx += offset * std::cos(angle);
          det.box.cy += offset * std::sin(angle);
          det.score = next_error_score(0.0);
          if (recipe.with_velocity) {
            det.velocity = Velocity2D{inj_rng.uniform(-8.0, 8.0), inj_rng.uniform(-8.0, 8.0)};
            det.attribute = inj_rng.uniform() < 0.5 ? "moving" : "stationary";
          }
          dropped[slot.frame].push_back(0);
          frame.dets.push_back(std::move(det));
          ++counts[static_cast<int>(ErrorType::both)];
          break;
        }
        case InjectionType::duplicate: {
          const DetSlot slot = take_slot();
          Frame& frame = scene.frames.frames[slot.frame];
          Detection det = frame.dets[slot.det];
          det.score = next_error_score(frame.dets[slot.det].score);
          dropped[slot.frame].push_back(0);
          frame.dets.push_back(std::move(det));
          ++counts[static_cast<int>(ErrorType::duplication)];
          break;
        }
        case InjectionType::confidence_shuffle: {
          // Consume the whole count at once: rotate scores among the picks.
          std::vector<DetSlot> picks;
          for (int j = 0; j < inj.count; ++j) picks.push_back(take_slot());
          if (picks.size() > 1) {
            const double first =
                scene.frames.frames[picks[0].frame].dets[picks[0].det].score;
            for (std::size_t j = 0; j + 1 < picks.size(); ++j) {
              scene.frames.frames[picks[j].frame].dets[picks[j].det].score =
                  scene.frames.frames[picks[j + 1].frame].dets[picks[j + 1].det].score;
            }
            scene.frames.frames[picks.back().frame].dets[picks.back().det].score = first;
          }
          k = inj.count;  // handled all picks in one pass
          break;
        }
      }
      if (inj.type == InjectionType::confidence_shuffle) break;
    }
  }

  for (std::size_t fi = 0; fi < scene.frames.frames.size(); ++fi) {
    auto& dets = scene.frames.frames[fi].dets;
    std::size_t w = 0;
    for (std::size_t r = 0; r < dets.size(); ++r) {
      if (!dropped[fi][r]) {
        if (w != r) dets[w] = std::move(dets[r]);
        ++w;
      }
    }
    dets.resize(w);
  }
  return scene;
}

McResult mc_iou(const Box3D& a, const Box3D& b, long n, std::uint64_t seed) {
  require_valid_box(a);
  require_valid_box(b);
  if (n < 1) throw std::invalid_argument("sample count must be positive");

  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x, lo_z = lo_x, hi_z = hi_x;
  for (const Box3D* box : {&a, &b}) {
    for (const Vec2& c : bev_corners(*box)) {
      lo_x = std::min(lo_x, c.x);
      hi_x = std::max(hi_x, c.x);
      lo_y = std::min(lo_y, c.y);
      hi_y = std::max(hi_y, c.y);
    }
    lo_z = std::min(lo_z, box->cz - box->height / 2.0);
    hi_z = std::max(hi_z, box->cz + box->height / 2.0);
  }

  Rng rng(seed);
  long in_union = 0;
  long in_both = 0;
  for (long i = 0; i < n; ++i) {
    const double x = rng.uniform(lo_x, hi_x);
    const double y = rng.uniform(lo_y, hi_y);
    const double z = rng.uniform(lo_z, hi_z);
    const bool hit_a = box_contains(a, x, y, z);
    const bool hit_b = box_contains(b, x, y, z);
    if (hit_a || hit_b) ++in_union;
    if (hit_a && hit_b) ++in_both;
  }

  McResult r;
  r.samples = n;
  if (in_union > 0) {
    r.estimate = static_cast<double>(in_both) / static_cast<double>(in_union);
    r.stderr_est =
        std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(in_union));
  }
  return r;
}

double brute_force_ap(const FrameSet& fs, const MatcherConfig& cfg, ApStyle style) {
  struct Entry {
    std::size_t frame;
    int det;
    double score;
  };
  std::vector<Entry> entries;
  long n_gt = 0;
  for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
    const Frame& frame = fs.frames[fi];
    for (int d = 0; d < static_cast<int>(frame.dets.size()); ++d) {
      if (frame.dets[static_cast<std::size_t>(d)].class_name == cfg.class_name) {
        entries.push_back(Entry{fi, d, frame.dets[static_cast<std::size_t>(d)].score});
      }
    }
    for (const GroundTruth& gt : frame.gts) {
      if (!gt.ignore && gt.class_name == cfg.class_name && qualifies(gt, cfg.tier)) {
        ++n_gt;
      }
    }
  }
  if (entries.size() > 32) {
    throw std::invalid_argument("brute-force reference is limited to 32 detections");
  }
  if (n_gt == 0) return 0.0;

  std::sort(entries.begin(), entries.end(), [&](const Entry& x, const Entry& y) {
    if (x.score != y.score) return x.score > y.score;
    if (fs.frames[x.frame].id != fs.frames[y.frame].id) {
      return fs.frames[x.frame].id < fs.frames[y.frame].id;
    }
    return x.det < y.det;
  });

  // One precision/recall point per prefix, each matched from scratch.
  std::vector<double> precisions, recalls;
  for (std::size_t k = 1; k <= entries.size(); ++k) {
    long tp = 0, fp = 0;
    for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
      const Frame& frame = fs.frames[fi];
      std::vector<char> claimed(frame.gts.size(), 0);
      for (std::size_t e = 0; e < k; ++e) {
        if (entries[e].frame != fi) continue;
        const Detection& det = frame.dets[static_cast<std::size_t>(entries[e].det)];
        int best = -1;
        double best_q = 0.0;
        bool best_in_tier = false;
        for (std::size_t g = 0; g < frame.gts.size(); ++g) {
          const GroundTruth& gt = frame.gts[g];
          if (claimed[g] || gt.ignore || gt.class_name != cfg.class_name) continue;
          double q;
          bool meets;
          if (cfg.family == MetricFamily::iou3d) {
            q = iou3d(det.box, gt.box);
            meets = q >= cfg.threshold;
          } else {
            q = -center_distance_ground(det.box, gt.box);
            meets = -q <= cfg.threshold;
          }
          if (!meets) continue;
          const bool in_tier = qualifies(gt, cfg.tier);
          if (best < 0 || q > best_q || (q == best_q && in_tier && !best_in_tier)) {
            best = static_cast<int>(g);
            best_q = q;
            best_in_tier = in_tier;
          }
        }
        if (best >= 0) {
          claimed[static_cast<std::size_t>(best)] = 1;
          if (best_in_tier) ++tp;
        } else {
          ++fp;
        }
      }
    }
    const long counted = tp + fp;
    precisions.push_back(counted > 0 ? static_cast<double>(tp) / static_cast<double>(counted)
                                     : 0.0);
    recalls.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }

  const auto max_precision_at = [&](double recall) {
    double best = 0.0;
    for (std::size_t i = 0; i < precisions.size(); ++i) {
      if (recalls[i] >= recall) best = std::max(best, precisions[i]);
    }
    return best;
  };

  if (style == ApStyle::ap40) {
    double sum = 0.0;
    for (int j = 1; j <= 40; ++j) {
      sum += max_precision_at(static_cast<double>(j) / 40.0);
    }
    return sum / 40.0;
  }

  // Step integral of max(0, p(r) - 0.1) over recall in (0.1, 1], normalized
  // by the reachable area. p is constant between consecutive achieved
  // recalls, so evaluate once per gap.
  std::vector<double> marks = recalls;
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  double area = 0.0;
  double prev = 0.1;
  for (double r : marks) {
    if (r <= prev) continue;
    area += (r - prev) * std::max(0.0, max_precision_at(r) - 0.1);
    prev = r;
  }
  return area / (0.9 * 0.9);
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& where, const std::string& message) {
  throw SchemaError(message, where);
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_fail(where, "expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_fail(where, "expected an integer");
  return j.get<int>();
}

std::pair<double, double> require_range(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_fail(where, "expected [min, max]");
  return {require_number(j[0], where + "[0]"), require_number(j[1], where + "[1]")};
}

}  // namespace

SceneRecipe load_recipe_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  if (!root.is_object()) schema_fail("$", "recipe must be a JSON object");

  static const char* known[] = {"seed",      "frames",    "gts_per_frame", "extent",
                                "family",    "t_p",       "t_f",           "placement",
                                "with_velocity", "classes", "injections"};
  for (const auto& [key, value] : root.items()) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known)) {
      schema_fail("$." + key, "unknown recipe field");
    }
  }

  SceneRecipe r;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
      schema_fail("$.seed", "expected an integer");
    }
    r.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("frames")) r.n_frames = require_int(root["frames"], "$.frames");
  if (root.contains("gts_per_frame")) {
    r.gts_per_frame = require_int(root["gts_per_frame"], "$.gts_per_frame");
  }
  if (root.contains("extent")) r.extent = require_number(root["extent"], "$.extent");
  if (root.contains("family")) {
    const std::string f = root["family"].is_string() ? root["family"].get<std::string>() : "";
    if (f == "iou3d") {
      r.family = MetricFamily::iou3d;
    } else if (f == "center_distance") {
      r.family = MetricFamily::center_distance;
      r.t_p = 2.0;
      r.t_f = 5.0;
    } else {
      schema_fail("$.family", "expected \"iou3d\" or \"center_distance\"");
    }
  }
  if (root.contains("t_p")) r.t_p = require_number(root["t_p"], "$.t_p");
  if (root.contains("t_f")) r.t_f = require_number(root["t_f"], "$.t_f");
  if (root.contains("placement")) {
    const std::string p =
        root["placement"].is_string() ? root["placement"].get<std::string>() : "";
    if (p == "interleaved") {
      r.placement = ScorePlacement::interleaved;
    } else if (p == "below_tp") {
      r.placement = ScorePlacement::below_tp;
    } else {
      schema_fail("$.placement", "expected \"interleaved\" or \"below_tp\"");
    }
  }
  if (root.contains("with_velocity")) {
    if (!root["with_velocity"].is_boolean()) schema_fail("$.with_velocity", "expected a boolean");
    r.with_velocity = root["with_velocity"].get<bool>();
  }
  if (root.contains("classes")) {
    if (!root["classes"].is_array()) schema_fail("$.classes", "expected an array");
    for (std::size_t i = 0; i < root["classes"].size(); ++i) {
      const json& c = root["classes"][i];
      const std::string where = "$.classes[" + std::to_string(i) + "]";
      if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
        schema_fail(where, "expected an object with a \"name\"");
      }
      ClassSpec spec;
      spec.name = c["name"].get<std::string>();
      if (c.contains("length")) {
        std::tie(spec.length_min, spec.length_max) = require_range(c["length"], where + ".length");
      }
      if (c.contains("width")) {
        std::tie(spec.width_min, spec.width_max) = require_range(c["width"], where + ".width");
      }
      if (c.contains("height")) {
        std::tie(spec.height_min, spec.height_max) = require_range(c["height"], where + ".height");
      }
      r.classes.push_back(std::move(spec));
    }
  }
  if (root.contains("injections")) {
    if (!root["injections"].is_array()) schema_fail("$.injections", "expected an array");
    for (std::size_t i = 0; i < root["injections"].size(); ++i) {
      const json& inj = root["injections"][i];
      const std::string where = "$.injections[" + std::to_string(i) + "]";
      if (!inj.is_object() || !inj.contains("type") || !inj["type"].is_string()) {
        schema_fail(where, "expected an object with a \"type\"");
      }
      Injection out;
      try {
        out.type = injection_type_from_name(inj["type"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        schema_fail(where + ".type", e.what());
      }
      if (inj.contains("magnitude")) {
        out.magnitude = require_number(inj["magnitude"], where + ".magnitude");
      }
      if (inj.contains("count")) out.count = require_int(inj["count"], where + ".count");
      r.injections.push_back(out);
    }
  }
  return r;
}

}  // namespace det3eval
