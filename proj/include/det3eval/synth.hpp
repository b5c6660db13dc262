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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "det3eval/diagnosis.hpp"

namespace det3eval {

// Deterministic, portable random stream: the standard 64-bit Mersenne
// Twister (bit-exact across platforms by specification), with doubles taken
// as the top 53 bits scaled into [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() { return engine_(); }
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Inclusive range; bias-free enough for scene plumbing (range << 2^64).
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent substream seed (splitmix64 finalizer), so per-frame
// content does not depend on how many draws earlier frames consumed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct ClassSpec {
  std::string name;
  double length_min = 3.8, length_max = 4.6;
  double width_min = 1.6, width_max = 1.9;
  double height_min = 1.4, height_max = 1.7;
};

enum class InjectionType {
  center_jitter,       // move a detection's center into the imprecise band
  dim_scale,           // shrink a detection's extents into the band
  yaw_offset,          // rotate a detection into the band
  drop_gt_detection,   // remove a detection, leaving its ground truth uncovered
  add_background_fp,   // spawn a detection far from all ground truth
  class_swap,          // relabel a detection to a different class
  add_cross_class_fp,  // extra wrong-class detection imprecisely on a ground truth
  duplicate,           // clone a detection at lower confidence
  confidence_shuffle,  // permute confidences among correct detections
};
inline constexpr int kInjectionTypeCount = 9;
const char* injection_type_name(InjectionType t);
InjectionType injection_type_from_name(const std::string& name);

struct Injection {
  InjectionType type = InjectionType::add_background_fp;
  // Band position in (0, 1) for the three imprecision injections (0.5 when
  // omitted); ignored by the others.
  double magnitude = 0.0;
  int count = 0;
};

// Where injected erroneous detections land in the confidence ordering:
// mixed among the correct detections, or strictly below all of them.
enum class ScorePlacement { interleaved, below_tp };
const char* score_placement_name(ScorePlacement p);

struct SceneRecipe {
  std::uint64_t seed = 1;
  int n_frames = 1;
  int gts_per_frame = 1;
  double extent = 100.0;  // square ground-plane side, meters
  std::vector<ClassSpec> classes;  // empty: built-in car + cyclist specs
  MetricFamily family = MetricFamily::iou3d;
  double t_p = 0.7;
  double t_f = 0.1;
  ScorePlacement placement = ScorePlacement::below_tp;
  bool with_velocity = false;  // attach velocities and attributes
  std::vector<Injection> injections;
};

// What the recipe promises the taxonomy will find. The ranking slot is
// always zero: a confidence shuffle mislabels no individual record.
struct ExpectedLedger {
  std::array<long, kErrorTypeCount> counts{};
  double clean_ap = 1.0;  // detections start as exact copies, so always 1
};

struct GeneratedScene {
  FrameSet frames;
  ExpectedLedger expected;
};

// Deterministic scene construction: ground truths on a spaced grid (pairwise
// IoU zero, and far enough apart that no injected error can be attributed to
// the wrong ground truth), one exact-copy detection each, then the recipe's
// injections. Throws std::invalid_argument for infeasible recipes.
GeneratedScene generate(const SceneRecipe& recipe);

struct McResult {
  double estimate = 0.0;
  double stderr_est = 0.0;
  long samples = 0;
};

// Monte-Carlo volume-ratio estimate of the 3D overlap: uniform points over
// the pair's joint bounding region, intersection hits over union hits.
McResult mc_iou(const Box3D& a, const Box3D& b, long n, std::uint64_t seed);

// Naive per-prefix recount of the precision-recall curve for one class —
// an oracle double of the evaluation pipeline sharing only the geometry and
// record layers. Limited to 32 detections of the class.
double brute_force_ap(const FrameSet& fs, const MatcherConfig& cfg, ApStyle style);

// Recipe from its JSON form (schema documented in the README). Throws
// SchemaError / ParseError on malformed input.
SceneRecipe load_recipe_json(const std::string& text);

}  // namespace det3eval
