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

#include "det3eval/records.hpp"

namespace det3eval {

namespace {

// Tier cutoffs indexed easy, moderate, hard.
constexpr double kMinBoxHeight[3] = {40.0, 25.0, 25.0};
constexpr int kMaxOcclusion[3] = {0, 1, 2};
constexpr double kMaxTruncation[3] = {0.15, 0.30, 0.50};

bool meets_tier(const GroundTruth& gt, int tier) {
  if (gt.ignore) return false;
  if (!gt.bbox2d || !gt.truncation || !gt.occlusion) return false;
  return gt.bbox2d->height() >= kMinBoxHeight[tier] &&
         *gt.occlusion <= kMaxOcclusion[tier] &&
         *gt.truncation <= kMaxTruncation[tier];
}

}  // namespace

const char* difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::moderate: return "moderate";
    case Difficulty::hard: return "hard";
    case Difficulty::all: return "all";
    case Difficulty::ignored: return "ignored";
  }
  return "?";
}

std::optional<Difficulty> difficulty_from_name(const std::string& name) {
  if (name == "easy") return Difficulty::easy;
  if (name == "moderate") return Difficulty::moderate;
  if (name == "hard") return Difficulty::hard;
  if (name == "all") return Difficulty::all;
  if (name == "ignored") return Difficulty::ignored;
  return std::nullopt;
}

Difficulty assign_difficulty(const GroundTruth& gt) {
  if (meets_tier(gt, 0)) return Difficulty::easy;
  if (meets_tier(gt, 1)) return Difficulty::moderate;
  if (meets_tier(gt, 2)) return Difficulty::hard;
  return Difficulty::ignored;
}

bool qualifies(const GroundTruth& gt, Difficulty tier) {
  switch (tier) {
    case Difficulty::easy: return meets_tier(gt, 0);
    case Difficulty::moderate: return meets_tier(gt, 1);
    case Difficulty::hard: return meets_tier(gt, 2);
    case Difficulty::all: return !gt.ignore;
    case Difficulty::ignored: return false;
  }
  return false;
}

}  // namespace det3eval
