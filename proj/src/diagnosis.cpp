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

#include "det3eval/diagnosis.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "parallel_for.hpp"

namespace det3eval {

const char* error_type_name(ErrorType t) {
  switch (t) {
    case ErrorType::classification: return "classification";
    case ErrorType::localization: return "localization";
    case ErrorType::both: return "both";
    case ErrorType::duplication: return "duplication";
    case ErrorType::background: return "background";
    case ErrorType::missing: return "missing";
    case ErrorType::ranking: return "ranking";
  }
  return "?";
}

const char* box_component_name(BoxComponent c) {
  switch (c) {
    case BoxComponent::location: return "location";
    case BoxComponent::dimension: return "dimension";
    case BoxComponent::orientation: return "orientation";
  }
  return "?";
}

double default_tf(MetricFamily family) {
  return family == MetricFamily::iou3d ? 0.1 : 5.0;
}

std::array<long, kErrorTypeCount> ErrorLedger::counts(const std::string& class_scope) const {
  std::array<long, kErrorTypeCount> out{};
  for (const FpError& e : fp_errors) {
    if (class_scope.empty() || e.det_class == class_scope) {
      ++out[static_cast<int>(e.tag)];
    }
  }
  for (const GtRef& r : missing) {
    if (class_scope.empty() || r.class_name == class_scope) {
      ++out[static_cast<int>(ErrorType::missing)];
    }
  }
  return out;
}

namespace {

constexpr double kNoQuality = -std::numeric_limits<double>::infinity();

void check_thresholds(const DiagnosisConfig& cfg) {
  if (cfg.family == MetricFamily::iou3d) {
    if (!(cfg.t_f > 0.0 && cfg.t_f < cfg.t_p)) {
      throw std::invalid_argument("foreground threshold must satisfy 0 < t_f < t_p");
    }
  } else {
    if (!(cfg.t_p > 0.0 && cfg.t_f > cfg.t_p)) {
      throw std::invalid_argument(
          "foreground threshold must be looser (larger) than the matching distance");
    }
  }
}

GtRef make_ref(const FrameSet& fs, std::size_t frame, int gt) {
  return GtRef{frame, static_cast<std::size_t>(gt),
               fs.frames[frame].gts[static_cast<std::size_t>(gt)].class_name};
}

// Removes the flagged elements of a vector, preserving the order of the rest.
template <typename T>
void erase_flagged(std::vector<T>& items, const std::vector<char>& drop) {
  std::size_t w = 0;
  for (std::size_t r = 0; r < items.size(); ++r) {
    if (!drop[r]) {
      if (w != r) items[w] = std::move(items[r]);
      ++w;
    }
  }
  items.resize(w);
}

}  // namespace

ErrorLedger classify_errors(const FrameSet& fs, const DiagnosisConfig& config) {
  check_thresholds(config);
  ErrorLedger ledger;
  ledger.config = config;
  if (ledger.config.classes.empty()) ledger.config.classes = derive_classes(fs);
  const std::vector<std::string>& classes = ledger.config.classes;
  const std::set<std::string> class_set(classes.begin(), classes.end());

  enum : char { kUnevaluated = 0, kTp, kFp, kAbsorbed };

  for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
    const Frame& frame = fs.frames[fi];
    const std::size_t n_dets = frame.dets.size();
    const std::size_t n_gts = frame.gts.size();

    std::vector<char> det_state(n_dets, kUnevaluated);
    std::vector<char> gt_claimed(n_gts, 0);
    std::vector<char> gt_unmatched(n_gts, 0);
    for (const std::string& c : classes) {
      MatcherConfig mc;
      mc.family = config.family;
      mc.threshold = config.t_p;
      mc.class_name = c;
      mc.tier = config.tier;
      const FrameMatchResult r = match_frame(frame, mc);
      for (const DetMatch& m : r.dets) {
        det_state[static_cast<std::size_t>(m.det_index)] =
            m.outcome == DetOutcome::true_positive
                ? kTp
                : (m.outcome == DetOutcome::absorbed ? kAbsorbed : kFp);
        if (m.outcome == DetOutcome::true_positive) {
          gt_claimed[static_cast<std::size_t>(m.gt_index)] = 1;
        }
      }
      for (int g : r.unmatched_active_gts) gt_unmatched[static_cast<std::size_t>(g)] = 1;
    }

    std::vector<char> gt_active(n_gts, 0);
    for (std::size_t g = 0; g < n_gts; ++g) {
      const GroundTruth& gt = frame.gts[g];
      gt_active[g] = !gt.ignore && class_set.count(gt.class_name) > 0 &&
                     qualifies(gt, config.tier);
    }

    std::vector<char> implicated(n_gts, 0);
    for (std::size_t di = 0; di < n_dets; ++di) {
      // Candidates: false positives of evaluated classes, plus detections of
      // classes outside the evaluation set (cross-class confusions land on
      // evaluated ground truth regardless of the detection's own label).
      if (det_state[di] == kTp || det_state[di] == kAbsorbed) continue;
      const Detection& det = frame.dets[di];
      double best_same = kNoQuality;
      int best_same_gt = -1;
      double best_other = kNoQuality;
      int best_other_gt = -1;
      for (std::size_t g = 0; g < n_gts; ++g) {
        if (!gt_active[g]) continue;
        const double q = pair_quality(config.family, det.box, frame.gts[g].box);
        if (frame.gts[g].class_name == det.class_name) {
          if (q > best_same) {
            best_same = q;
            best_same_gt = static_cast<int>(g);
          }
        } else if (q > best_other) {
          best_other = q;
          best_other_gt = static_cast<int>(g);
        }
      }
      const bool other_tp =
          best_other_gt >= 0 && quality_meets(config.family, best_other, config.t_p);
      const bool other_tf =
          best_other_gt >= 0 && quality_meets(config.family, best_other, config.t_f);
      const bool same_tp =
          best_same_gt >= 0 && quality_meets(config.family, best_same, config.t_p);
      const bool same_tf =
          best_same_gt >= 0 && quality_meets(config.family, best_same, config.t_f);

      FpError e;
      e.frame_index = fi;
      e.det_index = di;
      e.det_class = det.class_name;
      if (other_tp) {
        e.tag = ErrorType::classification;
        e.target = make_ref(fs, fi, best_other_gt);
        e.target_matched = gt_claimed[static_cast<std::size_t>(best_other_gt)] != 0;
        implicated[static_cast<std::size_t>(best_other_gt)] = 1;
      } else if (same_tf && !same_tp) {
        e.tag = ErrorType::localization;
        e.target = make_ref(fs, fi, best_same_gt);
        e.target_matched = gt_claimed[static_cast<std::size_t>(best_same_gt)] != 0;
        implicated[static_cast<std::size_t>(best_same_gt)] = 1;
        const Box3D& gb = frame.gts[static_cast<std::size_t>(best_same_gt)].box;
        e.off_location =
            det.box.cx != gb.cx || det.box.cy != gb.cy || det.box.cz != gb.cz;
        e.off_dimension = det.box.length != gb.length || det.box.width != gb.width ||
                          det.box.height != gb.height;
        e.off_orientation = yaw_delta(det.box, gb) > 0.0;
      } else if (other_tf) {
        e.tag = ErrorType::both;
        e.target = make_ref(fs, fi, best_other_gt);
        e.target_matched = gt_claimed[static_cast<std::size_t>(best_other_gt)] != 0;
      } else if (same_tp) {
        e.tag = ErrorType::duplication;
        e.target = make_ref(fs, fi, best_same_gt);
        e.target_matched = gt_claimed[static_cast<std::size_t>(best_same_gt)] != 0;
      } else {
        e.tag = ErrorType::background;
      }
      ledger.fp_errors.push_back(std::move(e));
    }

    for (std::size_t g = 0; g < n_gts; ++g) {
      if (gt_unmatched[g] && !implicated[g]) {
        ledger.missing.push_back(make_ref(fs, fi, static_cast<int>(g)));
      }
    }
  }
  return ledger;
}

FrameSet apply_oracle(const FrameSet& fs, const ErrorLedger& ledger, ErrorType type,
                      const std::string& class_scope) {
  if (type == ErrorType::ranking) {
    throw std::invalid_argument(
        "the ranking repair reorders rather than edits; use apply_ranking_scores");
  }
  FrameSet out = fs;

  if (type == ErrorType::missing) {
    std::map<std::size_t, std::vector<char>> drop;
    for (const GtRef& r : ledger.missing) {
      if (!class_scope.empty() && r.class_name != class_scope) continue;
      auto& flags = drop[r.frame_index];
      if (flags.empty()) flags.assign(fs.frames[r.frame_index].gts.size(), 0);
      flags[r.gt_index] = 1;
    }
    for (auto& [fi, flags] : drop) erase_flagged(out.frames[fi].gts, flags);
    return out;
  }

  std::map<std::size_t, std::vector<char>> drop;
  const auto mark_drop = [&](const FpError& e) {
    auto& flags = drop[e.frame_index];
    if (flags.empty()) flags.assign(fs.frames[e.frame_index].dets.size(), 0);
    flags[e.det_index] = 1;
  };

  if (type == ErrorType::classification || type == ErrorType::localization) {
    // One repaired detection per ground truth: the highest-scoring claimant
    // wins (ties to the earlier detection); the rest would be duplicates.
    std::map<std::pair<std::size_t, std::size_t>, const FpError*> keeper;
    for (const FpError& e : ledger.fp_errors) {
      if (e.tag != type) continue;
      if (!class_scope.empty() && e.det_class != class_scope) continue;
      if (e.target_matched) {
        mark_drop(e);
        continue;
      }
      const std::pair<std::size_t, std::size_t> key{e.frame_index, e.target->gt_index};
      auto [it, inserted] = keeper.emplace(key, &e);
      if (!inserted) {
        const Detection& mine = fs.frames[e.frame_index].dets[e.det_index];
        const Detection& held =
            fs.frames[it->second->frame_index].dets[it->second->det_index];
        if (mine.score > held.score) {
          mark_drop(*it->second);
          it->second = &e;
        } else {
          mark_drop(e);
        }
      }
    }
    for (const auto& [key, e] : keeper) {
      Detection& det = out.frames[e->frame_index].dets[e->det_index];
      const GroundTruth& gt = fs.frames[e->frame_index].gts[e->target->gt_index];
      if (type == ErrorType::classification) {
        det.class_name = gt.class_name;
      } else {
        det.box = gt.box;
      }
    }
  } else {
    for (const FpError& e : ledger.fp_errors) {
      if (e.tag != type) continue;
      if (!class_scope.empty() && e.det_class != class_scope) continue;
      mark_drop(e);
    }
  }

  for (auto& [fi, flags] : drop) erase_flagged(out.frames[fi].dets, flags);
  return out;
}

FrameSet apply_component_fix(const FrameSet& fs, const ErrorLedger& ledger,
                             BoxComponent component, const std::string& class_scope) {
  FrameSet out = fs;
  for (const FpError& e : ledger.fp_errors) {
    if (e.tag != ErrorType::localization) continue;
    if (!class_scope.empty() && e.det_class != class_scope) continue;
    Box3D& box = out.frames[e.frame_index].dets[e.det_index].box;
    const Box3D& gt = fs.frames[e.frame_index].gts[e.target->gt_index].box;
    switch (component) {
      case BoxComponent::location:
        box.cx = gt.cx;
        box.cy = gt.cy;
        box.cz = gt.cz;
        break;
      case BoxComponent::dimension:
        box.length = gt.length;
        box.width = gt.width;
        box.height = gt.height;
        break;
      case BoxComponent::orientation:
        box.yaw = gt.yaw;
        break;
    }
  }
  return out;
}

namespace {

struct RankedDet {
  std::size_t frame_index = 0;
  int det_index = -1;
  DetOutcome outcome = DetOutcome::false_positive;  // verdict under the baseline order
  double key = kNoQuality;   // localization quality driving the new order
  double confidence = 0.0;   // original score, breaks quality ties
};

// Quality keys for one class in one frame: matched quality for true
// positives, best quality against active same-class ground truth otherwise.
void rank_keys_for_class(const FrameSet& fs, std::size_t fi, const MatcherConfig& cfg,
                         std::vector<RankedDet>& out) {
  const Frame& frame = fs.frames[fi];
  std::vector<int> active;
  for (int g = 0; g < static_cast<int>(frame.gts.size()); ++g) {
    const GroundTruth& gt = frame.gts[static_cast<std::size_t>(g)];
    if (!gt.ignore && gt.class_name == cfg.class_name && qualifies(gt, cfg.tier)) {
      active.push_back(g);
    }
  }
  const FrameMatchResult r = match_frame(frame, cfg);
  for (const DetMatch& m : r.dets) {
    const Detection& det = frame.dets[static_cast<std::size_t>(m.det_index)];
    RankedDet rd;
    rd.frame_index = fi;
    rd.det_index = m.det_index;
    rd.outcome = m.outcome;
    rd.confidence = det.score;
    if (m.outcome == DetOutcome::true_positive) {
      rd.key = m.quality;
    } else {
      for (int g : active) {
        rd.key = std::max(
            rd.key, pair_quality(cfg.family, det.box, frame.gts[static_cast<std::size_t>(g)].box));
      }
    }
    out.push_back(rd);
  }
}

// Accurate detections lead; a false positive can overlap a claimed object
// arbitrarily well (a duplicate's overlap is typically perfect), and quality
// alone would push it past weaker true positives, lowering the curve.
void sort_ranked(std::vector<RankedDet>& dets) {
  std::sort(dets.begin(), dets.end(), [](const RankedDet& a, const RankedDet& b) {
    const bool at = a.outcome == DetOutcome::true_positive;
    const bool bt = b.outcome == DetOutcome::true_positive;
    if (at != bt) return at;
    if (a.key != b.key) return a.key > b.key;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
    return a.det_index < b.det_index;
  });
}

}  // namespace

RankingResult ranking_oracle(const FrameSet& fs, MetricFamily family, double threshold,
                             Difficulty tier, const std::string& class_name, ApStyle style) {
  MatcherConfig cfg;
  cfg.family = family;
  cfg.threshold = threshold;
  cfg.class_name = class_name;
  cfg.tier = tier;

  RankingResult result;
  const ApCell base = evaluate_cell(fs, family, threshold, tier, class_name, style);
  result.before = base.curve;
  result.ap_before = base.ap;

  std::vector<RankedDet> ranked;
  for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
    rank_keys_for_class(fs, fi, cfg, ranked);
  }
  sort_ranked(ranked);

  // Baseline verdicts are kept: the repair recalibrates confidence, it does
  // not re-decide matches. A quality-greedy rematch could steal an object
  // from a weaker true positive and lose it outright.
  std::vector<CurveEntry> entries;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const RankedDet& rd = ranked[i];
    if (rd.outcome == DetOutcome::absorbed) continue;
    CurveEntry e;
    e.sort_key = static_cast<double>(ranked.size() - i);  // freeze the global order
    e.confidence = rd.confidence;
    e.frame_id = fs.frames[rd.frame_index].id;
    e.det_index = rd.det_index;
    e.is_tp = rd.outcome == DetOutcome::true_positive;
    entries.push_back(std::move(e));
  }
  result.after = build_pr_curve(std::move(entries), result.before.n_gt);
  result.ap_after = average_precision(result.after, style);
  result.delta = result.ap_after - result.ap_before;
  return result;
}

FrameSet apply_ranking_scores(const FrameSet& fs, MetricFamily family, double threshold,
                              Difficulty tier) {
  std::vector<RankedDet> ranked;
  std::vector<std::vector<char>> seen(fs.frames.size());
  for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
    seen[fi].assign(fs.frames[fi].dets.size(), 0);
  }
  for (const std::string& c : derive_classes(fs)) {
    MatcherConfig cfg;
    cfg.family = family;
    cfg.threshold = threshold;
    cfg.class_name = c;
    cfg.tier = tier;
    for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
      const std::size_t before = ranked.size();
      rank_keys_for_class(fs, fi, cfg, ranked);
      for (std::size_t i = before; i < ranked.size(); ++i) {
        seen[fi][static_cast<std::size_t>(ranked[i].det_index)] = 1;
      }
    }
  }
  // Detections of classes absent from the ground truth keep the worst key.
  for (std::size_t fi = 0; fi < fs.frames.size(); ++fi) {
    for (std::size_t di = 0; di < fs.frames[fi].dets.size(); ++di) {
      if (!seen[fi][di]) {
        RankedDet rd;
        rd.frame_index = fi;
        rd.det_index = static_cast<int>(di);
        rd.confidence = fs.frames[fi].dets[di].score;
        ranked.push_back(rd);
      }
    }
  }
  sort_ranked(ranked);

  FrameSet out = fs;
  const double n = static_cast<double>(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const RankedDet& rd = ranked[i];
    out.frames[rd.frame_index].dets[static_cast<std::size_t>(rd.det_index)].score =
        (n - static_cast<double>(i)) / n;
  }
  return out;
}

DiagnosisReport diagnose(const FrameSet& fs, const EvalProfile& profile, double t_f,
                         int jobs) {
  for (double t : profile.thresholds) {
    DiagnosisConfig probe;
    probe.family = profile.family;
    probe.t_p = t;
    probe.t_f = t_f;
    check_thresholds(probe);
  }
  if (profile.with_tp_metrics) {
    DiagnosisConfig probe;
    probe.family = profile.family;
    probe.t_p = profile.tp_threshold;
    probe.t_f = t_f;
    check_thresholds(probe);
  }

  DiagnosisReport report;
  report.profile = profile;
  report.t_f = t_f;
  report.baseline = evaluate(fs, profile, jobs);
  report.classes = report.baseline.classes;

  EvalProfile pinned = profile;
  pinned.classes = report.classes;

  // One ledger per (threshold, tier); every cell of that pair slices it.
  struct LedgerSlot {
    double threshold = 0.0;
    Difficulty tier = Difficulty::all;
    ErrorLedger ledger;
  };
  std::vector<LedgerSlot> ledgers;
  for (double t : profile.thresholds) {
    for (Difficulty tier : profile.tiers) {
      ledgers.push_back(LedgerSlot{t, tier, {}});
    }
  }
  detail::parallel_for(jobs, static_cast<int>(ledgers.size()), [&](int i) {
    DiagnosisConfig cfg;
    cfg.family = profile.family;
    cfg.t_p = ledgers[static_cast<std::size_t>(i)].threshold;
    cfg.t_f = t_f;
    cfg.tier = ledgers[static_cast<std::size_t>(i)].tier;
    cfg.classes = report.classes;
    ledgers[static_cast<std::size_t>(i)].ledger = classify_errors(fs, cfg);
  });
  const auto ledger_at = [&](double threshold, Difficulty tier) -> const ErrorLedger& {
    for (const LedgerSlot& slot : ledgers) {
      if (slot.threshold == threshold && slot.tier == tier) return slot.ledger;
    }
    throw std::logic_error("ledger lookup failed");
  };

  const bool volumetric = profile.family == MetricFamily::iou3d;
  report.cells.resize(report.baseline.cells.size());
  detail::parallel_for(jobs, static_cast<int>(report.cells.size()), [&](int i) {
    const ApCell& base = report.baseline.cells[static_cast<std::size_t>(i)];
    const ErrorLedger& ledger = ledger_at(base.threshold, base.tier);
    CellDiagnosis cell;
    cell.class_name = base.class_name;
    cell.threshold = base.threshold;
    cell.tier = base.tier;
    cell.baseline_ap = base.ap;
    cell.counts = ledger.counts(base.class_name);

    for (ErrorType type : {ErrorType::classification, ErrorType::localization,
                           ErrorType::both, ErrorType::duplication,
                           ErrorType::background, ErrorType::missing}) {
      const int k = static_cast<int>(type);
      if (cell.counts[static_cast<std::size_t>(k)] == 0) continue;  // repair is a no-op
      const FrameSet repaired = apply_oracle(fs, ledger, type, base.class_name);
      const ApCell after = evaluate_cell(repaired, profile.family, base.threshold,
                                         base.tier, base.class_name, profile.ap_style);
      cell.delta[static_cast<std::size_t>(k)] = after.ap - base.ap;
    }

    const RankingResult rank = ranking_oracle(fs, profile.family, base.threshold,
                                              base.tier, base.class_name, profile.ap_style);
    cell.delta[static_cast<int>(ErrorType::ranking)] = rank.delta;
    cell.curve_before = rank.before;
    cell.curve_after_ranking = rank.after;

    const long loc_count = cell.counts[static_cast<int>(ErrorType::localization)];
    for (int c = 0; c < kBoxComponentCount; ++c) {
      const auto component = static_cast<BoxComponent>(c);
      // Center-distance matching cannot see dimensions or yaw.
      cell.sub_available[static_cast<std::size_t>(c)] =
          volumetric || component == BoxComponent::location;
      if (!cell.sub_available[static_cast<std::size_t>(c)] || loc_count == 0) continue;
      const FrameSet repaired =
          apply_component_fix(fs, ledger, component, base.class_name);
      const ApCell after = evaluate_cell(repaired, profile.family, base.threshold,
                                         base.tier, base.class_name, profile.ap_style);
      cell.sub_delta[static_cast<std::size_t>(c)] = after.ap - base.ap;
    }
    report.cells[static_cast<std::size_t>(i)] = std::move(cell);
  });

  if (profile.with_tp_metrics && report.baseline.tp) {
    AggregateDiagnosis agg;
    agg.baseline_nds = report.baseline.tp->nds_value;
    const double n_cells = static_cast<double>(report.cells.size());
    for (const CellDiagnosis& cell : report.cells) {
      for (int k = 0; k < kErrorTypeCount; ++k) {
        agg.delta_map[static_cast<std::size_t>(k)] += cell.delta[static_cast<std::size_t>(k)] / n_cells;
      }
      for (int c = 0; c < kBoxComponentCount; ++c) {
        agg.sub_delta_map[static_cast<std::size_t>(c)] += cell.sub_delta[static_cast<std::size_t>(c)] / n_cells;
      }
    }
    for (int c = 0; c < kBoxComponentCount; ++c) {
      agg.sub_available[static_cast<std::size_t>(c)] =
          volumetric || static_cast<BoxComponent>(c) == BoxComponent::location;
    }

    const Difficulty agg_tier = profile.tiers.front();
    const ErrorLedger* tp_ledger = nullptr;
    for (const LedgerSlot& slot : ledgers) {
      if (slot.threshold == profile.tp_threshold && slot.tier == agg_tier) {
        tp_ledger = &slot.ledger;
      }
    }
    ErrorLedger fallback;
    if (tp_ledger == nullptr) {
      DiagnosisConfig cfg;
      cfg.family = profile.family;
      cfg.t_p = profile.tp_threshold;
      cfg.t_f = t_f;
      cfg.tier = agg_tier;
      cfg.classes = report.classes;
      fallback = classify_errors(fs, cfg);
      tp_ledger = &fallback;
    }
    agg.counts = tp_ledger->counts({});

    for (ErrorType type : {ErrorType::classification, ErrorType::localization,
                           ErrorType::both, ErrorType::duplication,
                           ErrorType::background, ErrorType::missing}) {
      const int k = static_cast<int>(type);
      if (agg.counts[static_cast<std::size_t>(k)] == 0) continue;
      const FrameSet repaired = apply_oracle(fs, *tp_ledger, type, {});
      const EvalReport after = evaluate(repaired, pinned, jobs);
      agg.delta_nds[static_cast<std::size_t>(k)] =
          (after.tp ? after.tp->nds_value : 0.0) - agg.baseline_nds;
    }
    {
      const FrameSet reranked =
          apply_ranking_scores(fs, profile.family, profile.tp_threshold, agg_tier);
      const EvalReport after = evaluate(reranked, pinned, jobs);
      agg.delta_nds[static_cast<int>(ErrorType::ranking)] =
          (after.tp ? after.tp->nds_value : 0.0) - agg.baseline_nds;
    }
    report.aggregate = std::move(agg);
  }
  return report;
}

}  // namespace det3eval
