// SPDX-License-Identifier: Apache-2.0
#include "kdlca/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "kdlca/amortization.hpp"
#include "kdlca/error.hpp"

namespace kdlca {

std::vector<FrontierPoint> pareto_frontier(std::vector<FrontierPoint> points) {
  for (const auto& p : points) {
    if (!(p.production_footprint_kgco2e >= 0.0) || std::isnan(p.mean_quality)) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("frontier point '{}' has an invalid footprint or quality",
                              p.system_name));
    }
  }
  std::sort(points.begin(), points.end(), [](const FrontierPoint& l, const FrontierPoint& r) {
    if (l.production_footprint_kgco2e != r.production_footprint_kgco2e) {
      return l.production_footprint_kgco2e < r.production_footprint_kgco2e;
    }
    if (l.mean_quality != r.mean_quality) return l.mean_quality > r.mean_quality;
    return l.system_name < r.system_name;
  });

  // Sweep groups of equal footprint. A point survives iff it has the best
  // quality of its group and strictly beats everything cheaper.
  double best_cheaper = -std::numeric_limits<double>::infinity();
  for (std::size_t begin = 0; begin < points.size();) {
    std::size_t end = begin;
    while (end < points.size() &&
           points[end].production_footprint_kgco2e == points[begin].production_footprint_kgco2e) {
      ++end;
    }
    const double group_best = points[begin].mean_quality;
    for (std::size_t i = begin; i < end; ++i) {
      points[i].on_frontier = points[i].mean_quality == group_best && group_best > best_cheaper;
    }
    best_cheaper = std::max(best_cheaper, group_best);
    begin = end;
  }
  return points;
}

std::vector<FrontierPoint> drop_non_improving_checkpoints(std::vector<FrontierPoint> points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const FrontierPoint& l, const FrontierPoint& r) {
                     return l.production_footprint_kgco2e < r.production_footprint_kgco2e;
                   });
  std::map<std::string, double> best_so_far;
  std::vector<FrontierPoint> kept;
  for (auto& p : points) {
    const std::string& key = p.group.empty() ? p.system_name : p.group;
    const auto it = best_so_far.find(key);
    if (it != best_so_far.end() && it->second >= p.mean_quality) continue;
    best_so_far[key] = p.mean_quality;
    kept.push_back(std::move(p));
  }
  return kept;
}

std::vector<FrontierPoint> frontier_points(std::span<const SystemProfile> profiles,
                                           std::size_t n_resamples, double level,
                                           std::uint64_t seed) {
  ScoreMatrix matrix;
  matrix.reserve(profiles.size());
  for (const auto& profile : profiles) {
    if (profile.quality_scores.empty()) {
      throw Error(ErrorCode::MissingScores,
                  fmt::format("system '{}' has no quality scores", profile.name));
    }
    matrix.push_back(profile.quality_scores);
  }
  const auto intervals = paired_bootstrap_ci(matrix, n_resamples, level, seed);
  std::vector<FrontierPoint> out;
  out.reserve(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const double q = profiles[i].mean_quality();
    FrontierPoint p;
    p.system_name = profiles[i].name;
    p.group = profiles[i].name;
    p.production_footprint_kgco2e = profiles[i].production_footprint_kgco2e;
    p.mean_quality = q;
    p.quality_ci = {std::min(intervals[i].lower, q), std::max(intervals[i].upper, q)};
    out.push_back(std::move(p));
  }
  return out;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::UseTeacher: return "use_teacher";
    case Verdict::UseNoKD: return "use_nokd";
    case Verdict::UseKDStudent: return "use_kd_student";
  }
  return "use_teacher";
}

std::string_view step_title(int step) noexcept {
  switch (step) {
    case 1: return "functional unit";
    case 2: return "No-KD baseline";
    case 3: return "low-overhead KD";
    case 4: return "Pareto selection";
    default: return "unknown";
  }
}

namespace {

std::string join_names(const std::vector<const SystemProfile*>& profiles) {
  std::string out;
  for (const auto* p : profiles) {
    if (!out.empty()) out += ", ";
    out += p->name;
  }
  return out.empty() ? "none" : out;
}

}  // namespace

Recommendation recommend(std::span<const SystemProfile> profiles, double target_quality,
                         double expected_volume_tokens, std::size_t n_resamples,
                         std::uint64_t seed, double level) {
  const SystemProfile* teacher = nullptr;
  std::vector<const SystemProfile*> baselines;
  std::vector<const SystemProfile*> students;
  for (const auto& p : profiles) {
    switch (p.role) {
      case SystemRole::Teacher:
        if (teacher != nullptr) {
          throw Error(ErrorCode::InvalidArgument, "recommendation expects exactly one teacher");
        }
        teacher = &p;
        break;
      case SystemRole::NoKD: baselines.push_back(&p); break;
      case SystemRole::KDStudent: students.push_back(&p); break;
    }
  }
  if (teacher == nullptr) throw Error(ErrorCode::NoTeacherProfile, "no teacher profile");
  if (baselines.empty()) throw Error(ErrorCode::NoBaselineProfile, "no No-KD baseline profile");

  const SystemProfile& baseline = **std::min_element(
      baselines.begin(), baselines.end(), [](const SystemProfile* l, const SystemProfile* r) {
        const double ql = l->mean_quality(), qr = r->mean_quality();
        if (ql != qr) return ql > qr;
        if (l->production_footprint_kgco2e != r->production_footprint_kgco2e) {
          return l->production_footprint_kgco2e < r->production_footprint_kgco2e;
        }
        return l->name < r->name;
      });
  const double baseline_quality = baseline.mean_quality();

  Recommendation rec;
  auto fire = [&rec](int step, std::string message) {
    rec.rationale.push_back({step, std::move(message)});
  };

  if (baseline_quality >= target_quality) {
    fire(2, fmt::format("No-KD '{}' reaches quality {:.6g} >= target {:.6g}; no distillation needed",
                        baseline.name, baseline_quality, target_quality));
    rec.verdict = Verdict::UseNoKD;
    rec.system = baseline.name;
    return rec;
  }
  fire(2, fmt::format("No-KD '{}' reaches quality {:.6g} < target {:.6g}; KD must close the gap",
                      baseline.name, baseline_quality, target_quality));

  std::vector<const SystemProfile*> meeting;
  std::vector<const SystemProfile*> survivors;
  for (const auto* s : students) {
    if (s->mean_quality() < target_quality) continue;
    meeting.push_back(s);
    if (significant_improvement(s->quality_scores, baseline.quality_scores, n_resamples, seed,
                                level)) {
      survivors.push_back(s);
    }
  }
  fire(3, fmt::format("{} of {} KD students meet the target ({}); {} improve significantly over "
                      "No-KD ({})",
                      meeting.size(), students.size(), join_names(meeting), survivors.size(),
                      join_names(survivors)));
  if (survivors.empty()) {
    fire(3, "no KD student qualifies; serve the teacher");
    rec.verdict = Verdict::UseTeacher;
    rec.system = teacher->name;
    return rec;
  }

  std::vector<FrontierPoint> points;
  for (const auto* s : survivors) {
    FrontierPoint p;
    p.system_name = s->name;
    p.group = s->name;
    p.production_footprint_kgco2e = s->production_footprint_kgco2e;
    p.mean_quality = s->mean_quality();
    points.push_back(std::move(p));
  }
  points = pareto_frontier(std::move(points));
  // Sorted by footprint with best quality first on ties, so the first
  // frontier point is the cheapest to produce.
  const auto pick_it = std::find_if(points.begin(), points.end(),
                                    [](const FrontierPoint& p) { return p.on_frontier; });
  const SystemProfile& pick = **std::find_if(
      survivors.begin(), survivors.end(),
      [&](const SystemProfile* s) { return s->name == pick_it->system_name; });
  std::vector<const SystemProfile*> frontier_members;
  for (const auto& p : points) {
    if (!p.on_frontier) continue;
    for (const auto* s : survivors) {
      if (s->name == p.system_name) frontier_members.push_back(s);
    }
  }
  fire(4, fmt::format("frontier of qualifying students: {}; lowest production footprint is '{}' "
                      "({:.6g} kgCO2e, quality {:.6g})",
                      join_names(frontier_members), pick.name, pick.production_footprint_kgco2e,
                      pick.mean_quality()));
  rec.quality_gap_significant = true;

  const BreakEvenResult be = break_even(pick, *teacher);
  switch (be.relation) {
    case BreakEvenRelation::CrossesAt:
      rec.breakeven_tokens_vs_teacher = be.breakeven_tokens;
      if (*be.breakeven_tokens > expected_volume_tokens) {
        fire(1, fmt::format("break-even vs teacher at {:.0f} tokens exceeds expected volume {:.0f}; "
                            "distillation is not amortized",
                            *be.breakeven_tokens, expected_volume_tokens));
        rec.verdict = Verdict::UseTeacher;
        rec.system = teacher->name;
        return rec;
      }
      fire(1, fmt::format("expected volume {:.0f} reaches break-even vs teacher at {:.0f} tokens",
                          expected_volume_tokens, *be.breakeven_tokens));
      break;
    case BreakEvenRelation::BDominates:
      fire(1, "the teacher is cheaper at every served volume; distillation is never amortized");
      rec.verdict = Verdict::UseTeacher;
      rec.system = teacher->name;
      return rec;
    case BreakEvenRelation::ADominates:
    case BreakEvenRelation::Identical:
      fire(1, "the student is never costlier than the teacher at any served volume");
      break;
  }
  rec.verdict = Verdict::UseKDStudent;
  rec.system = pick.name;
  return rec;
}

}  // namespace kdlca
