// SPDX-License-Identifier: Apache-2.0
#include "kdlca/report/commands.hpp"

#include <algorithm>
#include <fstream>
#include <unistd.h>

#include <fmt/format.h>

#include "../json_util.hpp"
#include "kdlca/accounting.hpp"
#include "kdlca/error.hpp"
#include "kdlca/random.hpp"
#include "kdlca/report/format.hpp"
#include "kdlca/report/svg.hpp"

namespace kdlca::report {

using nlohmann::json;
using Align = TextTable::Align;

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double v, int digits) { return fmt::format("{:.{}f}", v, digits); }

json header(std::string_view command) {
  return {{"schema_version", detail::kSchemaVersion}, {"command", command}};
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "json") return OutputFormat::Json;
  if (text == "svg") return OutputFormat::Svg;
  if (text == "all") return OutputFormat::All;
  throw Error(ErrorCode::Usage, fmt::format("unknown format '{}' (table|json|svg|all)", text));
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& out_dir,
                                                 const Rendered& rendered, OutputFormat format,
                                                 const std::vector<ExtraFile>& extra) {
  std::vector<ExtraFile> files;
  if (format == OutputFormat::Json || format == OutputFormat::All) {
    files.push_back({rendered.stem + ".json", rendered.json.dump(2) + "\n"});
  }
  if ((format == OutputFormat::Svg || format == OutputFormat::All) && !rendered.svg.empty()) {
    files.push_back({rendered.stem + ".svg", rendered.svg});
  }
  files.insert(files.end(), extra.begin(), extra.end());
  if (files.empty()) return {};

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::Io,
                fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));
  }
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  const auto discard = [&] {
    for (const auto& [tmp, final_path] : staged) std::filesystem::remove(tmp, ec);
  };
  for (const auto& file : files) {
    const auto final_path = out_dir / file.filename;
    const auto tmp = out_dir / fmt::format(".{}.tmp{}", file.filename, ::getpid());
    staged.emplace_back(tmp, final_path);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << file.content;
    out.close();
    if (!out) {
      discard();
      throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", final_path.string()));
    }
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [tmp, final_path] : staged) {
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) {
      const std::string reason = ec.message();
      discard();
      for (const auto& done : written) std::filesystem::remove(done, ec);
      throw Error(ErrorCode::Io, fmt::format("cannot write '{}': {}", final_path.string(), reason));
    }
    written.push_back(final_path);
  }
  return written;
}

// footprint ----------------------------------------------------------------

FootprintReport footprint_report(const Study& study, std::uint64_t volume_tokens) {
  const EmissionParams& params = study.config.params;
  const auto breakdowns = production_breakdowns(study.inventory, params);
  const auto profiles = build_profiles(study, params);

  FootprintReport report;
  report.volume_tokens = volume_tokens;
  report.horizon_label = study.config.functional_unit.horizon_label;
  for (const auto& profile : profiles) {
    const ProductionBreakdown& b = breakdowns.at(profile.name);
    FootprintRow row;
    row.system = profile.name;
    row.role = profile.role;
    row.kd_method = profile.kd_method;
    if (!profile.quality_scores.empty()) row.mean_quality = profile.mean_quality();
    row.teacher_training_kgco2e = b.teacher_training_kgco2e;
    row.model_training_kgco2e = b.model_training_kgco2e;
    row.distillation_kgco2e = b.distillation_kgco2e;
    row.inference_kgco2e = profile.infer_cost_kgco2e_per_token * static_cast<double>(volume_tokens);
    report.rows.push_back(std::move(row));
  }
  const bool by_quality = std::all_of(report.rows.begin(), report.rows.end(),
                                      [](const FootprintRow& r) { return r.mean_quality.has_value(); });
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [by_quality](const FootprintRow& l, const FootprintRow& r) {
                     const bool lt = l.role == SystemRole::Teacher;
                     const bool rt = r.role == SystemRole::Teacher;
                     if (lt != rt) return lt;
                     if (by_quality && !lt) return *l.mean_quality > *r.mean_quality;
                     return false;
                   });
  return report;
}

Rendered render(const FootprintReport& report) {
  Rendered out;
  out.stem = "footprint";
  TextTable table({"system", "role", "method", "quality", "teacher_training", "model_training",
                   "distillation", "inference@X", "total", "one-time share"},
                  {Align::Left, Align::Left, Align::Left, Align::Right, Align::Right, Align::Right,
                   Align::Right, Align::Right, Align::Right, Align::Right});
  json systems = json::array();
  svg::StackedBarChart chart;
  chart.title = fmt::format("Total footprint at X = {} tokens ({})",
                            format_tokens(static_cast<double>(report.volume_tokens)),
                            report.horizon_label);
  chart.y_label = "kgCO2e";
  chart.series = {"teacher training", "model training", "distillation", "inference at X"};
  for (const auto& r : report.rows) {
    const double total = r.total_kgco2e();
    const std::string share =
        total > 0.0 ? fmt::format("{:.1f}%", 100.0 * r.one_time_kgco2e() / total) : "n/a";
    table.add_row({r.system, std::string(to_string(r.role)), r.kd_method.value_or("-"),
                   r.mean_quality ? fmt::format("{:.4f}", *r.mean_quality) : "-",
                   format_kg(r.teacher_training_kgco2e), format_kg(r.model_training_kgco2e),
                   format_kg(r.distillation_kgco2e), format_kg(r.inference_kgco2e),
                   format_kg(total), share});
    systems.push_back({{"name", r.system},
                       {"role", to_string(r.role)},
                       {"kd_method", optional_json(r.kd_method)},
                       {"mean_quality", optional_json(r.mean_quality)},
                       {"components",
                        {{"teacher_training", r.teacher_training_kgco2e},
                         {"model_training", r.model_training_kgco2e},
                         {"distillation", r.distillation_kgco2e},
                         {"inference_at_x", r.inference_kgco2e}}},
                       {"one_time_kgco2e", r.one_time_kgco2e()},
                       {"total_kgco2e", total}});
    chart.bars.push_back({r.system,
                          {r.teacher_training_kgco2e, r.model_training_kgco2e,
                           r.distillation_kgco2e, r.inference_kgco2e}});
  }
  out.table = fmt::format("Footprint at X = {} tokens ({}), kgCO2e\n\n{}",
                          format_tokens(static_cast<double>(report.volume_tokens)),
                          report.horizon_label, table.render());
  out.json = header("footprint");
  out.json["volume_tokens"] = report.volume_tokens;
  out.json["horizon_label"] = report.horizon_label;
  out.json["systems"] = std::move(systems);
  out.svg = svg::render(chart);
  return out;
}

// breakeven ----------------------------------------------------------------

Against parse_against(std::string_view text) {
  if (text == "teacher") return Against::Teacher;
  if (text == "nokd" || text == "no-kd" || text == "no_kd") return Against::NoKD;
  throw Error(ErrorCode::Usage, fmt::format("unknown reference '{}' (teacher|nokd)", text));
}

namespace {

const SystemProfile& pick_reference(const std::vector<SystemProfile>& profiles, Against against) {
  std::vector<const SystemProfile*> candidates;
  const SystemRole role = against == Against::Teacher ? SystemRole::Teacher : SystemRole::NoKD;
  for (const auto& p : profiles) {
    if (p.role == role) candidates.push_back(&p);
  }
  if (candidates.empty()) {
    if (against == Against::Teacher) throw Error(ErrorCode::NoTeacherProfile, "no teacher profile");
    throw Error(ErrorCode::NoBaselineProfile, "no No-KD baseline profile");
  }
  if (against == Against::Teacher) return *candidates.front();
  const bool scored = std::all_of(candidates.begin(), candidates.end(),
                                  [](const SystemProfile* p) { return !p->quality_scores.empty(); });
  return **std::min_element(
      candidates.begin(), candidates.end(), [scored](const SystemProfile* l, const SystemProfile* r) {
        if (scored && l->mean_quality() != r->mean_quality()) {
          return l->mean_quality() > r->mean_quality();
        }
        if (l->production_footprint_kgco2e != r->production_footprint_kgco2e) {
          return l->production_footprint_kgco2e < r->production_footprint_kgco2e;
        }
        return l->name < r->name;
      });
}

}  // namespace

BreakevenReport breakeven_report(const Study& study, Against against, std::uint64_t volume_tokens) {
  const EmissionParams& params = study.config.params;
  const auto profiles = build_profiles(study, params);
  const SystemProfile& reference = pick_reference(profiles, against);

  BreakevenReport report;
  report.against = against;
  report.reference = reference.name;
  report.reference_production_kgco2e = reference.production_footprint_kgco2e;
  report.reference_infer_cost_kgco2e_per_token = reference.infer_cost_kgco2e_per_token;
  report.volume_tokens = volume_tokens;
  for (const auto& p : profiles) {
    if (p.name == reference.name) continue;
    report.rows.push_back({p.name, p.role, p.production_footprint_kgco2e,
                           p.infer_cost_kgco2e_per_token, break_even(p, reference)});
  }

  if (against == Against::Teacher) {
    const auto& records = study.inventory.records;
    std::vector<PhaseFootprint> footprints;
    footprints.reserve(records.size());
    for (const auto& r : records) footprints.push_back(phase_footprint(r, study.inventory.devices, params));
    report.fits = fit_inference_curves(records, footprints);
    const bool teacher_fitted =
        std::any_of(report.fits.begin(), report.fits.end(),
                    [&](const auto& entry) { return entry.first.first == reference.name; });
    if (teacher_fitted) {
      for (auto& row : scaling_table(profiles, report.fits, reference)) {
        if (!row.cells.empty()) report.scaling.push_back(std::move(row));
      }
    }
  }
  return report;
}

Rendered render(const BreakevenReport& report) {
  Rendered out;
  out.stem = "breakeven";
  const double x = static_cast<double>(report.volume_tokens);
  TextTable table({"system", "role", "production kgCO2e", "kgCO2e/token", "relation", "break-even X*",
                   "total@X", "reference total@X"},
                  {Align::Left, Align::Left, Align::Right, Align::Right, Align::Left, Align::Right,
                   Align::Right, Align::Right});
  const double ref_total =
      report.reference_production_kgco2e + report.reference_infer_cost_kgco2e_per_token * x;
  json systems = json::array();
  svg::AmortizationChart chart;
  chart.title = fmt::format("Amortization against {} '{}'",
                            report.against == Against::Teacher ? "teacher" : "No-KD",
                            report.reference);
  chart.lines.push_back({report.reference, report.reference_production_kgco2e,
                         report.reference_infer_cost_kgco2e_per_token, true});
  double x_max = x;
  for (const auto& r : report.rows) {
    const auto& be = r.result;
    table.add_row({r.system, std::string(to_string(r.role)), format_kg(r.production_kgco2e),
                   fmt::format("{:.6g}", r.infer_cost_kgco2e_per_token),
                   std::string(to_string(be.relation)), format_tokens(be.breakeven_tokens),
                   format_kg(r.production_kgco2e + r.infer_cost_kgco2e_per_token * x),
                   format_kg(ref_total)});
    systems.push_back({{"name", r.system},
                       {"role", to_string(r.role)},
                       {"production_kgco2e", r.production_kgco2e},
                       {"infer_cost_kgco2e_per_token", r.infer_cost_kgco2e_per_token},
                       {"relation", to_string(be.relation)},
                       {"breakeven_tokens", optional_json(be.breakeven_tokens)},
                       {"breakeven_display", format_tokens(be.breakeven_tokens)}});
    chart.lines.push_back({r.system, r.production_kgco2e, r.infer_cost_kgco2e_per_token, false});
    if (be.breakeven_tokens) {
      x_max = std::max(x_max, 1.5 * *be.breakeven_tokens);
      chart.markers.push_back({*be.breakeven_tokens,
                               r.production_kgco2e + r.infer_cost_kgco2e_per_token * *be.breakeven_tokens,
                               fmt::format("{}: X* = {}", r.system, format_tokens(be.breakeven_tokens))});
    }
  }
  chart.x_max = x_max > 0.0 ? x_max : 1e6;

  out.table = fmt::format("Break-even against '{}' (X = {} tokens)\n\n{}", report.reference,
                          format_tokens(x), table.render());
  json scaling = json::array();
  if (!report.scaling.empty()) {
    std::vector<std::uint32_t> batches;
    for (const auto& row : report.scaling) {
      for (const auto& cell : row.cells) batches.push_back(cell.batch_size);
    }
    std::sort(batches.begin(), batches.end());
    batches.erase(std::unique(batches.begin(), batches.end()), batches.end());
    std::vector<std::string> headers{"system"};
    std::vector<Align> aligns{Align::Left};
    for (auto b : batches) {
      headers.push_back(fmt::format("B={}", b));
      aligns.push_back(Align::Right);
    }
    TextTable st(headers, aligns);
    for (const auto& row : report.scaling) {
      std::vector<std::string> cells{row.system};
      json jcells = json::array();
      for (auto b : batches) {
        const auto it = std::find_if(row.cells.begin(), row.cells.end(),
                                     [b](const ScalingCell& c) { return c.batch_size == b; });
        if (it == row.cells.end()) {
          cells.emplace_back("");
          continue;
        }
        cells.push_back(format_tokens(it->result.breakeven_tokens));
        jcells.push_back({{"batch_size", b},
                          {"relation", to_string(it->result.relation)},
                          {"breakeven_tokens", optional_json(it->result.breakeven_tokens)},
                          {"breakeven_display", format_tokens(it->result.breakeven_tokens)}});
      }
      st.add_row(std::move(cells));
      scaling.push_back({{"system", row.system}, {"cells", jcells}});
    }
    out.table += fmt::format("\nBreak-even tokens by inference batch size\n\n{}", st.render());
  }
  json fits = json::array();
  for (const auto& [key, model] : report.fits) {
    fits.push_back({{"system", key.first},
                    {"batch_size", key.second},
                    {"intercept_kgco2e", model.intercept_kgco2e},
                    {"slope_kgco2e_per_token", model.slope_kgco2e_per_token},
                    {"fit_sse", model.fit_sse},
                    {"fit_abs_error", model.fit_abs_error},
                    {"excluded_point_index",
                     model.excluded_point_index ? json(*model.excluded_point_index) : json(nullptr)}});
  }
  out.json = header("breakeven");
  out.json["against"] = report.against == Against::Teacher ? "teacher" : "nokd";
  out.json["reference"] = {{"name", report.reference},
                           {"production_kgco2e", report.reference_production_kgco2e},
                           {"infer_cost_kgco2e_per_token", report.reference_infer_cost_kgco2e_per_token}};
  out.json["volume_tokens"] = report.volume_tokens;
  out.json["systems"] = std::move(systems);
  out.json["scaling"] = std::move(scaling);
  out.json["fits"] = std::move(fits);
  out.svg = svg::render(chart);
  return out;
}

// pareto -------------------------------------------------------------------

ParetoReport pareto_report(const Study& study) {
  const auto profiles = build_profiles(study, study.config.params, {.require_scores = true});
  const auto& bs = study.config.bootstrap;
  auto points = frontier_points(profiles, bs.n, bs.level, derive_seed(bs.seed, "bootstrap"));
  for (auto& p : points) p.group = study.inventory.system(p.system_name).group;

  ParetoReport report;
  report.bootstrap = bs;
  std::vector<FrontierPoint> candidates;
  for (auto& p : points) {
    if (study.inventory.system(p.system_name).role == SystemRole::Teacher) {
      if (!report.teacher) report.teacher = p;
      continue;
    }
    candidates.push_back(std::move(p));
  }
  auto kept = drop_non_improving_checkpoints(candidates);
  for (const auto& c : candidates) {
    const bool survived = std::any_of(kept.begin(), kept.end(), [&](const FrontierPoint& k) {
      return k.system_name == c.system_name;
    });
    if (!survived) report.dropped_checkpoints.push_back(c.system_name);
  }
  report.points = pareto_frontier(std::move(kept));
  return report;
}

Rendered render(const ParetoReport& report) {
  Rendered out;
  out.stem = "pareto";
  TextTable table({"system", "group", "production kgCO2e", "mean quality", "CI low", "CI high", "frontier"},
                  {Align::Left, Align::Left, Align::Right, Align::Right, Align::Right, Align::Right,
                   Align::Left});
  json points = json::array();
  svg::FrontierChart chart;
  chart.title = fmt::format("Pareto frontier (bootstrap N={}, {:g}% CI)", report.bootstrap.n,
                            100.0 * report.bootstrap.level);
  const auto point_json = [](const FrontierPoint& p) {
    return json{{"system", p.system_name},
                {"group", p.group},
                {"production_footprint_kgco2e", p.production_footprint_kgco2e},
                {"mean_quality", p.mean_quality},
                {"quality_ci", {p.quality_ci.lower, p.quality_ci.upper}},
                {"on_frontier", p.on_frontier}};
  };
  for (const auto& p : report.points) {
    table.add_row({p.system_name, p.group, format_kg(p.production_footprint_kgco2e),
                   fixed(p.mean_quality, 4), fixed(p.quality_ci.lower, 4),
                   fixed(p.quality_ci.upper, 4), p.on_frontier ? "yes" : "no"});
    points.push_back(point_json(p));
    chart.points.push_back({p.system_name, p.production_footprint_kgco2e, p.mean_quality,
                            p.quality_ci.lower, p.quality_ci.upper, p.on_frontier});
  }
  out.table = table.render();
  if (report.teacher) {
    out.table += fmt::format("\nteacher '{}': mean quality {:.4f} [{:.4f}, {:.4f}]\n",
                             report.teacher->system_name, report.teacher->mean_quality,
                             report.teacher->quality_ci.lower, report.teacher->quality_ci.upper);
    chart.teacher_quality = report.teacher->mean_quality;
  }
  if (!report.dropped_checkpoints.empty()) {
    std::string names;
    for (const auto& n : report.dropped_checkpoints) names += (names.empty() ? "" : ", ") + n;
    out.table += fmt::format("dropped non-improving checkpoints: {}\n", names);
  }
  out.json = header("pareto");
  out.json["bootstrap"] = {{"n", report.bootstrap.n},
                           {"level", report.bootstrap.level},
                           {"seed", report.bootstrap.seed}};
  out.json["points"] = std::move(points);
  out.json["teacher"] = report.teacher ? point_json(*report.teacher) : json(nullptr);
  out.json["dropped_checkpoints"] = report.dropped_checkpoints;
  out.svg = svg::render(chart);
  return out;
}

// recommend ----------------------------------------------------------------

RecommendReport recommend_report(const Study& study, std::uint64_t volume_tokens) {
  if (!study.config.target_quality) {
    throw Error(ErrorCode::Usage,
                "recommend needs a quality target: set \"target_quality\" in config.json to the "
                "minimum acceptable mean score");
  }
  const auto profiles = build_profiles(study, study.config.params, {.require_scores = true});
  const auto& bs = study.config.bootstrap;
  RecommendReport report;
  report.target_quality = *study.config.target_quality;
  report.volume_tokens = volume_tokens;
  report.recommendation = recommend(profiles, report.target_quality,
                                    static_cast<double>(volume_tokens), bs.n,
                                    derive_seed(bs.seed, "bootstrap"), bs.level);
  return report;
}

Rendered render(const RecommendReport& report) {
  Rendered out;
  out.stem = "recommend";
  const auto& rec = report.recommendation;
  out.table = fmt::format("verdict: {}{}\n", to_string(rec.verdict),
                          rec.system ? fmt::format(" ({})", *rec.system) : "");
  out.table += fmt::format("target quality {:.6g}, expected volume {} tokens\n\nrationale:\n",
                           report.target_quality,
                           format_tokens(static_cast<double>(report.volume_tokens)));
  json rationale = json::array();
  for (std::size_t i = 0; i < rec.rationale.size(); ++i) {
    const auto& f = rec.rationale[i];
    out.table += fmt::format("  {}. [step {}: {}] {}\n", i + 1, f.step, step_title(f.step), f.message);
    rationale.push_back({{"step", f.step}, {"title", step_title(f.step)}, {"message", f.message}});
  }
  out.json = header("recommend");
  out.json["verdict"] = to_string(rec.verdict);
  out.json["system"] = optional_json(rec.system);
  out.json["target_quality"] = report.target_quality;
  out.json["volume_tokens"] = report.volume_tokens;
  out.json["breakeven_tokens_vs_teacher"] = optional_json(rec.breakeven_tokens_vs_teacher);
  out.json["quality_gap_significant"] = rec.quality_gap_significant;
  out.json["rationale"] = std::move(rationale);
  return out;
}

// sensitivity --------------------------------------------------------------

SensitivityReport sensitivity_report(const Study& study, std::span<const ParamRange> ranges) {
  for (const auto& r : ranges) validate_range(r);
  SensitivityReport report;
  report.rows = one_way_sweep(study.inventory, study.config.params, ranges);
  for (const auto& [name, b] : production_breakdowns(study.inventory, study.config.params)) {
    report.baseline_totals.emplace(name, b.total());
  }
  report.ordering = ordering_report(report.rows, report.baseline_totals);
  return report;
}

Rendered render(const SensitivityReport& report) {
  Rendered out;
  out.stem = "sensitivity";
  TextTable table({"system", "parameter", "low", "high", "baseline", "baseline kgCO2e", "Δ low",
                   "Δ high"},
                  {Align::Left, Align::Left, Align::Right, Align::Right, Align::Right, Align::Right,
                   Align::Right, Align::Right});
  json rows = json::array();
  svg::PairedBarChart chart;
  chart.title = "One-way sensitivity of production footprint";
  for (const auto& r : report.rows) {
    const std::string parameter(to_string(r.range.parameter));
    table.add_row({r.system_name, parameter, fmt::format("{:g}", r.range.low),
                   fmt::format("{:g}", r.range.high), fmt::format("{:g}", r.range.baseline),
                   format_kg(r.baseline_kgco2e), fmt::format("{:+.6g}", r.delta_low_kgco2e),
                   fmt::format("{:+.6g}", r.delta_high_kgco2e)});
    rows.push_back({{"system", r.system_name},
                    {"parameter", parameter},
                    {"low", r.range.low},
                    {"high", r.range.high},
                    {"baseline", r.range.baseline},
                    {"baseline_kgco2e", r.baseline_kgco2e},
                    {"delta_low_kgco2e", r.delta_low_kgco2e},
                    {"delta_high_kgco2e", r.delta_high_kgco2e},
                    {"low_components",
                     {{"operational_kgco2e", r.low_components.operational_kgco2e},
                      {"embodied_kgco2e", r.low_components.embodied_kgco2e}}},
                    {"high_components",
                     {{"operational_kgco2e", r.high_components.operational_kgco2e},
                      {"embodied_kgco2e", r.high_components.embodied_kgco2e}}}});
    chart.bars.push_back({fmt::format("{} / {}", r.system_name, parameter), r.delta_low_kgco2e,
                          r.delta_high_kgco2e});
  }
  const auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& n : v) s += (s.empty() ? "" : " < ") + n;
    return s;
  };
  std::string block = fmt::format("baseline order: {}\n", join(report.ordering.baseline_order));
  json entries = json::array();
  for (const auto& e : report.ordering.entries) {
    block += fmt::format("  {} {} ({:g}): {} {}\n", to_string(e.parameter),
                         e.extreme == Extreme::Low ? "low" : "high", e.value, join(e.order),
                         e.matches_baseline ? "[same]" : "[CHANGED]");
    entries.push_back({{"parameter", to_string(e.parameter)},
                       {"extreme", e.extreme == Extreme::Low ? "low" : "high"},
                       {"value", e.value},
                       {"order", e.order},
                       {"matches_baseline", e.matches_baseline}});
  }
  block += fmt::format("ordering stability: {}\n", report.ordering.stable() ? "PASS" : "FAIL");
  out.table = table.render() + "\n" + block;
  out.json = header("sensitivity");
  out.json["rows"] = std::move(rows);
  out.json["baseline_totals"] = report.baseline_totals;
  out.json["ordering"] = {{"baseline_order", report.ordering.baseline_order},
                          {"entries", entries},
                          {"stable", report.ordering.stable()}};
  out.svg = svg::render(chart);
  return out;
}

// simulate -----------------------------------------------------------------

SimulateReport simulate_report(const kd::KdPlan& plan) { return {plan, kd::simulate(plan)}; }

kd::KdPlan load_plan(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: {}", path.filename().string(), e.what()));
  }
  return kd::parse_plan(doc);
}

Rendered render(const SimulateReport& report) {
  Rendered out;
  out.stem = "simulate";
  const auto& t = report.result.trace;
  TextTable table({"counter", "steps"}, {Align::Left, Align::Right});
  table.add_row({"teacher encoder", fmt::format("{}", t.teacher_encoder_steps())});
  table.add_row({"teacher decoder", fmt::format("{}", t.teacher_decoder_steps())});
  table.add_row({"teacher total", fmt::format("{}", t.teacher_token_steps())});
  table.add_row({"student", fmt::format("{}", t.student_token_steps())});
  out.table = fmt::format("simulated {} on '{}' ({} phase, {} corpus tokens)\n\n{}",
                          to_string(report.plan.method), report.plan.fixture, to_string(t.phase()),
                          report.result.corpus_tokens, table.render());
  out.json = kd::to_json(report.result, report.plan);
  return out;
}

std::string records_csv(const SimulateReport& report) {
  return write_records_csv(report.result.records);
}

}  // namespace kdlca::report
