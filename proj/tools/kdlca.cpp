// SPDX-License-Identifier: Apache-2.0
//
// kdlca: life-cycle carbon accounting for distilled translation models.
// Exit codes: 0 success, 2 usage error, 3 data error.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kdlca/error.hpp"
#include "kdlca/kd/seq_kd.hpp"
#include "kdlca/report/commands.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

namespace rp = kdlca::report;

struct Options {
  std::string config;
  std::string records;
  std::string scores;
  std::string out_dir = ".";
  std::string format = "table";
  std::optional<std::uint64_t> volume_tokens;
  std::optional<std::uint64_t> seed;
  std::string against = "teacher";
  std::string ranges;
  std::string plan;
};

void add_common(CLI::App* cmd, Options& o, bool needs_records, bool takes_scores) {
  cmd->add_option("--config", o.config, "project config (config.json)")->required()->check(CLI::ExistingFile);
  if (needs_records) {
    cmd->add_option("--records", o.records, "measurement records (records.csv)")
        ->required()
        ->check(CLI::ExistingFile);
  }
  if (takes_scores) {
    cmd->add_option("--scores", o.scores, "per-document quality scores (scores.csv)")
        ->check(CLI::ExistingFile);
  }
  cmd->add_option("--volume-tokens", o.volume_tokens, "served tokens X (overrides the config)");
  cmd->add_option("--seed", o.seed, "bootstrap seed (overrides the config)");
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out-dir", o.out_dir, "directory for report files")->envname("KDLCA_OUT_DIR");
  cmd->add_option("--format", o.format, "table|json|svg|all")
      ->check(CLI::IsMember({"table", "json", "svg", "all"}));
}

rp::Study load(const Options& o) {
  std::optional<std::filesystem::path> scores;
  if (!o.scores.empty()) scores = o.scores;
  rp::Study study = rp::load_study(o.config, o.records, scores);
  if (o.seed) study.config.bootstrap.seed = *o.seed;
  return study;
}

std::uint64_t volume(const Options& o, const rp::Study& study) {
  return o.volume_tokens.value_or(study.config.functional_unit.volume_tokens);
}

void emit(const Options& o, const rp::Rendered& rendered,
          const std::vector<rp::ExtraFile>& extra = {}) {
  const auto format = rp::parse_output_format(o.format);
  const auto written = rp::write_outputs(o.out_dir, rendered, format, extra);
  if (format == rp::OutputFormat::Table || format == rp::OutputFormat::All) {
    std::cout << rendered.table << std::flush;
  }
  for (const auto& path : written) std::cerr << "wrote " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Life-cycle carbon accounting for knowledge-distilled translation models"};
  app.require_subcommand(1);
  Options o;

  auto* footprint = app.add_subcommand("footprint", "per-system footprint decomposition at volume X");
  add_common(footprint, o, true, true);
  add_output(footprint, o);

  auto* breakeven = app.add_subcommand("breakeven", "break-even volumes against a reference system");
  add_common(breakeven, o, true, true);
  add_output(breakeven, o);
  breakeven->add_option("--against", o.against, "teacher|nokd")
      ->check(CLI::IsMember({"teacher", "nokd"}));

  auto* pareto = app.add_subcommand("pareto", "footprint/quality Pareto frontier with bootstrap CIs");
  add_common(pareto, o, true, true);
  pareto->get_option("--scores")->required();
  add_output(pareto, o);

  auto* recommend = app.add_subcommand("recommend", "choose teacher, No-KD or a KD student");
  add_common(recommend, o, true, true);
  recommend->get_option("--scores")->required();
  add_output(recommend, o);

  auto* sensitivity = app.add_subcommand("sensitivity", "one-way parameter sensitivity");
  add_common(sensitivity, o, true, false);
  sensitivity->add_option("--ranges", o.ranges, "parameter ranges (ranges.json)")
      ->required()
      ->check(CLI::ExistingFile);
  add_output(sensitivity, o);

  auto* simulate = app.add_subcommand("simulate", "run a toy KD plan and write its measurement records");
  simulate->add_option("--plan", o.plan, "KD plan (kdplan.json)")->required()->check(CLI::ExistingFile);
  add_output(simulate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (footprint->parsed()) {
      const auto study = load(o);
      emit(o, rp::render(rp::footprint_report(study, volume(o, study))));
    } else if (breakeven->parsed()) {
      const auto study = load(o);
      emit(o, rp::render(rp::breakeven_report(study, rp::parse_against(o.against), volume(o, study))));
    } else if (pareto->parsed()) {
      emit(o, rp::render(rp::pareto_report(load(o))));
    } else if (recommend->parsed()) {
      const auto study = load(o);
      emit(o, rp::render(rp::recommend_report(study, volume(o, study))));
    } else if (sensitivity->parsed()) {
      const auto ranges = rp::load_ranges(o.ranges);
      const auto study = load(o);
      emit(o, rp::render(rp::sensitivity_report(study, ranges)));
    } else if (simulate->parsed()) {
      const auto report = rp::simulate_report(rp::load_plan(o.plan));
      std::vector<rp::ExtraFile> extra{{"records.csv", rp::records_csv(report)}};
      if (!report.result.synthetic.empty()) {
        std::ostringstream corpus;
        kdlca::kd::write_corpus(corpus, report.result.synthetic);
        extra.push_back({"synthetic_corpus.tsv", corpus.str()});
      }
      emit(o, rp::render(report), extra);
    }
  } catch (const kdlca::Error& e) {
    std::cerr << fmt::format("kdlca: {} ({})\n", e.what(), kdlca::to_string(e.code()));
    return e.code() == kdlca::ErrorCode::Usage ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("kdlca: {}\n", e.what());
    return kExitData;
  }
  return 0;
}
