// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <functional>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "kdlca/report/commands.hpp"
#include "kdlca/report/csv.hpp"
#include "kdlca/report/format.hpp"
#include "kdlca/report/study.hpp"

using namespace kdlca;
using namespace kdlca::report;
namespace fs = std::filesystem;

namespace {

const fs::path kData = KDLCA_DATA_DIR;

const Study& sample_study() {
  static const Study study =
      load_study(kData / "config.json", kData / "records.csv", kData / "scores.csv");
  return study;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("kdlca_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) { return read_text_file(p); }

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Csv, QuotedFields) {
  const auto t = parse_csv("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n  z  ,w\n", "t.csv");
  ASSERT_EQ(t.rows.size(), 2U);
  EXPECT_EQ(t.rows[0][0], "x, y");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[1][0], "z");
  EXPECT_EQ(t.line_numbers[1], 3U);
}

TEST(Csv, ErrorsCarryLineAndColumn) {
  const auto ragged = error_message([] { parse_csv("a,b\n1,2\n3\n", "t.csv"); });
  EXPECT_NE(ragged.find("t.csv: line 3"), std::string::npos) << ragged;
  const auto quote = error_message([] { parse_csv("a,b\n1,\"open\n", "t.csv"); });
  EXPECT_NE(quote.find("line 2, column"), std::string::npos) << quote;
  EXPECT_KDLCA_ERROR(parse_csv("a\n\"x\"y\n", "t.csv"), ErrorCode::ParseError);
}

TEST(RecordsCsv, ParsesOptionalCellsInAnyColumnOrder) {
  const auto records = parse_records_csv(
      "runtime_hours,system,phase,device_id,energy_kwh,avg_power_kw,tokens,batch_size,repeat\n"
      "2,t,train,gpu,,0.5,,,0\n"
      "1,t,infer,gpu,0.25,,1000,8,1\n");
  ASSERT_EQ(records.size(), 2U);
  EXPECT_FALSE(records[0].energy_kwh);
  EXPECT_DOUBLE_EQ(*records[0].avg_power_kw, 0.5);
  EXPECT_EQ(records[1].phase, Phase::Infer);
  EXPECT_EQ(*records[1].tokens_processed, 1000U);
  EXPECT_EQ(*records[1].batch_size, 8U);
  EXPECT_EQ(records[1].repeat_index, 1U);
}

TEST(RecordsCsv, RejectsBadValues) {
  const std::string header =
      "system,phase,device_id,energy_kwh,avg_power_kw,runtime_hours,tokens,batch_size,repeat\n";
  EXPECT_KDLCA_ERROR(parse_records_csv(header + "t,train,gpu,-1,,1,,,0\n"), ErrorCode::NegativeValue);
  EXPECT_KDLCA_ERROR(parse_records_csv(header + "t,train,gpu,,,1,,,0\n"),
                     ErrorCode::MissingEnergySource);
  EXPECT_KDLCA_ERROR(parse_records_csv(header + "t,train,gpu,1,,0,,,0\n"),
                     ErrorCode::NonPositiveRuntime);
  EXPECT_KDLCA_ERROR(parse_records_csv(header + "t,train,gpu,abc,,1,,,0\n"), ErrorCode::ParseError);
  EXPECT_KDLCA_ERROR(parse_records_csv(header + "t,boil,gpu,1,,1,,,0\n"), ErrorCode::ParseError);
  EXPECT_KDLCA_ERROR(parse_records_csv("system,phase\nt,train\n"), ErrorCode::ParseError);
  const auto msg = error_message([&] { parse_records_csv(header + "t,train,gpu,1,,1,,,0\nt,train,gpu,x,,1,,,0\n"); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(RecordsCsv, RoundTripPreservesValues) {
  const auto& records = sample_study().inventory.records;
  const auto back = parse_records_csv(write_records_csv(records));
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], records[i]) << i;

  MeasurementRecord r = testutil::record("s", Phase::Distill, 0.1 + 0.2, 1.0 / 3.0);
  r.tokens_processed = 123456789012ULL;
  const auto one = parse_records_csv(write_records_csv(std::vector{r}));
  EXPECT_EQ(one.at(0), r);
}

TEST(ScoresCsv, AlignsDocuments) {
  const auto t = parse_scores_csv("system,doc_id,score\na,d2,0.5\na,d1,0.25\nb,d1,1\nb,d2,0\n");
  EXPECT_EQ(t.documents, (std::vector<std::string>{"d2", "d1"}));
  EXPECT_EQ(t.of("b"), (std::vector<double>{0.0, 1.0}));
  EXPECT_FALSE(t.has("c"));
  EXPECT_KDLCA_ERROR((void)t.of("c"), ErrorCode::MissingScores);
}

TEST(ScoresCsv, Errors) {
  EXPECT_KDLCA_ERROR(parse_scores_csv("system,doc_id,score\na,d1,1\nb,d2,1\n"), ErrorCode::RaggedMatrix);
  EXPECT_KDLCA_ERROR(parse_scores_csv("system,doc_id,score\na,d1,1\na,d1,1\n"), ErrorCode::ParseError);
}

TEST(Config, SchemaVersionAndRoundTrip) {
  auto doc = nlohmann::json::parse(slurp(kData / "config.json"));
  const auto config = parse_config(doc);
  EXPECT_EQ(config.systems.size(), 7U);
  EXPECT_EQ(to_json(parse_config(to_json(config))), to_json(config));
  doc["schema_version"] = 2;
  EXPECT_KDLCA_ERROR(parse_config(doc), ErrorCode::SchemaVersionMismatch);
  doc.erase("schema_version");
  EXPECT_KDLCA_ERROR(parse_config(doc), ErrorCode::SchemaVersionMismatch);
}

TEST(Config, RangesFile) {
  const auto ranges = load_ranges(kData / "ranges.json");
  EXPECT_EQ(ranges.size(), 5U);
  EXPECT_KDLCA_ERROR(parse_ranges(nlohmann::json::parse(
                         R"({"schema_version": 1, "ranges": [{"parameter": "pue", "low": 0.5, "high": 2, "baseline": 1.2}]})")),
                     ErrorCode::RangeViolatesDomain);
}

TEST(Study, RejectsUndeclaredSystemsAndDevices) {
  const auto config = load_config(kData / "config.json");
  EXPECT_KDLCA_ERROR(make_study(config, {testutil::record("ghost", Phase::TeacherTrain, 1, 1, "a100")}),
                     ErrorCode::UnknownSystem);
  EXPECT_KDLCA_ERROR(make_study(config, {testutil::record("teacher", Phase::TeacherTrain, 1, 1, "tpu")}),
                     ErrorCode::UnknownDevice);
}

TEST(Footprint, ZeroVolumeIsProductionAndInferenceScales) {
  const auto& study = sample_study();
  const auto at0 = footprint_report(study, 0);
  const auto at1 = footprint_report(study, 10'000'000);
  const auto at2 = footprint_report(study, 20'000'000);
  const auto breakdowns = production_breakdowns(study.inventory, study.config.params);
  ASSERT_EQ(at0.rows.size(), 7U);
  EXPECT_EQ(at0.rows.front().role, SystemRole::Teacher);
  for (std::size_t i = 0; i < at0.rows.size(); ++i) {
    const auto& row = at0.rows[i];
    EXPECT_EQ(row.inference_kgco2e, 0.0);
    EXPECT_NEAR(row.total_kgco2e(), breakdowns.at(row.system).total(), 1e-12);
    EXPECT_NEAR(at2.rows[i].inference_kgco2e, 2.0 * at1.rows[i].inference_kgco2e,
                1e-12 * at2.rows[i].inference_kgco2e);
  }
  for (std::size_t i = 2; i < at0.rows.size(); ++i) {
    EXPECT_GE(*at0.rows[i - 1].mean_quality, *at0.rows[i].mean_quality);
  }
}

TEST(Breakeven, JsonMatchesReport) {
  const auto report = breakeven_report(sample_study(), Against::Teacher, 50'000'000);
  const auto json = nlohmann::json::parse(render(report).json.dump());
  EXPECT_EQ(json["schema_version"], 1);
  EXPECT_EQ(json["reference"]["name"], "teacher");
  ASSERT_EQ(json["systems"].size(), report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const auto& j = json["systems"][i];
    EXPECT_EQ(j["name"], row.system);
    if (row.result.breakeven_tokens) {
      EXPECT_EQ(j["breakeven_tokens"].get<double>(), *row.result.breakeven_tokens);
    } else {
      EXPECT_TRUE(j["breakeven_tokens"].is_null());
    }
  }
  EXPECT_FALSE(report.scaling.empty());
}

TEST(Breakeven, StudentsCrossTeacherNoKdNeverDoes) {
  const auto report = breakeven_report(sample_study(), Against::Teacher, 50'000'000);
  for (const auto& row : report.rows) {
    if (row.role == SystemRole::KDStudent) {
      EXPECT_EQ(row.result.relation, BreakEvenRelation::CrossesAt) << row.system;
      EXPECT_GT(*row.result.breakeven_tokens, 0.0);
    }
  }
  EXPECT_EQ(parse_against("no-kd"), Against::NoKD);
  EXPECT_KDLCA_ERROR(parse_against("student"), ErrorCode::Usage);
}

TEST(Pareto, TeacherLineAndFrontier) {
  const auto report = pareto_report(sample_study());
  ASSERT_TRUE(report.teacher);
  EXPECT_EQ(report.teacher->system_name, "teacher");
  bool any = false;
  for (const auto& p : report.points) {
    EXPECT_NE(p.system_name, "teacher");
    EXPECT_LE(p.quality_ci.lower, p.mean_quality);
    EXPECT_GE(p.quality_ci.upper, p.mean_quality);
    any = any || p.on_frontier;
  }
  EXPECT_TRUE(any);
  const auto svg = render(report).svg;
  EXPECT_NE(svg.find("data-quality="), std::string::npos);
}

TEST(Recommend, NeedsTarget) {
  Study study = sample_study();
  study.config.target_quality.reset();
  EXPECT_KDLCA_ERROR(recommend_report(study, 1000), ErrorCode::Usage);
  const auto report = recommend_report(sample_study(), 50'000'000);
  EXPECT_EQ(report.recommendation.rationale.size(), 4U);
}

TEST(Sensitivity, ReportTableEndsWithVerdict) {
  const auto report = sensitivity_report(sample_study(), load_ranges(kData / "ranges.json"));
  EXPECT_EQ(report.rows.size(), 5U * 7U);
  const auto table = render(report).table;
  EXPECT_NE(table.find("ordering stability: "), std::string::npos);
}

TEST(Outputs, DeterministicBytes) {
  const auto& study = sample_study();
  const auto a = render(pareto_report(study));
  const auto b = render(pareto_report(study));
  EXPECT_EQ(a.json.dump(2), b.json.dump(2));
  EXPECT_EQ(a.svg, b.svg);
  const auto c = render(footprint_report(study, 123));
  const auto d = render(footprint_report(study, 123));
  EXPECT_EQ(c.svg, d.svg);
  EXPECT_EQ(c.table, d.table);
}

TEST(Outputs, WritesRequestedFormats) {
  TempDir dir;
  const auto rendered = render(footprint_report(sample_study(), 1000));
  EXPECT_TRUE(write_outputs(dir.path(), rendered, OutputFormat::Table).empty());
  const auto written = write_outputs(dir.path(), rendered, OutputFormat::All);
  EXPECT_EQ(written.size(), 2U);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir.path() / (rendered.stem + ".json"))), rendered.json);
  EXPECT_EQ(slurp(dir.path() / (rendered.stem + ".svg")), rendered.svg);
}

TEST(Outputs, NoPartialFilesOnFailure) {
  TempDir dir;
  const auto rendered = render(footprint_report(sample_study(), 1000));
  // A directory squatting on the svg name makes the second rename fail.
  fs::create_directories(dir.path() / (rendered.stem + ".svg") / "occupied");
  EXPECT_KDLCA_ERROR(write_outputs(dir.path(), rendered, OutputFormat::All), ErrorCode::Io);
  std::vector<std::string> left;
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    left.push_back(entry.path().filename().string());
  }
  EXPECT_EQ(left, (std::vector<std::string>{rendered.stem + ".svg"}));
}

TEST(Outputs, FormatNames) {
  EXPECT_EQ(parse_output_format("all"), OutputFormat::All);
  EXPECT_KDLCA_ERROR(parse_output_format("xml"), ErrorCode::Usage);
}

TEST(Format, Tokens) {
  EXPECT_EQ(format_tokens(std::nullopt), kNoCrossing);
  EXPECT_EQ(format_tokens(1.5e9), "1.50B");
  EXPECT_EQ(format_tokens(2.345e6), "2.35M");
  EXPECT_EQ(format_tokens(12e3), "12.00K");
  EXPECT_EQ(format_tokens(12.0), "12.00");
}

TEST(Simulate, ReportWritesRecordsCsv) {
  kd::KdPlan plan;
  plan.method = kd::KdMethod::WordKD;
  plan.corpus = {4, 2, 4, 1};
  const auto report = simulate_report(plan);
  const auto records = parse_records_csv(records_csv(report));
  EXPECT_EQ(records, report.result.records);
  EXPECT_EQ(render(report).json["teacher_token_steps"], report.result.trace.teacher_token_steps());
}
