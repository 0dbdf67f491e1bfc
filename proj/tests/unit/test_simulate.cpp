// SPDX-License-Identifier: Apache-2.0
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "kdlca/kd/simulate.hpp"

using namespace kdlca;
using namespace kdlca::kd;

namespace {

KdPlan plan_for(KdMethod method, std::string fixture = "hash_v8") {
  KdPlan plan;
  plan.method = method;
  plan.fixture = std::move(fixture);
  plan.corpus = {10, 2, 7, 42};
  plan.epochs = 3;
  return plan;
}

std::uint64_t source_tokens(const ParallelCorpus& c) {
  std::uint64_t n = 0;
  for (const auto& s : c.sources) n += s.size();
  return n;
}

}  // namespace

TEST(Simulate, CorpusIsSeededAndAvoidsEos) {
  const CorpusSpec spec{20, 2, 5, 7};
  const auto a = make_corpus(spec, 8);
  const auto b = make_corpus(spec, 8);
  EXPECT_EQ(a.sources, b.sources);
  EXPECT_EQ(a.refs, b.refs);
  for (const auto& s : a.sources) {
    EXPECT_GE(s.size(), 2U);
    EXPECT_LE(s.size(), 5U);
    for (TokenId t : s) {
      EXPECT_GE(t, 1U);
      EXPECT_LT(t, 8U);
    }
  }
  EXPECT_NE(make_corpus({20, 2, 5, 8}, 8).sources, a.sources);
}

TEST(Simulate, NoKdHasNoTeacherSteps) {
  const auto plan = plan_for(KdMethod::None);
  const auto r = simulate(plan);
  EXPECT_EQ(r.trace.teacher_token_steps(), 0U);
  EXPECT_EQ(r.trace.phase(), Phase::TeacherTrain);
  EXPECT_EQ(r.trace.student_token_steps(), plan.epochs * r.corpus_tokens);
  ASSERT_EQ(r.records.size(), 1U);
  EXPECT_EQ(r.records[0].phase, Phase::TeacherTrain);
}

TEST(Simulate, WordKdChargesTeacherPerTokenPerEpoch) {
  for (auto method : {KdMethod::WordKD, KdMethod::SelKD, KdMethod::TieKD}) {
    const auto plan = plan_for(method);
    const auto r = simulate(plan);
    EXPECT_EQ(r.trace.teacher_token_steps(), plan.epochs * r.corpus_tokens);
    EXPECT_EQ(r.trace.student_token_steps(), plan.epochs * r.corpus_tokens);
    EXPECT_EQ(r.trace.phase(), Phase::Distill);
    EXPECT_TRUE(r.synthetic.empty());
    EXPECT_GT(r.mean_loss_per_token, 0.0);
  }
}

TEST(Simulate, SeqKdChargesBeamWidth) {
  for (std::size_t beam : {1U, 4U, 6U}) {
    auto plan = plan_for(KdMethod::SeqKD, "fixed_length_v8");
    plan.beam = {beam, 32, 0.0};
    const auto r = simulate(plan);
    const auto corpus = make_corpus(plan.corpus, 8);
    const std::uint64_t src = source_tokens(corpus);
    const std::uint64_t n = corpus.sources.size();
    EXPECT_EQ(r.trace.teacher_encoder_steps(), src);
    EXPECT_EQ(r.trace.teacher_decoder_steps(), beam * (src + n));
    // Fixed-length targets copy the source length.
    EXPECT_EQ(r.trace.student_token_steps(), plan.epochs * 2 * src);
    EXPECT_EQ(r.synthetic.size(), n);
  }
}

TEST(Simulate, RecordsFollowSteps) {
  auto plan = plan_for(KdMethod::WordKD);
  plan.energy = {2e-6, 5e-7};
  plan.throughput = {1e5, 2e5};
  plan.system = "wkd";
  const auto r = simulate(plan);
  ASSERT_EQ(r.records.size(), 2U);
  double energy = 0.0;
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.system, "wkd");
    EXPECT_EQ(rec.phase, Phase::Distill);
    energy += *rec.energy_kwh;
  }
  const double steps = static_cast<double>(r.trace.teacher_token_steps());
  EXPECT_NEAR(energy, steps * 2e-6 + steps * 5e-7, 1e-12 * energy);
}

TEST(Simulate, ParallelWorkersMatchSerial) {
  auto plan = plan_for(KdMethod::SeqInter);
  const auto serial = simulate(plan);
  plan.workers = 4;
  const auto parallel = simulate(plan);
  EXPECT_EQ(serial.trace.teacher_token_steps(), parallel.trace.teacher_token_steps());
  EXPECT_EQ(serial.mean_loss_per_token, parallel.mean_loss_per_token);
}

TEST(Simulate, MethodNames) {
  for (auto m : {KdMethod::None, KdMethod::WordKD, KdMethod::SelKD, KdMethod::TieKD, KdMethod::SeqKD,
                 KdMethod::SeqInter, KdMethod::SeqRep}) {
    EXPECT_EQ(parse_kd_method(to_string(m)), m);
  }
  EXPECT_KDLCA_ERROR(parse_kd_method("dark-kd"), ErrorCode::ParseError);
}

TEST(PlanParsing, ReadsFields) {
  const auto plan = parse_plan(nlohmann::json::parse(R"({
    "schema_version": 1, "system": "s", "fixture": "fixed_length_v8", "method": "seq-kd",
    "beam": 7, "max_len": 20, "epochs": 2, "workers": 3,
    "corpus": {"sentences": 5, "min_len": 1, "max_len": 4, "seed": 9}})"));
  EXPECT_EQ(plan.system, "s");
  EXPECT_EQ(plan.method, KdMethod::SeqKD);
  EXPECT_EQ(plan.beam.beam, 7U);
  EXPECT_EQ(plan.beam.max_len, 20U);
  EXPECT_EQ(plan.workers, 3U);
  EXPECT_EQ(plan.corpus.seed, 9U);
}

TEST(PlanParsing, Errors) {
  EXPECT_KDLCA_ERROR(parse_plan(nlohmann::json::parse(R"({"schema_version": 2, "method": "word-kd"})")),
                     ErrorCode::SchemaVersionMismatch);
  EXPECT_KDLCA_ERROR(
      parse_plan(nlohmann::json::parse(R"({"schema_version": 1, "method": "word-kd", "fixture": "x"})")),
      ErrorCode::UnknownFixture);
  EXPECT_KDLCA_ERROR(parse_plan(nlohmann::json::parse(R"({"schema_version": 1})")), ErrorCode::ParseError);
  EXPECT_KDLCA_ERROR(
      parse_plan(nlohmann::json::parse(R"({"schema_version": 1, "method": "word-kd", "beam": 0})")),
      ErrorCode::ParseError);
  EXPECT_KDLCA_ERROR(
      parse_plan(nlohmann::json::parse(R"({"schema_version": 1, "method": "word-kd", "alpha": 2})")),
      ErrorCode::ParseError);
}
