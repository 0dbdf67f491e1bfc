// SPDX-License-Identifier: Apache-2.0
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "kdlca/kd/fixtures.hpp"
#include "kdlca/kd/seq_kd.hpp"
#include "kdlca/kd/simulate.hpp"

using namespace kdlca;
using namespace kdlca::kd;

namespace {

ParallelCorpus small_corpus(std::size_t n = 12) {
  return make_corpus({n, 2, 6, 5}, 8);
}

}  // namespace

TEST(TokenSimilarity, EditDistanceRatio) {
  const std::vector<TokenId> a{1, 2, 3, 4};
  const std::vector<TokenId> b{1, 2, 4};
  EXPECT_DOUBLE_EQ(token_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(token_similarity(a, b), 0.75);
  EXPECT_DOUBLE_EQ(token_similarity({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(token_similarity(a, {}), 0.0);
}

TEST(SeqKD, PlainCorpusIsTeacherBeamOutput) {
  const auto fixture = make_fixture("hash_v8");
  const auto corpus = small_corpus();
  const BeamConfig config{4, 12, 0.0};
  ComputeTrace trace;
  const auto synthetic = build_seq_kd_corpus(*fixture.teacher, corpus.sources, config, PlainSeqKD{}, trace);
  ASSERT_EQ(synthetic.size(), corpus.sources.size());
  for (std::size_t i = 0; i < synthetic.size(); ++i) {
    ComputeTrace t;
    const auto beam = beam_search(*fixture.teacher, corpus.sources[i], config, t);
    auto want = beam.best.tokens;
    if (beam.best.finished) want.pop_back();
    EXPECT_EQ(synthetic[i].source, corpus.sources[i]);
    EXPECT_EQ(synthetic[i].target, want);
    EXPECT_FALSE(synthetic[i].from_reference);
  }
}

TEST(SeqKD, InterPicksMostSimilarCandidate) {
  const auto fixture = make_fixture("hash_v8");
  const auto corpus = small_corpus();
  const BeamConfig config{5, 12, 0.0};
  ComputeTrace trace;
  const auto synthetic = build_seq_kd_corpus(*fixture.teacher, corpus.sources, config,
                                             SeqInter{corpus.refs}, trace);
  for (std::size_t i = 0; i < synthetic.size(); ++i) {
    ComputeTrace t;
    const auto beam = beam_search(*fixture.teacher, corpus.sources[i], config, t);
    double best = -1.0;
    for (const auto& c : beam.candidates) {
      auto tokens = c.tokens;
      if (c.finished) tokens.pop_back();
      best = std::max(best, token_similarity(tokens, corpus.refs[i]));
    }
    EXPECT_DOUBLE_EQ(token_similarity(synthetic[i].target, corpus.refs[i]), best);
  }
}

TEST(SeqKD, RepThresholdControlsReplacement) {
  const auto fixture = make_fixture("hash_v8");
  const auto corpus = small_corpus();
  const BeamConfig config{3, 12, 0.0};
  ComputeTrace t0, t1;
  const auto always = build_seq_kd_corpus(*fixture.teacher, corpus.sources, config,
                                          SeqRep{corpus.refs, token_similarity, 1.01}, t0);
  const auto never = build_seq_kd_corpus(*fixture.teacher, corpus.sources, config,
                                         SeqRep{corpus.refs, token_similarity, 0.0}, t1);
  for (std::size_t i = 0; i < always.size(); ++i) {
    EXPECT_TRUE(always[i].from_reference);
    EXPECT_EQ(always[i].target, corpus.refs[i]);
    EXPECT_FALSE(never[i].from_reference);
  }
  // Replacement changes targets but not decoding cost.
  EXPECT_EQ(t0.teacher_token_steps(), t1.teacher_token_steps());
}

TEST(SeqKD, MissingReferences) {
  const auto fixture = make_fixture("hash_v8");
  const auto corpus = small_corpus();
  std::vector<Sentence> refs(corpus.refs.begin(), corpus.refs.end() - 1);
  ComputeTrace trace;
  EXPECT_KDLCA_ERROR(build_seq_kd_corpus(*fixture.teacher, corpus.sources, {2, 8, 0.0},
                                         SeqInter{refs}, trace),
                     ErrorCode::MissingReferences);
}

TEST(SeqKD, WorkerCountDoesNotChangeOutput) {
  const auto fixture = make_fixture("hash_v8");
  const auto corpus = small_corpus(23);
  const BeamConfig config{4, 12, 0.5};
  ComputeTrace base_trace;
  const auto base = build_seq_kd_corpus(*fixture.teacher, corpus.sources, config,
                                        SeqInter{corpus.refs}, base_trace, 1);
  for (std::size_t workers : {2U, 3U, 8U, 64U}) {
    ComputeTrace trace;
    const auto got = build_seq_kd_corpus(*fixture.teacher, corpus.sources, config,
                                         SeqInter{corpus.refs}, trace, workers);
    ASSERT_EQ(got.size(), base.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].source, base[i].source);
      EXPECT_EQ(got[i].target, base[i].target);
      EXPECT_EQ(got[i].completed, base[i].completed);
    }
    EXPECT_EQ(trace.teacher_encoder_steps(), base_trace.teacher_encoder_steps());
    EXPECT_EQ(trace.teacher_decoder_steps(), base_trace.teacher_decoder_steps());
  }
}

TEST(SeqKD, CorpusRoundTrip) {
  const auto fixture = make_fixture("hash_v8");
  const auto corpus = small_corpus();
  ComputeTrace trace;
  const auto synthetic = build_seq_kd_corpus(*fixture.teacher, corpus.sources, {3, 12, 0.0},
                                             PlainSeqKD{}, trace);
  std::stringstream buffer;
  write_corpus(buffer, synthetic);
  const auto back = read_corpus(buffer);
  ASSERT_EQ(back.size(), synthetic.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].source, synthetic[i].source);
    EXPECT_EQ(back[i].target, synthetic[i].target);
  }
}

TEST(SeqKD, ReadCorpusErrors) {
  std::istringstream no_tab("1 2 3\n");
  EXPECT_KDLCA_ERROR(read_corpus(no_tab), ErrorCode::ParseError);
  std::istringstream bad_token("1 x\t2\n");
  EXPECT_KDLCA_ERROR(read_corpus(bad_token), ErrorCode::ParseError);
}
