// SPDX-License-Identifier: Apache-2.0
#include "kdlca/kd/simulate.hpp"

#include <random>

#include <fmt/format.h>

#include "../json_util.hpp"
#include "kdlca/error.hpp"
#include "kdlca/kd/fixtures.hpp"
#include "kdlca/random.hpp"

namespace kdlca::kd {

std::string_view to_string(KdMethod method) noexcept {
  switch (method) {
    case KdMethod::None: return "none";
    case KdMethod::WordKD: return "word-kd";
    case KdMethod::SelKD: return "sel-kd";
    case KdMethod::TieKD: return "tie-kd";
    case KdMethod::SeqKD: return "seq-kd";
    case KdMethod::SeqInter: return "seq-inter";
    case KdMethod::SeqRep: return "seq-rep";
  }
  return "none";
}

KdMethod parse_kd_method(std::string_view text) {
  for (KdMethod m : {KdMethod::None, KdMethod::WordKD, KdMethod::SelKD, KdMethod::TieKD,
                     KdMethod::SeqKD, KdMethod::SeqInter, KdMethod::SeqRep}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown KD method '{}'", text));
}

std::uint64_t ParallelCorpus::token_count() const noexcept {
  std::uint64_t n = 0;
  for (const auto& s : sources) n += s.size();
  for (const auto& r : refs) n += r.size();
  return n;
}

ParallelCorpus make_corpus(const CorpusSpec& spec, std::size_t vocab_size) {
  if (spec.min_len < 1 || spec.max_len < spec.min_len || vocab_size < 2) {
    throw Error(ErrorCode::InvalidArgument, "corpus needs 1 <= min_len <= max_len and vocab >= 2");
  }
  std::mt19937_64 engine(derive_seed(spec.seed, "corpus"));
  const auto sentence = [&] {
    const std::size_t len = spec.min_len + draw_index(engine, spec.max_len - spec.min_len + 1);
    Sentence s(len);
    for (auto& t : s) t = static_cast<TokenId>(1 + draw_index(engine, vocab_size - 1));
    return s;
  };
  ParallelCorpus corpus;
  for (std::size_t i = 0; i < spec.sentences; ++i) {
    corpus.sources.push_back(sentence());
    corpus.refs.push_back(sentence());
  }
  return corpus;
}

namespace {

std::uint64_t pair_tokens(const Sentence& x, const Sentence& y) { return x.size() + y.size(); }

// Distributions at each reference prefix.
std::vector<TokenDistribution> forced_dists(const Scorer& scorer, const Sentence& x,
                                            const Sentence& y) {
  std::vector<TokenDistribution> out;
  out.reserve(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    out.push_back(scorer.next(x, std::span<const TokenId>(y).first(t)));
  }
  return out;
}

SelectionStrategy strategy_for(const KdPlan& plan) {
  switch (plan.method) {
    case KdMethod::SelKD: return SelectionStrategy::hardest(plan.selection_fraction);
    case KdMethod::TieKD: return SelectionStrategy::teacher_confident(plan.selection_fraction);
    default: return SelectionStrategy::all();
  }
}

}  // namespace

SimulationResult simulate(const KdPlan& plan) {
  const FixturePair models = make_fixture(plan.fixture);
  const ParallelCorpus corpus = make_corpus(plan.corpus, models.teacher->vocab_size());
  const auto epochs = static_cast<std::uint64_t>(plan.epochs);

  SimulationResult result;
  result.corpus_tokens = corpus.token_count();
  std::uint64_t supervised_tokens = 0;
  double loss = 0.0;

  switch (plan.method) {
    case KdMethod::None: {
      result.trace = ComputeTrace(Phase::TeacherTrain);
      for (std::size_t i = 0; i < corpus.sources.size(); ++i) {
        const auto& x = corpus.sources[i];
        const auto& y = corpus.refs[i];
        result.trace.add_student(epochs * pair_tokens(x, y));
        const auto student = forced_dists(*models.student, x, y);
        loss += word_kd_loss(y, student, student, 0.0);
        supervised_tokens += y.size();
      }
      break;
    }
    case KdMethod::WordKD:
    case KdMethod::SelKD:
    case KdMethod::TieKD: {
      result.trace = ComputeTrace(Phase::Distill);
      const SelectionStrategy strategy = strategy_for(plan);
      for (std::size_t i = 0; i < corpus.sources.size(); ++i) {
        const auto& x = corpus.sources[i];
        const auto& y = corpus.refs[i];
        result.trace.add_teacher_encoder(epochs * x.size());
        result.trace.add_teacher_decoder(epochs * y.size());
        result.trace.add_student(epochs * pair_tokens(x, y));
        const auto teacher = forced_dists(*models.teacher, x, y);
        const auto student = forced_dists(*models.student, x, y);
        const TokenMask mask = selection_mask(strategy, y, teacher, student);
        loss += word_kd_loss(y, teacher, student, plan.alpha, mask);
        supervised_tokens += y.size();
      }
      break;
    }
    case KdMethod::SeqKD:
    case KdMethod::SeqInter:
    case KdMethod::SeqRep: {
      result.trace = ComputeTrace(Phase::Distill);
      CorpusPolicy policy = PlainSeqKD{};
      if (plan.method == KdMethod::SeqInter) policy = SeqInter{corpus.refs};
      if (plan.method == KdMethod::SeqRep) policy = SeqRep{corpus.refs, token_similarity,
                                                           plan.rep_threshold};
      result.synthetic = build_seq_kd_corpus(*models.teacher, corpus.sources, plan.beam, policy,
                                             result.trace, plan.workers);
      for (const auto& pair : result.synthetic) {
        result.trace.add_student(epochs * pair_tokens(pair.source, pair.target));
        const auto student = forced_dists(*models.student, pair.source, pair.target);
        loss += word_kd_loss(pair.target, student, student, 0.0);
        supervised_tokens += pair.target.size();
      }
      break;
    }
  }

  result.mean_loss_per_token =
      supervised_tokens == 0 ? 0.0 : loss / static_cast<double>(supervised_tokens);
  result.records = trace_to_records(result.trace, plan.energy, plan.device_id, plan.throughput,
                                    plan.system);
  return result;
}

KdPlan parse_plan(const nlohmann::json& doc) {
  using detail::field_or;
  using detail::optional_field;
  detail::require_schema_version(doc, "kdplan");

  KdPlan plan;
  plan.system = field_or<std::string>(doc, "system", "kdplan", plan.system);
  plan.fixture = field_or<std::string>(doc, "fixture", "kdplan", plan.fixture);
  make_fixture(plan.fixture);  // UnknownFixture before any work
  plan.method = parse_kd_method(detail::required_field<std::string>(doc, "method", "kdplan"));
  plan.beam.beam = field_or<std::size_t>(doc, "beam", "kdplan", plan.beam.beam);
  plan.beam.max_len = field_or<std::size_t>(doc, "max_len", "kdplan", plan.beam.max_len);
  plan.beam.length_penalty =
      field_or<double>(doc, "length_penalty", "kdplan", plan.beam.length_penalty);
  plan.alpha = field_or<double>(doc, "alpha", "kdplan", plan.alpha);
  plan.epochs = field_or<std::size_t>(doc, "epochs", "kdplan", plan.epochs);
  plan.selection_fraction =
      field_or<double>(doc, "selection_fraction", "kdplan", plan.selection_fraction);
  plan.rep_threshold = field_or<double>(doc, "rep_threshold", "kdplan", plan.rep_threshold);
  plan.workers = field_or<std::size_t>(doc, "workers", "kdplan", plan.workers);
  plan.device_id = field_or<std::string>(doc, "device_id", "kdplan", plan.device_id);

  if (const auto it = doc.find("corpus"); it != doc.end()) {
    plan.corpus.sentences = field_or<std::size_t>(*it, "sentences", "kdplan.corpus",
                                                  plan.corpus.sentences);
    plan.corpus.min_len = field_or<std::size_t>(*it, "min_len", "kdplan.corpus",
                                                plan.corpus.min_len);
    plan.corpus.max_len = field_or<std::size_t>(*it, "max_len", "kdplan.corpus",
                                                plan.corpus.max_len);
    plan.corpus.seed = field_or<std::uint64_t>(*it, "seed", "kdplan.corpus", plan.corpus.seed);
  }
  if (const auto it = doc.find("energy_per_step_kwh"); it != doc.end()) {
    plan.energy.teacher_kwh_per_step = field_or<double>(*it, "teacher", "kdplan.energy_per_step_kwh",
                                                        plan.energy.teacher_kwh_per_step);
    plan.energy.student_kwh_per_step = field_or<double>(*it, "student", "kdplan.energy_per_step_kwh",
                                                        plan.energy.student_kwh_per_step);
  }
  if (const auto it = doc.find("throughput_steps_per_hour"); it != doc.end()) {
    plan.throughput.teacher_steps_per_hour = field_or<double>(
        *it, "teacher", "kdplan.throughput_steps_per_hour", plan.throughput.teacher_steps_per_hour);
    plan.throughput.student_steps_per_hour = field_or<double>(
        *it, "student", "kdplan.throughput_steps_per_hour", plan.throughput.student_steps_per_hour);
  }
  if (plan.beam.beam < 1 || plan.beam.max_len < 1) {
    detail::parse_fail("kdplan", "beam and max_len must be >= 1");
  }
  if (!(plan.alpha >= 0.0 && plan.alpha <= 1.0)) detail::parse_fail("kdplan.alpha", "not in [0, 1]");
  if (!(plan.selection_fraction > 0.0 && plan.selection_fraction <= 1.0)) {
    detail::parse_fail("kdplan.selection_fraction", "not in (0, 1]");
  }
  return plan;
}

nlohmann::json to_json(const SimulationResult& result, const KdPlan& plan) {
  return {
      {"schema_version", detail::kSchemaVersion},
      {"system", plan.system},
      {"fixture", plan.fixture},
      {"method", to_string(plan.method)},
      {"beam", plan.beam.beam},
      {"epochs", plan.epochs},
      {"alpha", plan.alpha},
      {"phase", to_string(result.trace.phase())},
      {"teacher_encoder_steps", result.trace.teacher_encoder_steps()},
      {"teacher_decoder_steps", result.trace.teacher_decoder_steps()},
      {"teacher_token_steps", result.trace.teacher_token_steps()},
      {"student_token_steps", result.trace.student_token_steps()},
      {"corpus_tokens", result.corpus_tokens},
      {"synthetic_pairs", result.synthetic.size()},
      {"mean_loss_per_token", result.mean_loss_per_token},
      {"records", result.records.size()},
  };
}

}  // namespace kdlca::kd
