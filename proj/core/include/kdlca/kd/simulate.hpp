// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale KD runs over toy scorers that count teacher and student token
// steps and turn them into measurement records.
//
// Counting conventions:
//   no KD      student trains E epochs: E * sum(|x| + |y|) student steps, phase train
//   word-level teacher forward + student step per token per epoch,
//              E * sum(|x| + |y|) each, phase distill
//   sequence   teacher beam decode once per source (|x| encoder steps plus B
//              decoder steps per expansion), then E epochs of student steps
//              over the synthetic corpus, phase distill
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kdlca/kd/losses.hpp"
#include "kdlca/kd/seq_kd.hpp"
#include "kdlca/kd/trace.hpp"

namespace kdlca::kd {

enum class KdMethod { None, WordKD, SelKD, TieKD, SeqKD, SeqInter, SeqRep };

std::string_view to_string(KdMethod method) noexcept;
KdMethod parse_kd_method(std::string_view text);

struct CorpusSpec {
  std::size_t sentences = 16;
  std::size_t min_len = 3;
  std::size_t max_len = 8;
  std::uint64_t seed = 0;
};

struct KdPlan {
  std::string system = "student";
  std::string fixture = "hash_v8";
  KdMethod method = KdMethod::WordKD;
  BeamConfig beam{5, 16, 0.0};
  double alpha = 0.5;
  std::size_t epochs = 1;
  double selection_fraction = 0.5;
  double rep_threshold = 0.5;
  CorpusSpec corpus;
  std::size_t workers = 1;
  std::string device_id = "gpu";
  StepEnergy energy{1e-6, 2e-7};
  StepThroughput throughput{1e6, 4e6};
};

struct ParallelCorpus {
  std::vector<Sentence> sources;
  std::vector<Sentence> refs;

  [[nodiscard]] std::uint64_t token_count() const noexcept;
};

/// Random token sentences over ids [1, vocab) so id 0 stays free for end-of-sequence.
ParallelCorpus make_corpus(const CorpusSpec& spec, std::size_t vocab_size);

struct SimulationResult {
  ComputeTrace trace;
  std::vector<MeasurementRecord> records;
  SyntheticCorpus synthetic;  ///< sequence-level methods only
  /// Word-level loss per supervised token (sequence methods: CE on synthetic targets).
  double mean_loss_per_token = 0.0;
  std::uint64_t corpus_tokens = 0;
};

SimulationResult simulate(const KdPlan& plan);

/// Parses a kdplan document with "schema_version": 1; throws
/// SchemaVersionMismatch, ParseError or UnknownFixture.
KdPlan parse_plan(const nlohmann::json& doc);
nlohmann::json to_json(const SimulationResult& result, const KdPlan& plan);

}  // namespace kdlca::kd
