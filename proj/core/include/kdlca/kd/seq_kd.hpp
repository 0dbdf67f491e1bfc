// SPDX-License-Identifier: Apache-2.0
//
// Sequence-level distillation corpora built from teacher beam search.
#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "kdlca/kd/beam_search.hpp"

namespace kdlca::kd {

using Sentence = std::vector<TokenId>;
using Similarity = std::function<double(std::span<const TokenId>, std::span<const TokenId>)>;

/// 1 - Levenshtein(a, b) / max(|a|, |b|); 1 for two empty sequences.
double token_similarity(std::span<const TokenId> a, std::span<const TokenId> b);

struct PlainSeqKD {};

/// Keep, among the final beam, the candidate most similar to the reference.
struct SeqInter {
  std::vector<Sentence> refs;
  Similarity sim = token_similarity;
};

/// Replace the beam output by the reference when its quality is below threshold.
struct SeqRep {
  std::vector<Sentence> refs;
  Similarity quality = token_similarity;
  double threshold = 0.5;
};

using CorpusPolicy = std::variant<PlainSeqKD, SeqInter, SeqRep>;

struct SyntheticPair {
  Sentence source;
  Sentence target;  ///< end-of-sequence stripped
  bool from_reference = false;
  bool completed = true;
};

using SyntheticCorpus = std::vector<SyntheticPair>;

/// Decodes every source with the teacher. Sources are split over `workers`
/// threads with private traces merged afterwards; output order and counts do
/// not depend on the worker count. Throws MissingReferences when a reference
/// policy lacks one reference per source.
SyntheticCorpus build_seq_kd_corpus(const Scorer& teacher, std::span<const Sentence> sources,
                                    const BeamConfig& config, const CorpusPolicy& policy,
                                    ComputeTrace& trace, std::size_t workers = 1);

/// One pair per line: space-separated source ids, a tab, target ids.
void write_corpus(std::ostream& out, const SyntheticCorpus& corpus);
SyntheticCorpus read_corpus(std::istream& in);

}  // namespace kdlca::kd
