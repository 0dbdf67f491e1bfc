// SPDX-License-Identifier: Apache-2.0
#include "kdlca/kd/seq_kd.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca::kd {

double token_similarity(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  const double distance = static_cast<double>(prev[b.size()]);
  return 1.0 - distance / static_cast<double>(std::max(a.size(), b.size()));
}

namespace {

Sentence strip_eos(const Hypothesis& h, std::optional<TokenId> eos) {
  Sentence out = h.tokens;
  if (eos && h.finished && !out.empty() && out.back() == *eos) out.pop_back();
  return out;
}

const std::vector<Sentence>* references(const CorpusPolicy& policy) {
  if (const auto* p = std::get_if<SeqInter>(&policy)) return &p->refs;
  if (const auto* p = std::get_if<SeqRep>(&policy)) return &p->refs;
  return nullptr;
}

SyntheticPair decode_one(const Scorer& teacher, const Sentence& source, std::size_t index,
                         const BeamConfig& config, const CorpusPolicy& policy,
                         ComputeTrace& trace) {
  const BeamResult beam = beam_search(teacher, source, config, trace);
  const auto eos = teacher.eos();
  SyntheticPair pair;
  pair.source = source;
  pair.completed = beam.completed;

  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PlainSeqKD>) {
          pair.target = strip_eos(beam.best, eos);
        } else if constexpr (std::is_same_v<P, SeqInter>) {
          const Sentence& ref = p.refs[index];
          double best_sim = -std::numeric_limits<double>::infinity();
          for (const auto& candidate : beam.candidates) {
            Sentence tokens = strip_eos(candidate, eos);
            const double sim = p.sim(tokens, ref);
            if (sim > best_sim) {
              best_sim = sim;
              pair.target = std::move(tokens);
            }
          }
        } else {
          const Sentence& ref = p.refs[index];
          pair.target = strip_eos(beam.best, eos);
          if (p.quality(pair.target, ref) < p.threshold) {
            pair.target = ref;
            pair.from_reference = true;
          }
        }
      },
      policy);
  return pair;
}

}  // namespace

SyntheticCorpus build_seq_kd_corpus(const Scorer& teacher, std::span<const Sentence> sources,
                                    const BeamConfig& config, const CorpusPolicy& policy,
                                    ComputeTrace& trace, std::size_t workers) {
  if (const auto* refs = references(policy); refs != nullptr && refs->size() != sources.size()) {
    throw Error(ErrorCode::MissingReferences,
                fmt::format("{} references for {} sources", refs->size(), sources.size()));
  }
  SyntheticCorpus corpus(sources.size());
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(sources.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < sources.size(); ++i) {
      corpus[i] = decode_one(teacher, sources[i], i, config, policy, trace);
    }
    return corpus;
  }

  std::vector<ComputeTrace> traces(workers, ComputeTrace(trace.phase()));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < sources.size(); i += workers) {
            corpus[i] = decode_one(teacher, sources[i], i, config, policy, traces[w]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& t : traces) trace.merge(t);
  return corpus;
}

namespace {

void write_tokens(std::ostream& out, const Sentence& tokens) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out << ' ';
    out << tokens[i];
  }
}

Sentence read_tokens(const std::string& text, std::size_t line_no) {
  Sentence out;
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(word, &used);
      if (used != word.size()) throw std::invalid_argument(word);
      out.push_back(static_cast<TokenId>(value));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError,
                  fmt::format("corpus line {}: bad token '{}'", line_no, word));
    }
  }
  return out;
}

}  // namespace

void write_corpus(std::ostream& out, const SyntheticCorpus& corpus) {
  for (const auto& pair : corpus) {
    write_tokens(out, pair.source);
    out << '\t';
    write_tokens(out, pair.target);
    out << '\n';
  }
}

SyntheticCorpus read_corpus(std::istream& in) {
  SyntheticCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::ParseError, fmt::format("corpus line {}: missing tab", line_no));
    }
    SyntheticPair pair;
    pair.source = read_tokens(line.substr(0, tab), line_no);
    pair.target = read_tokens(line.substr(tab + 1), line_no);
    corpus.push_back(std::move(pair));
  }
  return corpus;
}

}  // namespace kdlca::kd
