// SPDX-License-Identifier: Apache-2.0
#include "kdlca/kd/beam_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kdlca/error.hpp"

namespace kdlca::kd {

double Hypothesis::score(double length_penalty) const noexcept {
  if (length_penalty == 0.0 || tokens.empty()) return log_prob;
  return log_prob / std::pow(static_cast<double>(tokens.size()), length_penalty);
}

bool better_hypothesis(const Hypothesis& l, const Hypothesis& r, double length_penalty) noexcept {
  const double ls = l.score(length_penalty);
  const double rs = r.score(length_penalty);
  if (ls != rs) return ls > rs;
  return l.tokens < r.tokens;
}

BeamResult beam_search(const Scorer& scorer, std::span<const TokenId> source,
                       const BeamConfig& config, ComputeTrace& trace) {
  if (config.beam < 1 || config.max_len < 1) {
    throw Error(ErrorCode::InvalidArgument, "beam search needs beam >= 1 and max_len >= 1");
  }
  const std::optional<TokenId> eos = scorer.eos();
  const std::size_t vocab = scorer.vocab_size();

  trace.add_teacher_encoder(source.size());

  std::vector<Hypothesis> active{Hypothesis{}};
  std::vector<Hypothesis> finished;
  std::vector<Hypothesis> expansions;
  const auto by_log_prob = [](const Hypothesis& l, const Hypothesis& r) {
    return better_hypothesis(l, r, 0.0);
  };

  for (std::size_t step = 0; step < config.max_len && !active.empty(); ++step) {
    if (config.length_penalty == 0.0 && !finished.empty()) {
      // Log-probabilities only fall as hypotheses grow, so nothing active can
      // overtake a finished hypothesis that is already strictly ahead.
      double best_finished = -std::numeric_limits<double>::infinity();
      for (const auto& h : finished) best_finished = std::max(best_finished, h.log_prob);
      double best_active = -std::numeric_limits<double>::infinity();
      for (const auto& h : active) best_active = std::max(best_active, h.log_prob);
      if (best_finished > best_active) break;
    }

    trace.add_teacher_decoder(config.beam);
    expansions.clear();
    for (const auto& h : active) {
      const TokenDistribution dist = scorer.next(source, h.tokens);
      for (std::size_t v = 0; v < vocab; ++v) {
        if (dist[v] <= 0.0) continue;
        Hypothesis child;
        child.tokens.reserve(h.tokens.size() + 1);
        child.tokens = h.tokens;
        child.tokens.push_back(static_cast<TokenId>(v));
        child.log_prob = h.log_prob + std::log(dist[v]);
        child.finished = eos && static_cast<TokenId>(v) == *eos;
        expansions.push_back(std::move(child));
      }
    }
    const std::size_t keep = std::min(config.beam, expansions.size());
    std::partial_sort(expansions.begin(), expansions.begin() + static_cast<std::ptrdiff_t>(keep),
                      expansions.end(), by_log_prob);
    active.clear();
    for (std::size_t i = 0; i < keep; ++i) {
      (expansions[i].finished ? finished : active).push_back(std::move(expansions[i]));
    }
  }

  const auto by_score = [&config](const Hypothesis& l, const Hypothesis& r) {
    return better_hypothesis(l, r, config.length_penalty);
  };
  BeamResult result;
  result.completed = !finished.empty();
  const auto& pool = result.completed ? finished : active;
  if (pool.empty()) {
    // Every expansion had probability zero.
    result.best = Hypothesis{};
    return result;
  }
  result.best = *std::min_element(pool.begin(), pool.end(), by_score);

  result.candidates = finished;
  result.candidates.insert(result.candidates.end(), active.begin(), active.end());
  std::sort(result.candidates.begin(), result.candidates.end(), by_score);
  if (result.candidates.size() > config.beam) result.candidates.resize(config.beam);
  return result;
}

Hypothesis greedy_decode(const Scorer& scorer, std::span<const TokenId> source,
                         std::size_t max_len) {
  const std::optional<TokenId> eos = scorer.eos();
  Hypothesis h;
  for (std::size_t step = 0; step < max_len; ++step) {
    const TokenDistribution dist = scorer.next(source, h.tokens);
    const TokenId token = dist.argmax();
    h.tokens.push_back(token);
    h.log_prob += std::log(dist[token]);
    if (eos && token == *eos) {
      h.finished = true;
      break;
    }
  }
  return h;
}

}  // namespace kdlca::kd
