// SPDX-License-Identifier: Apache-2.0
#include "kdlca/kd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca::kd {

namespace {

double floored_log(double p) { return std::log(std::max(p, kProbabilityFloor)); }

void require_same_vocab(const TokenDistribution& a, const TokenDistribution& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("distributions over {} and {} tokens", a.size(), b.size()));
  }
}

}  // namespace

double cross_entropy(TokenId target, const TokenDistribution& pred) {
  if (target >= pred.size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("target {} outside vocabulary of size {}", target, pred.size()));
  }
  return -floored_log(pred[target]);
}

double cross_entropy(const TokenDistribution& target, const TokenDistribution& pred) {
  require_same_vocab(target, pred);
  if (!target.is_one_hot()) {
    throw Error(ErrorCode::InvalidArgument, "cross-entropy target must be one-hot");
  }
  return cross_entropy(target.argmax(), pred);
}

double kl_divergence(const TokenDistribution& teacher, const TokenDistribution& student) {
  require_same_vocab(teacher, student);
  double sum = 0.0;
  for (std::size_t v = 0; v < teacher.size(); ++v) {
    const double t = teacher[v];
    if (t == 0.0) continue;
    sum += t * (std::log(t) - floored_log(student[v]));
  }
  // Gibbs: only rounding can push this below zero.
  return std::max(sum, 0.0);
}

double word_kd_loss(std::span<const TokenId> refs, std::span<const TokenDistribution> teacher,
                    std::span<const TokenDistribution> student, double alpha,
                    const TokenMask& mask) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("alpha {} not in [0, 1]", alpha));
  }
  if (teacher.size() != refs.size() || student.size() != refs.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("refs/teacher/student lengths {}/{}/{}", refs.size(), teacher.size(),
                            student.size()));
  }
  if (!mask.empty() && mask.size() != refs.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("mask length {} vs sequence length {}", mask.size(), refs.size()));
  }
  double ce = 0.0;
  double kd = 0.0;
  for (std::size_t t = 0; t < refs.size(); ++t) {
    ce += cross_entropy(refs[t], student[t]);
    if (mask.empty() || mask[t]) kd += kl_divergence(teacher[t], student[t]);
  }
  return (1.0 - alpha) * ce + alpha * kd;
}

SelectionStrategy SelectionStrategy::hardest(double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("selection fraction {} not in (0, 1]", r));
  }
  return {Kind::HardestFraction, r};
}

SelectionStrategy SelectionStrategy::teacher_confident(double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("selection fraction {} not in (0, 1]", r));
  }
  return {Kind::TeacherTop1Margin, r};
}

TokenMask selection_mask(const SelectionStrategy& strategy, std::span<const TokenId> refs,
                         std::span<const TokenDistribution> teacher,
                         std::span<const TokenDistribution> student) {
  const std::size_t n = refs.size();
  if (strategy.kind == SelectionStrategy::Kind::All) return TokenMask(n, true);
  if (!(strategy.fraction > 0.0 && strategy.fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "selection fraction must lie in (0, 1]");
  }

  std::vector<double> key(n);
  if (strategy.kind == SelectionStrategy::Kind::HardestFraction) {
    if (student.size() != n) throw Error(ErrorCode::LengthMismatch, "student length mismatch");
    for (std::size_t t = 0; t < n; ++t) key[t] = cross_entropy(refs[t], student[t]);
  } else {
    if (teacher.size() != n) throw Error(ErrorCode::LengthMismatch, "teacher length mismatch");
    for (std::size_t t = 0; t < n; ++t) key[t] = teacher[t][teacher[t].argmax()];
  }

  const auto keep = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(strategy.fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&key](std::size_t l, std::size_t r) { return key[l] > key[r]; });
  TokenMask mask(n, false);
  for (std::size_t i = 0; i < keep; ++i) mask[order[i]] = true;
  return mask;
}

}  // namespace kdlca::kd
