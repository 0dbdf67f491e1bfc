// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "kdlca/kd/losses.hpp"
#include "kdlca/random.hpp"

using namespace kdlca;
using namespace kdlca::kd;

namespace {

TokenDistribution random_dist(std::mt19937_64& rng, std::size_t v) {
  std::vector<double> logits(v);
  for (auto& l : logits) l = (draw_unit(rng) - 0.5) * 8.0;
  return TokenDistribution::from_logits(logits);
}

struct Sequence {
  std::vector<TokenId> refs;
  std::vector<TokenDistribution> teacher;
  std::vector<TokenDistribution> student;
};

Sequence random_sequence(std::uint64_t seed, std::size_t len, std::size_t v = 6) {
  std::mt19937_64 rng(seed);
  Sequence s;
  for (std::size_t t = 0; t < len; ++t) {
    s.refs.push_back(static_cast<TokenId>(draw_index(rng, v)));
    s.teacher.push_back(random_dist(rng, v));
    s.student.push_back(random_dist(rng, v));
  }
  return s;
}

}  // namespace

TEST(Losses, CrossEntropyOfTarget) {
  const auto p = TokenDistribution::from_probs({0.25, 0.5, 0.25});
  EXPECT_DOUBLE_EQ(cross_entropy(1, p), std::log(2.0));
  EXPECT_DOUBLE_EQ(cross_entropy(TokenDistribution::one_hot(3, 1), p), std::log(2.0));
}

TEST(Losses, ZeroProbabilityIsFloored) {
  const auto p = TokenDistribution::from_probs({1.0, 0.0});
  EXPECT_NEAR(cross_entropy(1, p), -std::log(kProbabilityFloor), 1e-9);
}

TEST(Losses, AlphaZeroIsCrossEntropy) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_sequence(seed, 7);
    double ce = 0.0;
    for (std::size_t t = 0; t < s.refs.size(); ++t) ce += cross_entropy(s.refs[t], s.student[t]);
    EXPECT_NEAR(word_kd_loss(s.refs, s.teacher, s.student, 0.0), ce, 1e-12 * ce);
  }
}

TEST(Losses, OneHotTeacherKlEqualsCrossEntropy) {
  const auto s = random_sequence(3, 10);
  for (std::size_t t = 0; t < s.refs.size(); ++t) {
    const auto teacher = TokenDistribution::one_hot(6, s.refs[t]);
    EXPECT_NEAR(kl_divergence(teacher, s.student[t]), cross_entropy(s.refs[t], s.student[t]),
                1e-12);
  }
}

TEST(Losses, KlNonnegativeAndZeroOnSelf) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = random_sequence(seed, 4);
    for (std::size_t t = 0; t < 4; ++t) {
      EXPECT_GE(kl_divergence(s.teacher[t], s.student[t]), 0.0);
      EXPECT_NEAR(kl_divergence(s.teacher[t], s.teacher[t]), 0.0, 1e-15);
    }
  }
}

TEST(Losses, AlphaOneOnlyMaskedKl) {
  const auto s = random_sequence(9, 5);
  const TokenMask mask{true, false, true, false, false};
  const double want = kl_divergence(s.teacher[0], s.student[0]) +
                      kl_divergence(s.teacher[2], s.student[2]);
  EXPECT_NEAR(word_kd_loss(s.refs, s.teacher, s.student, 1.0, mask), want, 1e-12);
}

TEST(Losses, MixtureIsLinearInAlpha) {
  const auto s = random_sequence(11, 6);
  const double l0 = word_kd_loss(s.refs, s.teacher, s.student, 0.0);
  const double l1 = word_kd_loss(s.refs, s.teacher, s.student, 1.0);
  EXPECT_NEAR(word_kd_loss(s.refs, s.teacher, s.student, 0.3), 0.7 * l0 + 0.3 * l1, 1e-12);
}

TEST(Losses, LengthAndAlphaErrors) {
  const auto s = random_sequence(1, 3);
  const std::vector<TokenDistribution> short_student(s.student.begin(), s.student.begin() + 2);
  EXPECT_KDLCA_ERROR(word_kd_loss(s.refs, s.teacher, short_student, 0.5), ErrorCode::LengthMismatch);
  EXPECT_KDLCA_ERROR(word_kd_loss(s.refs, s.teacher, s.student, 0.5, TokenMask{true}),
                     ErrorCode::LengthMismatch);
  EXPECT_KDLCA_ERROR(word_kd_loss(s.refs, s.teacher, s.student, 1.5), ErrorCode::InvalidArgument);
}

TEST(Selection, AllSelectsEverything) {
  const auto s = random_sequence(2, 5);
  EXPECT_EQ(selection_mask(SelectionStrategy::all(), s.refs, s.teacher, s.student), TokenMask(5, true));
}

TEST(Selection, HardestKeepsHighestStudentLoss) {
  const std::vector<TokenId> refs{0, 0, 0, 0};
  const std::vector<TokenDistribution> student{
      TokenDistribution::from_probs({0.9, 0.1}), TokenDistribution::from_probs({0.2, 0.8}),
      TokenDistribution::from_probs({0.5, 0.5}), TokenDistribution::from_probs({0.1, 0.9})};
  const auto mask = selection_mask(SelectionStrategy::hardest(0.5), refs, student, student);
  EXPECT_EQ(mask, (TokenMask{false, true, false, true}));
}

TEST(Selection, TeacherConfidentKeepsCeilFraction) {
  const std::vector<TokenId> refs{0, 0, 0};
  const std::vector<TokenDistribution> teacher{
      TokenDistribution::from_probs({0.6, 0.4}), TokenDistribution::from_probs({0.6, 0.4}),
      TokenDistribution::from_probs({0.99, 0.01})};
  // ceil(0.5 * 3) = 2; equal confidence keeps the earlier position.
  EXPECT_EQ(selection_mask(SelectionStrategy::teacher_confident(0.5), refs, teacher, teacher),
            (TokenMask{true, false, true}));
  EXPECT_KDLCA_ERROR(SelectionStrategy::hardest(0.0), ErrorCode::InvalidArgument);
}
