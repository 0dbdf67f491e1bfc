// SPDX-License-Identifier: Apache-2.0
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "kdlca/bootstrap.hpp"
#include "kdlca/random.hpp"

using namespace kdlca;

TEST(Bootstrap, PercentileRanksForDefaults) {
  EXPECT_EQ(percentile_ranks(1000, 0.95), (std::pair<std::size_t, std::size_t>{25, 976}));
  EXPECT_EQ(percentile_ranks(1, 0.95), (std::pair<std::size_t, std::size_t>{1, 1}));
  EXPECT_EQ(percentile_ranks(100, 0.9), (std::pair<std::size_t, std::size_t>{5, 96}));
  EXPECT_KDLCA_ERROR(percentile_ranks(0, 0.95), ErrorCode::InvalidArgument);
  EXPECT_KDLCA_ERROR(percentile_ranks(10, 1.0), ErrorCode::InvalidArgument);
}

TEST(Bootstrap, ResamplesAreSeededAndInRange) {
  const auto a = resample_indices(50, 20, 9);
  EXPECT_EQ(a, resample_indices(50, 20, 9));
  EXPECT_NE(a, resample_indices(50, 20, 10));
  for (const auto& draw : a) {
    ASSERT_EQ(draw.size(), 50u);
    for (auto i : draw) EXPECT_LT(i, 50u);
  }
}

TEST(Bootstrap, CiMatchesSortedResampleMeans) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.8, 0.1);
  std::vector<double> scores(40);
  for (auto& s : scores) s = n(rng);
  const auto draws = resample_indices(scores.size(), 1000, 77);
  std::vector<double> means;
  for (const auto& d : draws) {
    double sum = 0.0;
    for (auto i : d) sum += scores[i];
    means.push_back(sum / 40.0);
  }
  std::sort(means.begin(), means.end());
  const auto ci = paired_bootstrap_ci({scores}, 1000, 0.95, 77);
  EXPECT_EQ(ci[0].lower, means[24]);
  EXPECT_EQ(ci[0].upper, means[975]);
}

TEST(Bootstrap, IdenticalRowsGetIdenticalIntervals) {
  std::vector<double> s{0.1, 0.5, 0.7, 0.2, 0.9, 0.4};
  const auto ci = paired_bootstrap_ci({s, s, s}, 1000, 0.95, 3);
  EXPECT_EQ(ci[0], ci[1]);
  EXPECT_EQ(ci[1], ci[2]);
}

TEST(Bootstrap, ZeroVarianceGivesZeroWidth) {
  const auto ci = paired_bootstrap_ci({std::vector<double>(30, 0.83)}, 1000, 0.95, 3);
  EXPECT_EQ(ci[0].lower, ci[0].upper);
}

TEST(Bootstrap, RaggedMatrixRejected) {
  EXPECT_KDLCA_ERROR(paired_bootstrap_ci({{1, 2}, {1}}, 10, 0.95, 1), ErrorCode::RaggedMatrix);
  EXPECT_KDLCA_ERROR(significant_improvement(std::vector<double>{1, 2},
                                             std::vector<double>{1}, 10, 1),
                     ErrorCode::RaggedMatrix);
}

TEST(Bootstrap, SignificanceNeedsSeparation) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 0.05);
  std::vector<double> base(200), better(200), same(200);
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = 0.7 + n(rng);
    better[i] = base[i] + 0.1 + n(rng) * 0.1;
    same[i] = base[i];
  }
  EXPECT_TRUE(significant_improvement(better, base, 1000, 5));
  EXPECT_FALSE(significant_improvement(base, better, 1000, 5));
  EXPECT_FALSE(significant_improvement(same, base, 1000, 5));
}

TEST(Bootstrap, CoverageOnNormalData) {
  int covered = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(123, std::to_string(t)));
    std::normal_distribution<double> n(0.5, 0.2);
    std::vector<double> s(200);
    for (auto& v : s) v = n(rng);
    const auto ci = paired_bootstrap_ci({s}, 1000, 0.95, static_cast<std::uint64_t>(t));
    if (ci[0].lower <= 0.5 && 0.5 <= ci[0].upper) ++covered;
  }
  EXPECT_GE(covered, static_cast<int>(0.88 * trials));
}
