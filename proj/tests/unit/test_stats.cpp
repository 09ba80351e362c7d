#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "loadcorr/stats.hpp"
#include "oracles/permutation.hpp"
#include "oracles/t_quadrature.hpp"

using namespace loadcorr::stats;

namespace {

using Vec = std::vector<double>;

template <typename F>
void expect_errc(F f, StatsErrc code) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const StatsError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Pearson, Examples) {
  const Vec x{1, 2, 3, 4, 5};
  Vec y(5);
  for (int i = 0; i < 5; ++i) y[i] = 2 * x[i] + 3;
  const auto perfect = pearson(x, y);
  EXPECT_DOUBLE_EQ(perfect.r, 1.0);
  EXPECT_EQ(perfect.p, 0.0);
  EXPECT_EQ(perfect.n, 5u);
  EXPECT_DOUBLE_EQ(pearson(Vec{1, 2, 3}, Vec{6, 4, 2}).r, -1.0);

  const Vec y2{2, 1, 4, 3, 5};
  const auto res = pearson(x, y2);
  const auto ref = oracle::pearson(x, y2);
  EXPECT_NEAR(res.r, ref.r, 1e-10);
  EXPECT_NEAR(res.p, ref.p, 1e-10);
}

TEST(Pearson, Errors) {
  expect_errc([] { pearson(Vec{1, 2}, Vec{2, 1}); }, StatsErrc::TooFewSamples);
  expect_errc([] { pearson(Vec{1, 1, 1}, Vec{1, 2, 3}); }, StatsErrc::ZeroVariance);
  expect_errc([] { pearson(Vec{1, 2, 3}, Vec{1, 2}); }, StatsErrc::LengthMismatch);
}

TEST(Pearson, MatchesQuadratureOracle) {
  std::mt19937_64 g(17);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 25;
    Vec x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = d(g);
      y[i] = 0.4 * x[i] + d(g);
    }
    const auto res = pearson(x, y);
    const auto ref = oracle::pearson(x, y);
    EXPECT_NEAR(res.r, ref.r, 1e-12);
    EXPECT_NEAR(res.p, ref.p, 1e-8) << "n=" << n;
  }
}

TEST(Pearson, SymmetryAndAffineMaps) {
  std::mt19937_64 g(23);
  std::normal_distribution<double> d;
  Vec x(30), y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    x[i] = d(g);
    y[i] = x[i] + d(g);
  }
  const double r = pearson(x, y).r;
  EXPECT_NEAR(pearson(y, x).r, r, 1e-14);
  Vec mapped(x), flipped(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    mapped[i] = 7.5 * x[i] - 2;
    flipped[i] = -3 * x[i];
  }
  EXPECT_NEAR(pearson(mapped, y).r, r, 1e-12);
  EXPECT_NEAR(pearson(flipped, y).r, -r, 1e-12);
}

TEST(TTest, Examples) {
  const Vec a{1.0, 2.5, 3.0, 4.2};
  const auto same = two_sample_ttest(a, a);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_DOUBLE_EQ(same.p, 1.0);
  EXPECT_EQ(same.df, 6.0);

  const Vec lo{0.9, 1.0, 1.1}, hi{9.9, 10.0, 10.1};
  const auto far = two_sample_ttest(lo, hi);
  EXPECT_LT(far.p, 1e-6);
  // Smallest attainable permutation p with 3 + 3 is 2/20.
  EXPECT_DOUBLE_EQ(oracle::permutation_p(lo, hi), 0.1);

  expect_errc([] { two_sample_ttest(Vec{1, 1, 1}, Vec{1, 1, 1}); }, StatsErrc::ZeroPooledVariance);
  expect_errc([] { two_sample_ttest(Vec{1}, Vec{1, 2}); }, StatsErrc::TooFewSamples);
}

TEST(TTest, StudentStatisticByHand) {
  const Vec a{1, 2, 3}, b{4, 5, 6, 7};
  // pooled s^2 = (2 + 5) / 5; t = (2 - 5.5) / sqrt(1.4 (1/3 + 1/4))
  const double t = -3.5 / std::sqrt(1.4 * (1.0 / 3 + 1.0 / 4));
  const auto res = two_sample_ttest(a, b);
  EXPECT_NEAR(res.t, t, 1e-12);
  EXPECT_EQ(res.df, 5.0);
  EXPECT_NEAR(res.p, oracle::t_two_tailed(t, 5), 1e-9);
}

TEST(TTest, WelchStatisticByHand) {
  const Vec a{1, 2, 3}, b{4, 6, 8, 10};
  const double va = 1.0 / 3, vb = (20.0 / 3) / 4;
  const double t = (2 - 7) / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) / (va * va / 2 + vb * vb / 3);
  const auto res = two_sample_ttest(a, b, false);
  EXPECT_NEAR(res.t, t, 1e-12);
  EXPECT_NEAR(res.df, df, 1e-12);
  EXPECT_NEAR(res.p, oracle::t_two_tailed(t, df), 1e-9);
}

TEST(TTest, AgreesWithPermutationOracle) {
  // The permutation p lives on a lattice of step 1/C(16, 8), and the two
  // tests are different procedures, so single draws can differ by a few
  // hundredths; the bulk of the distribution agrees within 0.02.
  std::mt19937_64 g(7);
  std::normal_distribution<double> d;
  std::vector<double> gaps;
  for (int trial = 0; trial < 200; ++trial) {
    Vec a(8), b(8);
    const double shift = 0.15 * (trial % 12);
    for (auto& x : a) x = d(g);
    for (auto& x : b) x = d(g) + shift;
    gaps.push_back(std::abs(two_sample_ttest(a, b).p - oracle::permutation_p(a, b)));
  }
  std::sort(gaps.begin(), gaps.end());
  EXPECT_LT(gaps[gaps.size() / 2], 0.01);
  EXPECT_LT(gaps[gaps.size() * 95 / 100], 0.02);
  EXPECT_LT(gaps.back(), 0.1);
}

TEST(TCdf, Properties) {
  for (double df : {1.0, 2.5, 10.0, 1000.0}) EXPECT_EQ(t_cdf(0.0, df), 0.5);
  EXPECT_DOUBLE_EQ(t_cdf(std::numeric_limits<double>::infinity(), 4), 1.0);
  EXPECT_NEAR(t_two_tailed_p(2.2281, 10), 0.05, 1e-4);
  EXPECT_NEAR(t_two_tailed_p(-2.2281, 10), 0.05, 1e-4);
  for (double df : {1.0, 3.0, 30.0}) {
    for (double t : {0.1, 1.0, 4.0, 25.0}) EXPECT_NEAR(t_cdf(-t, df) + t_cdf(t, df), 1.0, 1e-12);
  }
  expect_errc([] { t_cdf(1.0, 0.0); }, StatsErrc::BadDf);
}

TEST(TCdf, MatchesQuadrature) {
  for (double df : {1.0, 2.0, 5.0, 17.0, 100.0, 1000.0}) {
    for (double t : {-50.0, -7.0, -1.3, 0.2, 0.9, 2.0, 3.5, 12.0, 50.0}) {
      EXPECT_NEAR(t_cdf(t, df), oracle::t_cdf(t, df), 1e-10) << "t=" << t << " df=" << df;
    }
  }
}

TEST(IncompleteBeta, Closed) {
  EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-14);
  EXPECT_NEAR(incomplete_beta(2, 1, 0.5), 0.25, 1e-14);
  EXPECT_NEAR(incomplete_beta(1, 3, 0.2), 1 - std::pow(0.8, 3), 1e-14);
  EXPECT_EQ(incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2, 3, 1.0), 1.0);
}

TEST(Classify, Thresholds) {
  EXPECT_EQ(classify(-0.5199), StrengthClass::StrongNegative);
  EXPECT_EQ(classify(-0.4505), StrengthClass::Weak);
  EXPECT_EQ(classify(-0.5), StrengthClass::StrongNegative);
  EXPECT_EQ(classify(0.5), StrengthClass::StrongPositive);
  EXPECT_EQ(classify(0.0), StrengthClass::Weak);
  EXPECT_FALSE(is_significant(0.05));
  EXPECT_TRUE(is_significant(0.0499));
  expect_errc([] { classify(1.5); }, StatsErrc::OutOfRange);
  expect_errc([] { is_significant(-0.1); }, StatsErrc::OutOfRange);
}
