#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "loadcorr/similarity.hpp"
#include "loadcorr/similarity_demo.hpp"
#include "loadcorr/timeseries.hpp"
#include "oracles/brute_dtw.hpp"

using namespace loadcorr;
using namespace loadcorr::similarity;

namespace {

using Vec = std::vector<double>;

template <typename F>
void expect_errc(F f, SimilarityErrc code) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const SimilarityError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

Vec random_vec(std::mt19937_64& g, std::size_t n, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (auto& x : v) x = d(g);
  return v;
}

Vec sine_values(double freq, double span, double dt) {
  const auto s = synth_sine(1.0, freq, 0.3, span, dt);
  return {s.values().begin(), s.values().end()};
}

}  // namespace

TEST(Euclidean, Examples) {
  EXPECT_EQ(euclidean(Vec{1, 2, 3}, Vec{1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean(Vec{0, 0}, Vec{3, 4}), 5.0);
  expect_errc([] { euclidean(Vec{1}, Vec{1, 2}); }, SimilarityErrc::LengthMismatch);
  expect_errc([] { euclidean(Vec{}, Vec{}); }, SimilarityErrc::EmptySeries);
}

TEST(Manhattan, Examples) {
  EXPECT_EQ(manhattan(Vec{1, 2, 3}, Vec{1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(manhattan(Vec{0, 0}, Vec{3, 4}), 7.0);
  expect_errc([] { manhattan(Vec{1}, Vec{1, 2}); }, SimilarityErrc::LengthMismatch);
}

TEST(NormMeasures, MatchDirectSummation) {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_vec(g, 10), b = random_vec(g, 10);
    long double sq = 0, ab = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      sq += (static_cast<long double>(a[i]) - b[i]) * (static_cast<long double>(a[i]) - b[i]);
      ab += std::fabs(static_cast<long double>(a[i]) - b[i]);
    }
    EXPECT_NEAR(euclidean(a, b), static_cast<double>(std::sqrt(sq)), 1e-12);
    EXPECT_NEAR(manhattan(a, b), static_cast<double>(ab), 1e-12);
  }
}

TEST(Dtw, Examples) {
  EXPECT_EQ(dtw(Vec{1, 5, 2}, Vec{1, 5, 2}), 0.0);
  EXPECT_EQ(dtw(Vec{0, 0, 1, 0, 0}, Vec{0, 1, 0, 0, 0}), 0.0);
  EXPECT_EQ(oracle::brute_dtw({0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}), 0.0);
  EXPECT_EQ(dtw(Vec{0, 1}, Vec{1, 0}), 2.0);
  EXPECT_EQ(oracle::brute_dtw({0, 1}, {1, 0}), 2.0);
  expect_errc([] { dtw(Vec{}, Vec{1}); }, SimilarityErrc::EmptySeries);
  expect_errc([] { dtw(Vec{1, 2, 3, 4}, Vec{1}, DtwConfig::band(2)); }, SimilarityErrc::BandTooNarrow);
}

TEST(Dtw, MatchesBruteForce) {
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_vec(g, len(g)), b = random_vec(g, len(g));
    EXPECT_EQ(dtw(a, b), oracle::brute_dtw(a, b));
    const std::size_t gap = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    for (std::size_t w = gap; w <= 3; ++w) {
      EXPECT_EQ(dtw(a, b, DtwConfig::band(w)), oracle::brute_dtw(a, b, w)) << "w=" << w;
    }
  }
}

TEST(Dtw, TimeShiftInvarianceWithinBand) {
  const Vec pulse{0, 0, 0, 1, 2, 0, 0, 0};
  for (int k = -2; k <= 2; ++k) {
    Vec shifted(pulse.size(), 0.0);
    for (std::size_t i = 0; i < pulse.size(); ++i) {
      const long j = static_cast<long>(i) - k;
      if (j >= 0 && j < static_cast<long>(pulse.size())) shifted[i] = pulse[j];
    }
    EXPECT_EQ(oracle::brute_dtw(pulse, shifted, 2), 0.0) << k;
    EXPECT_EQ(dtw(pulse, shifted, DtwConfig::band(2)), 0.0) << k;
  }
}

TEST(Dtw, BoundedByManhattan) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_vec(g, 40), b = random_vec(g, 40);
    EXPECT_LE(dtw(a, b), manhattan(a, b) + 1e-12);
    EXPECT_LE(dtw(a, b, DtwConfig::band(3)), manhattan(a, b) + 1e-12);
  }
}

TEST(Cosine, Examples) {
  const Vec a{1, -2, 3};
  EXPECT_NEAR(cosine_distance(a, Vec{3, -6, 9}), 0.0, 1e-15);
  EXPECT_NEAR(cosine_distance(a, Vec{-1, 2, -3}), 2.0, 1e-15);
  EXPECT_NEAR(cosine_distance(Vec{1, 0}, Vec{0, 1}), 1.0, 1e-15);
  expect_errc([] { cosine_distance(Vec{0, 0}, Vec{1, 1}); }, SimilarityErrc::ZeroVector);
  expect_errc([] { cosine_distance(Vec{1, 0}, Vec{1}); }, SimilarityErrc::LengthMismatch);
}

TEST(Correlation, Examples) {
  const Vec a{1, 4, 2, 8, 5};
  Vec b(a.size()), neg(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    b[i] = 2 * a[i] + 3;
    neg[i] = -a[i];
  }
  EXPECT_NEAR(correlation_distance(a, b), 0.0, 1e-12);
  EXPECT_NEAR(correlation_distance(a, neg), 2.0, 1e-12);
  expect_errc([&] { correlation_distance(a, Vec{1, 1, 1, 1, 1}); }, SimilarityErrc::ZeroVariance);
  EXPECT_EQ(correlation_distance(Vec{2, 2, 2}, Vec{2, 2, 2}), 0.0);
}

TEST(Measures, SymmetryAndIdentity) {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_vec(g, 25), b = random_vec(g, 25);
    for (Measure m : kAllMeasures) {
      EXPECT_NEAR(evaluate(m, a, b), evaluate(m, b, a), 1e-12) << abbreviation(m);
      EXPECT_EQ(evaluate(m, a, a), 0.0) << abbreviation(m);
    }
  }
}

TEST(Measures, AffineInvariances) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> alpha(0.05, 20), beta(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_vec(g, 50);
    const double al = alpha(g), be = beta(g);
    Vec affine(a.size()), scaled(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      affine[i] = al * a[i] + be;
      scaled[i] = al * a[i];
    }
    EXPECT_LT(correlation_distance(a, affine), 1e-9);
    EXPECT_LT(cosine_distance(a, scaled), 1e-9);
  }
}

TEST(Measures, CosineIsNotShiftInvariant) {
  const auto a = sine_values(1.0, 2.0, 0.01);
  Vec shifted(a);
  for (auto& x : shifted) x += 0.5;
  EXPECT_GT(cosine_distance(a, shifted), 1e-3);
}

TEST(Measures, NormsSeeEveryPerturbation) {
  const auto s = synth_sine(1.0, 1.0, 0.0, 2.0, 0.01);
  for (Perturbation p : {Perturbation{PerturbationKind::AmplitudeShift, 0.2},
                         Perturbation{PerturbationKind::AmplitudeShift, -0.2},
                         Perturbation{PerturbationKind::AmplitudeStretch, 1.2},
                         Perturbation{PerturbationKind::AmplitudeStretch, 0.5},
                         Perturbation{PerturbationKind::TimeShift, 3},
                         Perturbation{PerturbationKind::TimeShift, -1},
                         Perturbation{PerturbationKind::TimeStretch, 1.05},
                         Perturbation{PerturbationKind::TimeStretch, 0.9}}) {
    const auto q = apply_perturbation(s, p);
    EXPECT_GT(euclidean(s.values(), q.values()), 0.0) << to_string(p.kind);
    EXPECT_GT(manhattan(s.values(), q.values()), 0.0) << to_string(p.kind);
  }
}

TEST(CompareAll, IdentityAndPerMeasureErrors) {
  const auto a = sine_values(1.0, 2.0, 0.01);
  for (const auto& [m, out] : compare_all(a, a)) {
    ASSERT_TRUE(out.ok()) << abbreviation(m);
    EXPECT_EQ(*out.value, 0.0);
  }
  Vec shifted(a);
  for (auto& x : shifted) x += 0.5;
  const auto res = compare_all(a, shifted);
  EXPECT_LT(*res.at(Measure::COR).value, 1e-9);
  EXPECT_GT(*res.at(Measure::ED).value, 0.0);

  const Vec flat(a.size(), 1.0);
  const auto partial = compare_all(a, flat);
  EXPECT_TRUE(partial.at(Measure::ED).ok());
  EXPECT_TRUE(partial.at(Measure::COS).ok());
  EXPECT_FALSE(partial.at(Measure::COR).ok());
  EXPECT_EQ(*partial.at(Measure::COR).error, SimilarityErrc::ZeroVariance);
}

TEST(Abbreviations, RoundTrip) {
  for (Measure m : kAllMeasures) EXPECT_EQ(parse_measure(abbreviation(m)), m);
  EXPECT_THROW(parse_measure("L2"), std::invalid_argument);
}

TEST(Demo, ProfilesMatchInvariances) {
  const auto d = similarity_demo();
  ASSERT_EQ(d.perturbed.size(), 4u);
  for (const auto& [m, row] : d.profile) {
    double sum = 0;
    for (double x : row) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12) << abbreviation(m);
  }
  EXPECT_LT(d.profile.at(Measure::COR)[0], 0.01);
  EXPECT_LT(d.profile.at(Measure::COR)[1], 0.01);
  EXPECT_LT(d.profile.at(Measure::COS)[1], 0.01);
  EXPECT_LT(d.profile.at(Measure::DTW)[2], 0.01);
  for (Measure m : {Measure::ED, Measure::MH}) {
    for (double x : d.profile.at(m)) EXPECT_GT(x, 0.10) << abbreviation(m);
  }
}
