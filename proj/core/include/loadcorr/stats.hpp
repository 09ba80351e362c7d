#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loadcorr::stats {

enum class StatsErrc {
  ZeroVariance,
  TooFewSamples,
  ZeroPooledVariance,
  BadDf,
  OutOfRange,
  LengthMismatch,
};

std::string_view to_string(StatsErrc code);

class StatsError : public std::runtime_error {
 public:
  StatsError(StatsErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  StatsErrc code() const noexcept { return code_; }

 private:
  StatsErrc code_;
};

struct CorrelationResult {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

enum class StrengthClass { StrongNegative, StrongPositive, Weak };

std::string_view to_string(StrengthClass c);

/// Sample Pearson coefficient, clamped to [-1, 1]. Needs n >= 2 and two
/// non-constant inputs.
double pearson_coefficient(std::span<const double> x, std::span<const double> y);

/// Pearson r with a two-tailed p from t = r sqrt((n-2)/(1-r^2)), df = n-2.
/// |r| within 1e-12 of one maps to p = 0. Needs n >= 3.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Two-tailed two-sample t-test. Student's pooled variance by default, Welch
/// (Satterthwaite df) when equal_variance is false.
TTestResult two_sample_ttest(std::span<const double> a, std::span<const double> b,
                             bool equal_variance = true);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution function.
double t_cdf(double t, double df);

/// P(|T| >= |t|) for Student t with df degrees of freedom.
double t_two_tailed_p(double t, double df);

/// StrongNegative iff r <= -0.5, StrongPositive iff r >= 0.5.
StrengthClass classify(double r);

/// p < 0.05, strictly.
bool is_significant(double p);

inline constexpr double kStrongThreshold = 0.5;
inline constexpr double kSignificanceLevel = 0.05;

}  // namespace loadcorr::stats
