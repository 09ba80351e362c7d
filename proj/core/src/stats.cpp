#include "loadcorr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loadcorr::stats {

std::string_view to_string(StatsErrc code) {
  switch (code) {
    case StatsErrc::ZeroVariance: return "ZeroVariance";
    case StatsErrc::TooFewSamples: return "TooFewSamples";
    case StatsErrc::ZeroPooledVariance: return "ZeroPooledVariance";
    case StatsErrc::BadDf: return "BadDf";
    case StatsErrc::OutOfRange: return "OutOfRange";
    case StatsErrc::LengthMismatch: return "LengthMismatch";
  }
  return "?";
}

std::string_view to_string(StrengthClass c) {
  switch (c) {
    case StrengthClass::StrongNegative: return "strong_negative";
    case StrengthClass::StrongPositive: return "strong_positive";
    case StrengthClass::Weak: return "weak";
  }
  return "?";
}

namespace {

constexpr int kMaxFractionTerms = 200;
constexpr double kFractionEps = 1e-14;
constexpr double kTiny = 1e-300;

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sum of squared deviations about the mean.
double sum_sq_dev(std::span<const double> v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kFractionEps) break;
  }
  return h;
}

// I_x(a, b) given both x and y = 1 - x, so callers can avoid cancellation.
double incomplete_beta_xy(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_fraction(b, a, y) / b;
}

// Two-tailed tail mass given x = df/(df+t^2) and y = t^2/(df+t^2).
double two_tailed_from_xy(double df, double x, double y) {
  return std::clamp(incomplete_beta_xy(0.5 * df, 0.5, x, y), 0.0, 1.0);
}

void check_df(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw StatsError(StatsErrc::BadDf, "degrees of freedom must be positive and finite");
  }
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw StatsError(StatsErrc::OutOfRange, "incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw StatsError(StatsErrc::OutOfRange, "incomplete beta needs x in [0, 1]");
  }
  return incomplete_beta_xy(a, b, x, 1.0 - x);
}

double t_two_tailed_p(double t, double df) {
  check_df(df);
  if (std::isnan(t)) throw StatsError(StatsErrc::OutOfRange, "t is NaN");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return two_tailed_from_xy(df, df / (df + t2), t2 / (df + t2));
}

double t_cdf(double t, double df) {
  check_df(df);
  if (std::isnan(t)) throw StatsError(StatsErrc::OutOfRange, "t is NaN");
  if (t == INFINITY) return 1.0;
  if (t == -INFINITY) return 0.0;
  const double tail = 0.5 * t_two_tailed_p(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

double pearson_coefficient(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw StatsError(StatsErrc::LengthMismatch, "pearson inputs differ in length");
  }
  if (x.size() < 2) {
    throw StatsError(StatsErrc::TooFewSamples, "pearson needs at least two samples");
  }
  if (is_constant(x) || is_constant(y)) {
    throw StatsError(StatsErrc::ZeroVariance, "pearson input has zero variance");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my);
  const double denom = std::sqrt(sum_sq_dev(x, mx)) * std::sqrt(sum_sq_dev(y, my));
  if (!(denom > 0.0)) {
    throw StatsError(StatsErrc::ZeroVariance, "pearson input has zero variance");
  }
  return std::clamp(sxy / denom, -1.0, 1.0);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw StatsError(StatsErrc::LengthMismatch, "pearson inputs differ in length");
  }
  if (x.size() < 3) {
    throw StatsError(StatsErrc::TooFewSamples, "pearson significance needs at least three samples");
  }
  CorrelationResult out;
  out.n = x.size();
  out.r = pearson_coefficient(x, y);
  if (1.0 - std::abs(out.r) <= 1e-12) {
    out.p = 0.0;
    return out;
  }
  // With t^2 = r^2 (n-2)/(1-r^2): df/(df+t^2) = 1-r^2.
  const double df = static_cast<double>(out.n - 2);
  const double r2 = out.r * out.r;
  out.p = two_tailed_from_xy(df, 1.0 - r2, r2);
  return out;
}

TTestResult two_sample_ttest(std::span<const double> a, std::span<const double> b,
                             bool equal_variance) {
  if (a.size() < 2 || b.size() < 2) {
    throw StatsError(StatsErrc::TooFewSamples, "t-test needs at least two samples per group");
  }
  if (is_constant(a) && is_constant(b)) {
    throw StatsError(StatsErrc::ZeroPooledVariance, "both groups are constant");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sum_sq_dev(a, ma) / (na - 1.0);
  const double vb = sum_sq_dev(b, mb) / (nb - 1.0);

  TTestResult out;
  out.n_a = a.size();
  out.n_b = b.size();
  double se2 = 0.0;
  if (equal_variance) {
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    if (!(pooled > 0.0)) {
      throw StatsError(StatsErrc::ZeroPooledVariance, "pooled variance is zero");
    }
    se2 = pooled * (1.0 / na + 1.0 / nb);
    out.df = na + nb - 2.0;
  } else {
    const double ua = va / na;
    const double ub = vb / nb;
    se2 = ua + ub;
    if (!(se2 > 0.0)) {
      throw StatsError(StatsErrc::ZeroPooledVariance, "group variances are zero");
    }
    out.df = se2 * se2 / (ua * ua / (na - 1.0) + ub * ub / (nb - 1.0));
  }
  out.t = (ma - mb) / std::sqrt(se2);
  out.p = t_two_tailed_p(out.t, out.df);
  return out;
}

StrengthClass classify(double r) {
  if (!(r >= -1.0 && r <= 1.0)) {
    throw StatsError(StatsErrc::OutOfRange, "r must lie in [-1, 1]");
  }
  if (r <= -kStrongThreshold) return StrengthClass::StrongNegative;
  if (r >= kStrongThreshold) return StrengthClass::StrongPositive;
  return StrengthClass::Weak;
}

bool is_significant(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw StatsError(StatsErrc::OutOfRange, "p must lie in [0, 1]");
  }
  return p < kSignificanceLevel;
}

}  // namespace loadcorr::stats
