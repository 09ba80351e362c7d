#pragma once

// Student t tail probabilities by direct numerical integration of the
// density, and a two-pass Pearson coefficient in long double. Shares no code
// with the incomplete-beta route in the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline long double t_density(long double x, long double df) {
  const long double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PIl);
  return c * std::pow(1 + x * x / df, -(df + 1) / 2);
}

/// Composite Simpson on [a, b] with n (even) panels.
template <typename F>
long double simpson(F f, long double a, long double b, int n) {
  const long double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

/// P(|T| >= |t|). The tail is mapped to a finite interval by x = |t| / u,
/// u in (0, 1], so the integrand is smooth and vanishes at u = 0.
inline double t_two_tailed(double t, double df) {
  const long double a = std::fabs(t);
  if (a == 0) return 1.0;
  // Near u = 0 the integrand behaves like u^(df-1); only df = 1 leaves a
  // nonzero limit there, c df / a with c = 1 / pi.
  auto g = [&](long double u) -> long double {
    if (u <= 0) return df == 1 ? 1 / (M_PIl * a) : 0;
    return t_density(a / u, df) * a / (u * u);
  };
  return static_cast<double>(2 * simpson(g, 0.0L, 1.0L, 200000));
}

inline double t_cdf(double t, double df) {
  const double tail = t_two_tailed(t, df) / 2;
  return t >= 0 ? 1 - tail : tail;
}

struct Pearson {
  double r;
  double p;
};

inline Pearson pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  const double df = static_cast<double>(n) - 2;
  const double t = r * std::sqrt(df / (1 - r * r));
  return {r, t_two_tailed(t, df)};
}

}  // namespace oracle
