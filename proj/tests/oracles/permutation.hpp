#pragma once

// Exact two-sided permutation test on the difference of group means:
// enumerates every relabelling of the pooled sample.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double permutation_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  const std::size_t k = a.size();
  double total = 0;
  for (double v : pooled) total += v;
  auto diff = [&](double sum_a) {
    return std::fabs(sum_a / k - (total - sum_a) / (n - k));
  };
  double observed_sum = 0;
  for (double v : a) observed_sum += v;
  const double observed = diff(observed_sum);

  std::size_t extreme = 0, count = 0;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    double s = 0;
    for (std::size_t i : idx) s += pooled[i];
    ++count;
    if (diff(s) >= observed - 1e-12 * (1 + observed)) ++extreme;
    // next k-combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return static_cast<double>(extreme) / static_cast<double>(count);
}

}  // namespace oracle
