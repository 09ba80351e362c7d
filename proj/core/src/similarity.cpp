#include "loadcorr/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "loadcorr/stats.hpp"

namespace loadcorr::similarity {

std::string_view abbreviation(Measure m) {
  switch (m) {
    case Measure::ED: return "ED";
    case Measure::MH: return "MH";
    case Measure::DTW: return "DTW";
    case Measure::COS: return "COS";
    case Measure::COR: return "COR";
  }
  return "?";
}

Measure parse_measure(std::string_view text) {
  for (Measure m : kAllMeasures) {
    if (abbreviation(m) == text) return m;
  }
  throw std::invalid_argument("unknown similarity measure '" + std::string(text) +
                              "' (expected ED, MH, DTW, COS or COR)");
}

std::string_view to_string(SimilarityErrc code) {
  switch (code) {
    case SimilarityErrc::LengthMismatch: return "LengthMismatch";
    case SimilarityErrc::EmptySeries: return "EmptySeries";
    case SimilarityErrc::BandTooNarrow: return "BandTooNarrow";
    case SimilarityErrc::ZeroVector: return "ZeroVector";
    case SimilarityErrc::ZeroVariance: return "ZeroVariance";
  }
  return "?";
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw SimilarityError(SimilarityErrc::EmptySeries, "series must be non-empty");
  }
  if (a.size() != b.size()) {
    throw SimilarityError(SimilarityErrc::LengthMismatch,
                          "series lengths differ (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
  }
}

bool identical(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double dtw(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg) {
  if (a.empty() || b.empty()) {
    throw SimilarityError(SimilarityErrc::EmptySeries, "DTW needs non-empty series");
  }
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t w = cfg.window.value_or(std::max(n, m));
  const std::size_t len_gap = n > m ? n - m : m - n;
  if (len_gap > w) {
    throw SimilarityError(SimilarityErrc::BandTooNarrow,
                          "band half-width " + std::to_string(w) + " cannot reach the end cell");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Two rolling rows over j. Row i only reads row i-1 inside [i-1-w, i+w];
  // entries there that row i-1 did not write are still infinite, so stale
  // values from older rows are never observed.
  std::vector<double> prev(m, kInf);
  std::vector<double> curr(m, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j_lo = i > w ? i - w : 0;
    const std::size_t j_hi = std::min(m - 1, i + w);
    double left = kInf;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const double cost = std::abs(a[i] - b[j]);
      double best;
      if (i == 0) {
        best = j == 0 ? 0.0 : left;
      } else {
        best = std::min(prev[j], left);
        if (j > 0) best = std::min(best, prev[j - 1]);
      }
      curr[j] = cost + best;
      left = curr[j];
    }
    if (j_lo > 0) curr[j_lo - 1] = kInf;
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  if (identical(a, b)) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw SimilarityError(SimilarityErrc::ZeroVector, "cosine distance of an all-zero vector");
  }
  return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
}

double correlation_distance(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  if (identical(a, b)) return 0.0;
  try {
    return std::clamp(1.0 - stats::pearson_coefficient(a, b), 0.0, 2.0);
  } catch (const stats::StatsError& e) {
    if (e.code() == stats::StatsErrc::ZeroVariance) {
      throw SimilarityError(SimilarityErrc::ZeroVariance, e.what());
    }
    throw SimilarityError(SimilarityErrc::LengthMismatch, e.what());
  }
}

double evaluate(Measure m, std::span<const double> a, std::span<const double> b,
                const DtwConfig& cfg) {
  switch (m) {
    case Measure::ED: return euclidean(a, b);
    case Measure::MH: return manhattan(a, b);
    case Measure::DTW: return dtw(a, b, cfg);
    case Measure::COS: return cosine_distance(a, b);
    case Measure::COR: return correlation_distance(a, b);
  }
  throw std::invalid_argument("bad measure");
}

std::map<Measure, MeasureOutcome> compare_all(std::span<const double> a, std::span<const double> b,
                                              const DtwConfig& cfg) {
  std::map<Measure, MeasureOutcome> out;
  for (Measure m : kAllMeasures) {
    MeasureOutcome o;
    try {
      o.value = evaluate(m, a, b, cfg);
    } catch (const SimilarityError& e) {
      o.error = e.code();
      o.message = e.what();
    }
    out.emplace(m, std::move(o));
  }
  return out;
}

}  // namespace loadcorr::similarity
