#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loadcorr::similarity {

/// The five measures, serialized everywhere as ED/MH/DTW/COS/COR.
enum class Measure { ED, MH, DTW, COS, COR };

inline constexpr std::array<Measure, 5> kAllMeasures = {Measure::ED, Measure::MH, Measure::DTW,
                                                         Measure::COS, Measure::COR};

std::string_view abbreviation(Measure m);
/// Throws std::invalid_argument on unknown text.
Measure parse_measure(std::string_view text);

enum class SimilarityErrc { LengthMismatch, EmptySeries, BandTooNarrow, ZeroVector, ZeroVariance };

std::string_view to_string(SimilarityErrc code);

class SimilarityError : public std::runtime_error {
 public:
  SimilarityError(SimilarityErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  SimilarityErrc code() const noexcept { return code_; }

 private:
  SimilarityErrc code_;
};

/// Sakoe-Chiba band half-width in samples; nullopt means unbounded.
struct DtwConfig {
  std::optional<std::size_t> window;

  static DtwConfig unbounded() { return {}; }
  static DtwConfig band(std::size_t w) { return {w}; }
};

double euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);

/// Warping cost with steps {(1,0), (0,1), (1,1)}, cell cost |a[i] - b[j]| and
/// an optional |i - j| <= window band.
double dtw(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg = {});

/// 1 - a.b / (|a| |b|), clamped to [0, 2]. Identical inputs give 0.
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// 1 - pearson r, in [0, 2]. Identical inputs give 0 even when flat.
double correlation_distance(std::span<const double> a, std::span<const double> b);

double evaluate(Measure m, std::span<const double> a, std::span<const double> b,
                const DtwConfig& cfg = {});

/// A measure value or the reason it could not be computed.
struct MeasureOutcome {
  std::optional<double> value;
  std::optional<SimilarityErrc> error;
  std::string message;

  bool ok() const noexcept { return value.has_value(); }
};

/// All five measures on the pair; a failing precondition is reported against
/// that measure only.
std::map<Measure, MeasureOutcome> compare_all(std::span<const double> a, std::span<const double> b,
                                              const DtwConfig& cfg = {});

}  // namespace loadcorr::similarity
