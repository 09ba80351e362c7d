#pragma once

#include <array>
#include <map>
#include <vector>

#include "loadcorr/similarity.hpp"
#include "loadcorr/timeseries.hpp"

namespace loadcorr::similarity {

struct DemoSettings {
  double amplitude = 1.0;
  double frequency = 1.0;  // Hz
  double span = 4.0;       // s
  double dt = 0.01;        // s
  double amplitude_shift = 0.3;
  double amplitude_stretch = 1.5;
  double time_shift = 5.0;  // samples
  double time_stretch = 1.1;
  std::size_t dtw_window = 10;
};

/// A sine, its four perturbed copies (amplitude shift, amplitude stretch,
/// time shift, time stretch) and every measure between the sine and each copy.
struct DemoResult {
  TimeSeries base;
  std::array<Perturbation, 4> perturbations;
  std::vector<TimeSeries> perturbed;
  std::map<Measure, std::array<double, 4>> raw;
  /// raw normalized per measure so each row sums to one.
  std::map<Measure, std::vector<double>> profile;
};

DemoResult similarity_demo(const DemoSettings& s = {});

}  // namespace loadcorr::similarity
