#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "loadcorr/gridsim/case.hpp"
#include "loadcorr/timeseries.hpp"

namespace loadcorr::grid {

struct NoDisturbance {
  friend bool operator==(const NoDisturbance&, const NoDisturbance&) = default;
};

/// Three-phase-to-ground fault: shunt admittance -j fault_admittance on the
/// bus over [t_apply, t_clear).
struct BusFault {
  BusId bus = 0;
  double t_apply = 0.1;
  double t_clear = 0.2;
  double fault_admittance = 1e4;  // pu

  friend bool operator==(const BusFault&, const BusFault&) = default;
};

/// Trips machine `machine` (index into NetworkCase::machines) at t_trip.
struct GeneratorOutage {
  std::size_t machine = 0;
  double t_trip = 0.1;

  friend bool operator==(const GeneratorOutage&, const GeneratorOutage&) = default;
};

using Disturbance = std::variant<NoDisturbance, BusFault, GeneratorOutage>;

/// Short label: "none", "fault bus 5 [0.1, 0.2) y=10000", "trip machine 2 at 0.1".
std::string describe(const Disturbance& d);

struct SimulationOptions {
  double span = 10.0;   // s
  double dt = 0.01;     // s
  std::uint64_t seed = 0;  // provenance only; the simulator is deterministic
  std::vector<std::string> branches;  // P/Q sources; empty means all branches
  double frequency_filter = 0.05;  // s, low-pass time constant on d(angle)/dt
  double tolerance = 1e-11;        // per-step convergence on voltages and states
  int max_iterations = 100;
};

/// All channels of one run on a common time grid.
struct ResponseSet {
  std::string case_name;
  Disturbance disturbance;
  double dt = 0.0;
  double span = 0.0;
  std::uint64_t seed = 0;
  double max_power_mismatch = 0.0;  // pu, over every recorded step and bus
  double min_slip = 0.0;
  double max_slip = 0.0;
  int max_iterations_used = 0;

  /// Indexed by ChannelKind. Bus channels hold one series per load bus in
  /// ascending bus order, branch channels one per selected branch.
  std::array<std::vector<TimeSeries>, 5> series;

  const std::vector<TimeSeries>& of(ChannelKind kind) const {
    return series[static_cast<std::size_t>(kind)];
  }
  std::vector<SourceId> sources(ChannelKind kind) const;
  std::size_t samples() const;
};

/// Throws GridError(UnknownSource) if the set has no such series.
const TimeSeries& channel(const ResponseSet& rs, ChannelKind kind, const SourceId& source);

/// Every series cut to `span` seconds.
ResponseSet truncate(const ResponseSet& rs, double span);

/// Power flow, equilibrium initialisation and fixed-step trapezoidal
/// integration with the network solved at every step. Events snap to the
/// nearest step; the value recorded at an event step is the post-event one.
///
/// Throws GridError: NoConvergence / NoEquilibrium from initialisation,
/// InvalidDisturbance, UnknownSource for an unknown branch selection,
/// NumericalDivergence and AlgebraicNoConvergence while stepping.
ResponseSet run_simulation(const NetworkCase& c, const Disturbance& d,
                           const SimulationOptions& opts = {});

}  // namespace loadcorr::grid
