#pragma once

#include <vector>

#include "loadcorr/gridsim/case.hpp"

namespace loadcorr::grid {

/// Solved steady state. Vectors are indexed like NetworkCase::buses.
struct OperatingPoint {
  std::vector<Complex> voltage;
  std::vector<Complex> generation;  // complex power injected by machines
  std::vector<Complex> load;        // complex power drawn by loads at the solved voltage
  int iterations = 0;
  double max_mismatch = 0.0;  // pu, largest |dP| or |dQ| over non-slack buses
};

struct PowerFlowOptions {
  int max_iterations = 50;
  double tolerance = 1e-8;
};

/// Steady-state demand of a load at voltage magnitude `vm`. ZIP loads scale
/// with V^2, V and 1 about a 1.0 pu reference; composite loads are held at
/// their nominal demand (their dynamic parts are referenced to the solved
/// voltage when dynamics are initialised).
Complex steady_state_demand(const Load& load, double vm);

/// Newton-Raphson from a flat 1.0 pu / 0 rad start (setpoints on slack and
/// PV buses). PV buses inject the sum of their machines' mechanical power.
/// Throws GridError(NoConvergence) when the mismatch is still above
/// tolerance after max_iterations.
OperatingPoint solve_power_flow(const NetworkCase& c, const PowerFlowOptions& opts = {});

}  // namespace loadcorr::grid
