#pragma once

// Independent models for the network and motor checks.

#include <cmath>
#include <complex>
#include <limits>

namespace oracle {

using cd = std::complex<double>;

/// Single-cage induction motor: Rs + jXs in series with jXm parallel to
/// (Rr/s + jXr). Returns the input power at |V| = vm (motor pu).
inline double motor_input_power(double rs, double xs, double xm, double rr, double xr, double vm, double s) {
  const cd zm{0.0, xm};
  const cd zr{rr / s, xr};
  const cd z = cd{rs, xs} + zm * zr / (zm + zr);
  return vm * vm * std::real(1.0 / std::conj(z));
}

/// First slip in (0, s_max) where input power crosses `target`, by a dense
/// scan with step h and linear interpolation inside the bracketing step.
template <typename P>
double scan_root(P power, double target, double h, double s_max = 0.5) {
  double prev = power(h) - target;
  for (double s = 2 * h; s < s_max; s += h) {
    const double cur = power(s) - target;
    if ((prev < 0) != (cur < 0)) return s - h + h * prev / (prev - cur);
    prev = cur;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Two-bus system: slack V1 = 1 at angle 0, series impedance z, PQ load
/// s_load (constant power) at bus 2. Finds V2 = |V| e^{j theta} by nested
/// grid search on (|V|, theta), zooming in around the best cell.
inline cd two_bus_grid_search(cd z, cd s_load) {
  const cd y = 1.0 / z;
  auto mismatch = [&](double vm, double th) {
    const cd v2 = std::polar(vm, th);
    const cd i = y * (v2 - 1.0);       // current leaving bus 2 into the line
    const cd s_inj = v2 * std::conj(i);  // power injected by bus 2 into the line
    return std::abs(s_inj + s_load);
  };
  double vm = 1.0, th = 0.0, dv = 0.5, dth = 0.5;
  for (int round = 0; round < 40; ++round) {
    double best = std::numeric_limits<double>::infinity();
    double bv = vm, bt = th;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double v = vm + dv * i / 20.0;
        const double t = th + dth * j / 20.0;
        if (v <= 0.5) continue;  // the high-voltage solution
        const double m = mismatch(v, t);
        if (m < best) {
          best = m;
          bv = v;
          bt = t;
        }
      }
    }
    vm = bv;
    th = bt;
    dv /= 4;
    dth /= 4;
  }
  return std::polar(vm, th);
}

}  // namespace oracle
