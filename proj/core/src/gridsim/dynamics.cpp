#include "loadcorr/gridsim/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "plant.hpp"

namespace loadcorr::grid {

MotorCircuit motor_circuit(const MotorParams& m, double frequency) {
  MotorCircuit k;
  k.open_circuit_x = m.stator_x + m.magnetizing_x;
  k.transient_x = m.stator_x + m.magnetizing_x * m.rotor_x / (m.magnetizing_x + m.rotor_x);
  k.transient_t0 = (m.rotor_x + m.magnetizing_x) / (2.0 * std::numbers::pi * frequency * m.rotor_r);
  k.stator_z = {m.stator_r, k.transient_x};
  return k;
}

Complex motor_impedance(const MotorParams& m, double slip) {
  // Rotor branch written as (Rr + j s Xr) / s so that s = 0 is well defined.
  const Complex rotor(m.rotor_r, slip * m.rotor_x);
  const Complex magnetizing(0.0, m.magnetizing_x);
  const Complex parallel = magnetizing * rotor / (rotor + slip * magnetizing);
  return Complex(m.stator_r, m.stator_x) + parallel;
}

double motor_input_power(const MotorParams& m, double vm, double slip) {
  return vm * vm * std::real(1.0 / motor_impedance(m, slip));
}

double motor_airgap_torque(const MotorParams& m, double vm, double slip) {
  const double i = vm / std::abs(motor_impedance(m, slip));
  return motor_input_power(m, vm, slip) - m.stator_r * i * i;
}

double solve_motor_slip(const MotorParams& m, double vm) {
  const double target = m.load_factor;
  auto excess = [&](double s) { return motor_input_power(m, vm, s) - target; };
  double lo = 0.0;
  double hi = -1.0;
  constexpr double kStep = 1e-3;
  for (int k = 1; k < 500; ++k) {
    const double s = k * kStep;
    if (excess(s) >= 0.0) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0.0) {
    throw GridError(GridErrc::NoEquilibrium,
                    "induction motor cannot carry its load at " + std::to_string(vm) +
                        " pu for any slip in (0, 0.5)");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) >= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

DynamicState init_dynamics(const NetworkCase& c, const OperatingPoint& op) {
  return detail::Plant(c, op).initial();
}

}  // namespace loadcorr::grid
