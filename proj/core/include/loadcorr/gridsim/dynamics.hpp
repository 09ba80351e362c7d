#pragma once

#include <vector>

#include "loadcorr/gridsim/case.hpp"
#include "loadcorr/gridsim/powerflow.hpp"

namespace loadcorr::grid {

/// Derived constants of the third-order induction motor, motor pu.
struct MotorCircuit {
  double open_circuit_x;   // X0 = Xs + Xm
  double transient_x;      // X' = Xs + Xm Xr / (Xm + Xr)
  double transient_t0;     // T0' = (Xr + Xm) / (w_s Rr), seconds
  Complex stator_z;        // Rs + j X'
};

MotorCircuit motor_circuit(const MotorParams& m, double frequency);

/// Steady-state input impedance of the single-cage equivalent circuit at slip s.
Complex motor_impedance(const MotorParams& m, double slip);

/// Electrical input power (motor pu) at terminal voltage vm and slip s.
double motor_input_power(const MotorParams& m, double vm, double slip);

/// Air-gap torque (motor pu), equal to input power less stator copper loss.
double motor_airgap_torque(const MotorParams& m, double vm, double slip);

/// Operating slip of a motor loaded to `load_factor` of its base at terminal
/// voltage vm: the first root in (0, 0.5) of input power = load_factor,
/// bracketed on a 1e-3 grid and refined by bisection. Throws
/// GridError(NoEquilibrium) if there is no root.
double solve_motor_slip(const MotorParams& m, double vm);

struct MachineState {
  double delta = 0.0;   // rad, rotor angle of E'
  double omega = 0.0;   // pu speed deviation
  double emf = 0.0;     // |E'|, constant
  double mechanical_power = 0.0;
};

struct MotorState {
  BusId bus = 0;
  double base = 0.0;        // motor MVA base over system base
  Complex emf;              // E', motor pu
  double slip = 0.0;
  double load_torque = 0.0; // T0 in Tm = T0 (1 - s)^k
};

/// Machines in case order, motors in ascending bus order.
struct DynamicState {
  std::vector<MachineState> machines;
  std::vector<MotorState> motors;
  std::vector<Complex> voltage;   // consistent network solution
  double max_derivative = 0.0;    // largest |dx/dt| over all states at t = 0
};

/// Builds the t = 0 equilibrium from a converged power flow. Machine EMFs
/// come from the solved injections; motor slips from solve_motor_slip at the
/// solved bus voltage; ZIP remainders of composite loads absorb whatever
/// reactive power the motor does not, referenced to the solved voltage.
DynamicState init_dynamics(const NetworkCase& c, const OperatingPoint& op);

}  // namespace loadcorr::grid
