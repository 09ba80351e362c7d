#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "loadcorr/gridsim/dynamics.hpp"
#include "network.hpp"

namespace loadcorr::grid::detail {

/// Constant-power demand turns into constant impedance below this voltage.
inline constexpr double kLowVoltage = 0.7;

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using CVector = Eigen::VectorXcd;

/// S(V) = s_z |V|^2 + s_i |V| + s_p at one bus.
struct StaticLoad {
  Complex s_z;
  Complex s_i;
  Complex s_p;
};

struct MachineUnit {
  std::size_t bus;
  double h;
  double d;
  Complex y;  // 1 / (j xd')
};

struct MotorUnit {
  std::size_t bus;
  MotorParams p;
  MotorCircuit k;
  Complex y_sys;  // base / (Rs + jX'), system pu
  Complex beta;   // j (X0 - X') / (T0' (Rs + jX'))
};

/// Network configuration between two events.
struct Topology {
  std::optional<std::size_t> fault_bus;
  Complex fault_y;
  std::vector<char> machine_online;

  friend bool operator==(const Topology&, const Topology&) = default;
};

struct Derivatives {
  std::vector<double> delta;
  std::vector<double> omega;
  std::vector<Complex> emf;
  std::vector<double> slip;
};

/// Devices of a case around a solved operating point, plus the equations
/// shared by initialisation and time stepping.
class Plant {
 public:
  Plant(const NetworkCase& c, const OperatingPoint& op);

  const CompiledNetwork& network() const { return net_; }
  const std::vector<MachineUnit>& machines() const { return machines_; }
  const std::vector<MotorUnit>& motors() const { return motors_; }
  const DynamicState& initial() const { return initial_; }
  double omega_s() const { return omega_s_; }
  double frequency() const { return frequency_; }
  Topology base_topology() const;

  /// LU of the augmented admittance (network, machine and motor Nortons,
  /// constant-impedance loads, fault shunt). Cached per topology.
  const Eigen::SparseLU<SparseMatrix>& factor(const Topology& topo);

  /// Current drawn by the non-impedance load parts at bus voltages v.
  Complex nonlinear_current(std::size_t bus, Complex v) const;

  /// Norton source currents of machines and motors.
  void source_current(const DynamicState& x, const Topology& topo, CVector& out) const;

  /// Fixed-point solve of the network for the given states; v holds the
  /// starting guess and receives the result. Returns iterations used.
  int solve_network(const DynamicState& x, const Topology& topo, std::vector<Complex>& v,
                    double tol, int max_iter);

  Complex machine_emf(const MachineState& m) const { return std::polar(m.emf, m.delta); }
  double electrical_power(std::size_t k, const MachineState& m, Complex v) const;
  Complex motor_current(std::size_t k, Complex emf, Complex v) const;  // motor pu
  double motor_torque(std::size_t k, Complex emf, Complex v) const;
  double load_torque(std::size_t k, const MotorState& m, double slip) const;

  void derivatives(const DynamicState& x, const Topology& topo, Derivatives& out) const;
  static double max_abs(const Derivatives& d);

  /// Largest |S| mismatch over buses: network injection against device
  /// currents computed from their own terminal equations.
  double power_mismatch(const DynamicState& x, const Topology& topo) const;

 private:
  CompiledNetwork net_;
  double frequency_;
  double omega_s_;
  std::vector<StaticLoad> loads_;
  std::vector<MachineUnit> machines_;
  std::vector<MotorUnit> motors_;
  SparseMatrix ybus_;
  DynamicState initial_;
  std::vector<std::pair<Topology, std::unique_ptr<Eigen::SparseLU<SparseMatrix>>>> factors_;
  CVector rhs_;
  CVector sol_;
};

}  // namespace loadcorr::grid::detail
