#include "plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace loadcorr::grid::detail {

namespace {

constexpr Complex kJ{0.0, 1.0};

// E' that zeroes dE'/dt at slip s and terminal voltage v (motor pu).
Complex motor_equilibrium_emf(const MotorUnit& m, double omega_s, double slip, Complex v) {
  const double dx = m.k.open_circuit_x - m.k.transient_x;
  const Complex coupling = kJ * dx / m.k.stator_z;
  return coupling * v / (Complex(1.0, omega_s * slip * m.k.transient_t0) + coupling);
}

}  // namespace

Plant::Plant(const NetworkCase& c, const OperatingPoint& op)
    : net_(c), frequency_(c.frequency), omega_s_(2.0 * std::numbers::pi * c.frequency) {
  const std::size_t n = net_.n;
  if (op.voltage.size() != n || op.generation.size() != n) {
    throw GridError(GridErrc::InvalidCase, "operating point does not match the case");
  }

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(net_.y_entries.size());
  for (const auto& e : net_.y_entries) {
    trip.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  }
  ybus_.resize(static_cast<long>(n), static_cast<long>(n));
  ybus_.setFromTriplets(trip.begin(), trip.end());

  std::vector<int> per_bus(n, 0);
  for (const Machine& m : c.machines) ++per_bus[net_.index_of(m.bus)];
  for (const Machine& m : c.machines) {
    const std::size_t i = net_.index_of(m.bus);
    const Complex v = op.voltage[i];
    const Complex s_bus = op.generation[i];
    const double p = c.buses[i].kind == BusKind::Slack ? s_bus.real() / per_bus[i] : m.mechanical_power;
    const Complex s(p, s_bus.imag() / per_bus[i]);
    const Complex e = v + kJ * m.transient_reactance * std::conj(s / v);
    machines_.push_back({i, m.inertia_h, m.damping_d, 1.0 / (kJ * m.transient_reactance)});
    initial_.machines.push_back({std::arg(e), 0.0, std::abs(e), p});
  }

  loads_.assign(n, StaticLoad{});
  for (const auto& [id, load] : c.loads) {
    const std::size_t i = net_.index_of(id);
    StaticLoad& sl = loads_[i];
    if (const auto* zip = std::get_if<ZipParams>(&load.model)) {
      sl.s_z += Complex(load.p * zip->p_z, load.q * zip->q_z);
      sl.s_i += Complex(load.p * zip->p_i, load.q * zip->q_i);
      sl.s_p += Complex(load.p * zip->p_p, load.q * zip->q_p);
      continue;
    }
    const auto& comp = std::get<CompositeParams>(load.model);
    const Complex v = op.voltage[i];
    const double v0 = std::abs(v);
    const double p_motor = comp.motor_fraction * load.p;
    const double p_elec = comp.electronic_fraction * load.p;
    double q_motor = 0.0;
    if (p_motor > 0.0) {
      MotorUnit mu;
      mu.bus = i;
      mu.p = comp.motor;
      mu.k = motor_circuit(comp.motor, frequency_);
      const double base = p_motor / comp.motor.load_factor;
      mu.y_sys = base / mu.k.stator_z;
      mu.beta = kJ * (mu.k.open_circuit_x - mu.k.transient_x) / (mu.k.transient_t0 * mu.k.stator_z);
      const double slip = solve_motor_slip(comp.motor, v0);
      const Complex emf = motor_equilibrium_emf(mu, omega_s_, slip, v);
      const Complex current = (v - emf) / mu.k.stator_z;
      q_motor = base * std::imag(v * std::conj(current));
      initial_.motors.push_back({id, base, emf, slip, 0.0});
      motors_.push_back(mu);
    }
    // Remaining ZIP share, referenced to the solved voltage so that the
    // bus draws exactly its nominal demand at t = 0.
    const double pz = load.p - p_motor - p_elec;
    const double qz = load.q - q_motor;
    const ZipParams& z = comp.zip;
    sl.s_z += Complex(pz * z.p_z, qz * z.q_z) / (v0 * v0);
    sl.s_i += Complex(pz * z.p_i, qz * z.q_i) / v0;
    sl.s_p += Complex(pz * z.p_p + p_elec, qz * z.q_p);
  }

  rhs_.resize(static_cast<long>(n));
  sol_.resize(static_cast<long>(n));

  // Motor EMFs depend on the terminal voltage and the network solution on
  // the EMFs; alternate until both agree to round-off.
  const Topology topo = base_topology();
  std::vector<Complex> v = op.voltage;
  for (int outer = 0; outer < 100; ++outer) {
    const std::vector<Complex> before = v;
    solve_network(initial_, topo, v, 1e-13, 200);
    for (std::size_t k = 0; k < motors_.size(); ++k) {
      MotorState& ms = initial_.motors[k];
      ms.emf = motor_equilibrium_emf(motors_[k], omega_s_, ms.slip, v[motors_[k].bus]);
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(v[i] - before[i]));
    if (change < 1e-14) break;
  }
  for (std::size_t k = 0; k < machines_.size(); ++k) {
    MachineState& m = initial_.machines[k];
    m.mechanical_power = electrical_power(k, m, v[machines_[k].bus]);
  }
  for (std::size_t k = 0; k < motors_.size(); ++k) {
    MotorState& ms = initial_.motors[k];
    const double te = motor_torque(k, ms.emf, v[motors_[k].bus]);
    ms.load_torque = te / std::pow(1.0 - ms.slip, motors_[k].p.torque_exponent);
  }
  initial_.voltage = v;
  Derivatives d;
  derivatives(initial_, topo, d);
  initial_.max_derivative = max_abs(d);
}

Topology Plant::base_topology() const {
  Topology t;
  t.machine_online.assign(machines_.size(), 1);
  return t;
}

const Eigen::SparseLU<SparseMatrix>& Plant::factor(const Topology& topo) {
  for (const auto& [t, lu] : factors_) {
    if (t == topo) return *lu;
  }
  SparseMatrix y = ybus_;
  for (std::size_t k = 0; k < machines_.size(); ++k) {
    if (!topo.machine_online[k]) continue;
    const auto b = static_cast<long>(machines_[k].bus);
    y.coeffRef(b, b) += machines_[k].y;
  }
  for (std::size_t i = 0; i < loads_.size(); ++i) {
    if (loads_[i].s_z == Complex{}) continue;
    const auto b = static_cast<long>(i);
    y.coeffRef(b, b) += std::conj(loads_[i].s_z);
  }
  for (const MotorUnit& m : motors_) {
    const auto b = static_cast<long>(m.bus);
    y.coeffRef(b, b) += m.y_sys;
  }
  if (topo.fault_bus) {
    const auto b = static_cast<long>(*topo.fault_bus);
    y.coeffRef(b, b) += topo.fault_y;
  }
  y.makeCompressed();
  auto lu = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
  lu->analyzePattern(y);
  lu->factorize(y);
  if (lu->info() != Eigen::Success) {
    throw GridError(GridErrc::AlgebraicNoConvergence, "network admittance matrix is singular");
  }
  factors_.emplace_back(topo, std::move(lu));
  return *factors_.back().second;
}

Complex Plant::nonlinear_current(std::size_t bus, Complex v) const {
  const StaticLoad& sl = loads_[bus];
  const double vm = std::abs(v);
  if (vm < 1e-12) return {};
  Complex i = std::conj(sl.s_i) * (v / vm);
  if (vm >= kLowVoltage) {
    i += std::conj(sl.s_p / v);
  } else {
    i += std::conj(sl.s_p) * v / (kLowVoltage * kLowVoltage);
  }
  return i;
}

void Plant::source_current(const DynamicState& x, const Topology& topo, CVector& out) const {
  out.setZero(static_cast<long>(net_.n));
  for (std::size_t k = 0; k < machines_.size(); ++k) {
    if (!topo.machine_online[k]) continue;
    out(static_cast<long>(machines_[k].bus)) += machines_[k].y * machine_emf(x.machines[k]);
  }
  for (std::size_t k = 0; k < motors_.size(); ++k) {
    out(static_cast<long>(motors_[k].bus)) += motors_[k].y_sys * x.motors[k].emf;
  }
}

int Plant::solve_network(const DynamicState& x, const Topology& topo, std::vector<Complex>& v,
                         double tol, int max_iter) {
  const auto& lu = factor(topo);
  CVector src;
  source_current(x, topo, src);
  const std::size_t n = net_.n;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs_(static_cast<long>(i)) = src(static_cast<long>(i)) - nonlinear_current(i, v[i]);
    sol_ = lu.solve(rhs_);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = sol_(static_cast<long>(i));
      if (!std::isfinite(vi.real()) || !std::isfinite(vi.imag())) {
        throw GridError(GridErrc::NumericalDivergence, "non-finite bus voltage");
      }
      change = std::max(change, std::abs(vi - v[i]));
      v[i] = vi;
    }
    if (change < tol) return it;
  }
  throw GridError(GridErrc::AlgebraicNoConvergence,
                  "network solution did not converge in " + std::to_string(max_iter) + " iterations");
}

double Plant::electrical_power(std::size_t k, const MachineState& m, Complex v) const {
  const Complex e = machine_emf(m);
  return std::real(e * std::conj(machines_[k].y * (e - v)));
}

Complex Plant::motor_current(std::size_t k, Complex emf, Complex v) const {
  return (v - emf) / motors_[k].k.stator_z;
}

double Plant::motor_torque(std::size_t k, Complex emf, Complex v) const {
  return std::real(emf * std::conj(motor_current(k, emf, v)));
}

double Plant::load_torque(std::size_t k, const MotorState& m, double slip) const {
  return m.load_torque * std::pow(1.0 - slip, motors_[k].p.torque_exponent);
}

void Plant::derivatives(const DynamicState& x, const Topology& topo, Derivatives& out) const {
  out.delta.assign(machines_.size(), 0.0);
  out.omega.assign(machines_.size(), 0.0);
  for (std::size_t k = 0; k < machines_.size(); ++k) {
    if (!topo.machine_online[k]) continue;
    const MachineState& m = x.machines[k];
    const double pe = electrical_power(k, m, x.voltage[machines_[k].bus]);
    out.delta[k] = omega_s_ * m.omega;
    out.omega[k] = (m.mechanical_power - pe - machines_[k].d * m.omega) / (2.0 * machines_[k].h);
  }
  out.emf.assign(motors_.size(), Complex{});
  out.slip.assign(motors_.size(), 0.0);
  for (std::size_t k = 0; k < motors_.size(); ++k) {
    const MotorState& m = x.motors[k];
    const MotorUnit& u = motors_[k];
    const Complex v = x.voltage[u.bus];
    const Complex i = motor_current(k, m.emf, v);
    const double dx = u.k.open_circuit_x - u.k.transient_x;
    out.emf[k] = -(m.emf - kJ * dx * i) / u.k.transient_t0 - kJ * omega_s_ * m.slip * m.emf;
    out.slip[k] = (load_torque(k, m, m.slip) - std::real(m.emf * std::conj(i))) / (2.0 * u.p.inertia_h);
  }
}

double Plant::max_abs(const Derivatives& d) {
  double m = 0.0;
  for (double v : d.delta) m = std::max(m, std::abs(v));
  for (double v : d.omega) m = std::max(m, std::abs(v));
  for (Complex v : d.emf) m = std::max(m, std::abs(v));
  for (double v : d.slip) m = std::max(m, std::abs(v));
  return m;
}

double Plant::power_mismatch(const DynamicState& x, const Topology& topo) const {
  const std::size_t n = net_.n;
  CVector v(static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<long>(i)) = x.voltage[i];
  const CVector network = ybus_ * v;
  std::vector<Complex> inject(n, Complex{});
  for (std::size_t k = 0; k < machines_.size(); ++k) {
    if (!topo.machine_online[k]) continue;
    const std::size_t b = machines_[k].bus;
    inject[b] += machines_[k].y * (machine_emf(x.machines[k]) - x.voltage[b]);
  }
  for (std::size_t k = 0; k < motors_.size(); ++k) {
    const std::size_t b = motors_[k].bus;
    inject[b] -= x.motors[k].base * motor_current(k, x.motors[k].emf, x.voltage[b]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    inject[i] -= std::conj(loads_[i].s_z) * x.voltage[i] + nonlinear_current(i, x.voltage[i]);
  }
  if (topo.fault_bus) inject[*topo.fault_bus] -= topo.fault_y * x.voltage[*topo.fault_bus];
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex s = x.voltage[i] * std::conj(network(static_cast<long>(i)) - inject[i]);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace loadcorr::grid::detail
