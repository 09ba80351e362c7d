#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace loadcorr::grid {

using BusId = int;
using Complex = std::complex<double>;

enum class GridErrc {
  InvalidCase,
  CaseParseError,
  NoConvergence,
  NoEquilibrium,
  NumericalDivergence,
  AlgebraicNoConvergence,
  UnknownSource,
  InvalidDisturbance,
};

std::string_view to_string(GridErrc code);

class GridError : public std::runtime_error {
 public:
  GridError(GridErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  GridErrc code() const noexcept { return code_; }

 private:
  GridErrc code_;
};

enum class BusKind { Slack, PV, PQ };

std::string_view to_string(BusKind kind);

struct Bus {
  BusId id = 0;
  BusKind kind = BusKind::PQ;
  double voltage_setpoint = 1.0;  // pu, used by Slack and PV buses
  Complex shunt{0.0, 0.0};        // pu admittance G + jB
};

struct Branch {
  std::string name;  // source id for P/Q channels
  BusId from = 0;
  BusId to = 0;
  Complex series_impedance{0.0, 0.1};  // pu
  double charging = 0.0;               // total line charging susceptance, pu
  double rating = 0.0;                 // pu, informational
};

/// Classical machine: constant EMF behind transient reactance.
struct Machine {
  BusId bus = 0;
  double inertia_h = 5.0;         // s, on system base
  double damping_d = 0.0;         // pu power / pu speed
  double transient_reactance = 0.3;  // pu
  double mechanical_power = 0.0;  // pu; the slack machine's is set by the power flow
};

struct ZipParams {
  double p_z = 0.4, p_i = 0.3, p_p = 0.3;
  double q_z = 0.4, q_i = 0.3, q_p = 0.3;

  friend bool operator==(const ZipParams&, const ZipParams&) = default;
};

/// Single-cage induction motor, impedances in pu on the motor's own base.
/// The motor base is the motor's share of load active power divided by
/// load_factor.
struct MotorParams {
  double stator_r = 0.01;
  double stator_x = 0.15;
  double magnetizing_x = 3.5;
  double rotor_r = 0.008;
  double rotor_x = 0.15;
  double inertia_h = 1.0;
  double torque_exponent = 2.0;
  double load_factor = 0.8;

  friend bool operator==(const MotorParams&, const MotorParams&) = default;
};

/// ZIP + induction motor + constant-power electronic fraction.
struct CompositeParams {
  ZipParams zip;
  double motor_fraction = 0.5;       // of load active power
  double electronic_fraction = 0.1;  // of load active power, unity power factor
  MotorParams motor;

  friend bool operator==(const CompositeParams&, const CompositeParams&) = default;
};

using LoadModel = std::variant<ZipParams, CompositeParams>;

enum class LoadKind { Zip, Composite };

inline LoadKind kind_of(const LoadModel& m) {
  return std::holds_alternative<ZipParams>(m) ? LoadKind::Zip : LoadKind::Composite;
}
std::string_view to_string(LoadKind kind);

/// Load demand at nominal voltage and the model that shapes its response.
struct Load {
  double p = 0.0;  // pu
  double q = 0.0;  // pu
  LoadModel model = ZipParams{};
};

struct NetworkCase {
  std::string name;
  double base_mva = 100.0;
  double frequency = 60.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Machine> machines;
  std::map<BusId, Load> loads;

  std::optional<std::size_t> bus_index(BusId id) const;
  const Bus& bus(BusId id) const;
  /// Load bus ids in ascending order.
  std::vector<BusId> load_buses() const;
};

/// Throws GridError(InvalidCase) naming the first violated invariant.
void validate(const NetworkCase& c);

/// Fills empty branch names with "from-to", adding "#k" to duplicates.
void assign_branch_names(NetworkCase& c);

}  // namespace loadcorr::grid
