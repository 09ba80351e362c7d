#include "loadcorr/gridsim/case.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace loadcorr::grid {

std::string_view to_string(GridErrc code) {
  switch (code) {
    case GridErrc::InvalidCase: return "InvalidCase";
    case GridErrc::CaseParseError: return "CaseParseError";
    case GridErrc::NoConvergence: return "NoConvergence";
    case GridErrc::NoEquilibrium: return "NoEquilibrium";
    case GridErrc::NumericalDivergence: return "NumericalDivergence";
    case GridErrc::AlgebraicNoConvergence: return "AlgebraicNoConvergence";
    case GridErrc::UnknownSource: return "UnknownSource";
    case GridErrc::InvalidDisturbance: return "InvalidDisturbance";
  }
  return "?";
}

std::string_view to_string(BusKind kind) {
  switch (kind) {
    case BusKind::Slack: return "slack";
    case BusKind::PV: return "pv";
    case BusKind::PQ: return "pq";
  }
  return "?";
}

std::string_view to_string(LoadKind kind) {
  return kind == LoadKind::Zip ? "zip" : "composite";
}

std::optional<std::size_t> NetworkCase::bus_index(BusId id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return i;
  }
  return std::nullopt;
}

const Bus& NetworkCase::bus(BusId id) const {
  const auto idx = bus_index(id);
  if (!idx) throw GridError(GridErrc::InvalidCase, "unknown bus " + std::to_string(id));
  return buses[*idx];
}

std::vector<BusId> NetworkCase::load_buses() const {
  std::vector<BusId> ids;
  ids.reserve(loads.size());
  for (const auto& [id, load] : loads) ids.push_back(id);
  return ids;
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw GridError(GridErrc::InvalidCase, what); }

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_fraction_triplet(double a, double b, double c, const std::string& where) {
  for (double v : {a, b, c}) {
    if (!std::isfinite(v)) invalid(where + ": ZIP fraction is not finite");
  }
  if (std::abs(a + b + c - 1.0) > 1e-9) invalid(where + ": ZIP fractions must sum to 1");
}

void check_zip(const ZipParams& z, const std::string& where) {
  check_fraction_triplet(z.p_z, z.p_i, z.p_p, where + " (P)");
  check_fraction_triplet(z.q_z, z.q_i, z.q_p, where + " (Q)");
}

}  // namespace

void validate(const NetworkCase& c) {
  if (!(c.base_mva > 0.0)) invalid("base_mva must be positive");
  if (!(c.frequency > 0.0)) invalid("frequency must be positive");
  if (c.buses.empty()) invalid("case has no buses");

  std::set<BusId> ids;
  int slack_count = 0;
  for (const Bus& b : c.buses) {
    if (!ids.insert(b.id).second) invalid("duplicate bus id " + std::to_string(b.id));
    if (b.kind == BusKind::Slack) ++slack_count;
    if (b.kind != BusKind::PQ && !(b.voltage_setpoint > 0.5 && b.voltage_setpoint < 1.5)) {
      invalid("bus " + std::to_string(b.id) + ": voltage setpoint outside (0.5, 1.5) pu");
    }
    if (!finite(b.shunt)) invalid("bus " + std::to_string(b.id) + ": shunt is not finite");
  }
  if (slack_count != 1) invalid("case needs exactly one slack bus, found " + std::to_string(slack_count));

  std::set<std::string> names;
  for (const Branch& br : c.branches) {
    const std::string where = "branch " + br.name;
    if (!ids.count(br.from) || !ids.count(br.to)) invalid(where + ": unknown terminal bus");
    if (br.from == br.to) invalid(where + ": both ends on the same bus");
    if (!finite(br.series_impedance) || std::abs(br.series_impedance) == 0.0) {
      invalid(where + ": series impedance must be finite and non-zero");
    }
    if (br.series_impedance.imag() == 0.0) invalid(where + ": series reactance must be non-zero");
    if (!std::isfinite(br.charging)) invalid(where + ": charging is not finite");
    if (!br.name.empty() && !names.insert(br.name).second) invalid("duplicate branch name " + br.name);
  }

  // Connectivity by breadth-first search from the first bus.
  std::map<BusId, std::vector<BusId>> adj;
  for (const Branch& br : c.branches) {
    adj[br.from].push_back(br.to);
    adj[br.to].push_back(br.from);
  }
  std::set<BusId> seen{c.buses.front().id};
  std::queue<BusId> frontier;
  frontier.push(c.buses.front().id);
  while (!frontier.empty()) {
    const BusId u = frontier.front();
    frontier.pop();
    for (BusId v : adj[u]) {
      if (seen.insert(v).second) frontier.push(v);
    }
  }
  if (seen.size() != ids.size()) invalid("network is not connected");

  std::map<BusId, int> machines_at;
  for (const Machine& m : c.machines) {
    const std::string where = "machine at bus " + std::to_string(m.bus);
    if (!ids.count(m.bus)) invalid(where + ": unknown bus");
    if (c.bus(m.bus).kind == BusKind::PQ) invalid(where + ": machines must sit on slack or PV buses");
    if (!(m.inertia_h > 0.0)) invalid(where + ": H must be positive");
    if (!(m.transient_reactance > 0.0)) invalid(where + ": transient reactance must be positive");
    if (!(m.damping_d >= 0.0)) invalid(where + ": damping must be non-negative");
    if (!std::isfinite(m.mechanical_power)) invalid(where + ": mechanical power is not finite");
    ++machines_at[m.bus];
  }
  for (const Bus& b : c.buses) {
    if (b.kind != BusKind::PQ && machines_at[b.id] == 0) {
      invalid("bus " + std::to_string(b.id) + " is " + std::string(to_string(b.kind)) +
              " but has no machine");
    }
  }

  for (const auto& [bus_id, load] : c.loads) {
    const std::string where = "load at bus " + std::to_string(bus_id);
    if (!ids.count(bus_id)) invalid(where + ": unknown bus");
    if (!std::isfinite(load.p) || !std::isfinite(load.q)) invalid(where + ": demand is not finite");
    if (const auto* zip = std::get_if<ZipParams>(&load.model)) {
      check_zip(*zip, where);
    } else {
      const auto& comp = std::get<CompositeParams>(load.model);
      check_zip(comp.zip, where);
      if (!(comp.motor_fraction >= 0.0) || !(comp.electronic_fraction >= 0.0) ||
          comp.motor_fraction + comp.electronic_fraction > 1.0 + 1e-12) {
        invalid(where + ": motor and electronic fractions must be non-negative and sum to <= 1");
      }
      const MotorParams& mp = comp.motor;
      if (!(mp.stator_r >= 0.0) || !(mp.stator_x > 0.0) || !(mp.magnetizing_x > 0.0) ||
          !(mp.rotor_r > 0.0) || !(mp.rotor_x >= 0.0) || !(mp.inertia_h > 0.0) ||
          !(mp.load_factor > 0.0) || !std::isfinite(mp.torque_exponent)) {
        invalid(where + ": motor parameters out of range");
      }
    }
  }
}

void assign_branch_names(NetworkCase& c) {
  std::map<std::string, int> seen;
  for (const Branch& br : c.branches) {
    if (!br.name.empty()) seen[br.name] = 1;
  }
  for (Branch& br : c.branches) {
    if (!br.name.empty()) continue;
    const std::string base = std::to_string(br.from) + "-" + std::to_string(br.to);
    int& count = seen[base];
    br.name = count == 0 ? base : base + "#" + std::to_string(count + 1);
    ++count;
  }
}

}  // namespace loadcorr::grid
