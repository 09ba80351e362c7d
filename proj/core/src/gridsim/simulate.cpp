#include "loadcorr/gridsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loadcorr/gridsim/powerflow.hpp"
#include "plant.hpp"

namespace loadcorr::grid {

namespace {

constexpr Complex kJ{0.0, 1.0};

std::string trim_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double wrap_to_pi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

// Schedule of network configurations on the step grid.
class Schedule {
 public:
  Schedule(const NetworkCase& c, const Disturbance& d, double dt, const detail::Plant& plant)
      : base_(plant.base_topology()) {
    if (const auto* f = std::get_if<BusFault>(&d)) {
      if (!c.bus_index(f->bus)) {
        throw GridError(GridErrc::InvalidDisturbance, "fault on unknown bus " + std::to_string(f->bus));
      }
      if (!(f->t_apply >= 0.0) || !(f->t_clear > f->t_apply)) {
        throw GridError(GridErrc::InvalidDisturbance, "fault needs 0 <= t_apply < t_clear");
      }
      if (!(f->fault_admittance > 0.0) || !std::isfinite(f->fault_admittance)) {
        throw GridError(GridErrc::InvalidDisturbance, "fault admittance must be positive");
      }
      first_ = std::llround(f->t_apply / dt);
      last_ = std::llround(f->t_clear / dt);
      if (last_ <= first_) {
        throw GridError(GridErrc::InvalidDisturbance, "fault window is shorter than one step");
      }
      event_ = base_;
      event_.fault_bus = plant.network().index_of(f->bus);
      event_.fault_y = Complex(0.0, -f->fault_admittance);
    } else if (const auto* g = std::get_if<GeneratorOutage>(&d)) {
      if (g->machine >= c.machines.size()) {
        throw GridError(GridErrc::InvalidDisturbance, "no machine with index " + std::to_string(g->machine));
      }
      if (!(g->t_trip >= 0.0) || !std::isfinite(g->t_trip)) {
        throw GridError(GridErrc::InvalidDisturbance, "trip time must be non-negative");
      }
      first_ = std::llround(g->t_trip / dt);
      last_ = -1;
      event_ = base_;
      event_.machine_online[g->machine] = 0;
    }
  }

  const detail::Topology& at(long long k) const {
    if (first_ < 0 || k < first_) return base_;
    if (last_ < 0 || k < last_) return event_;
    return base_;
  }

 private:
  detail::Topology base_;
  detail::Topology event_;
  long long first_ = -1;
  long long last_ = -1;
};

struct Recorder {
  std::vector<std::size_t> buses;
  std::vector<std::size_t> branches;
  std::vector<std::vector<double>> vm, ang, freq, p, q;
  std::vector<double> theta;   // unwrapped angle, post-event
  std::vector<double> filter;  // low-pass of theta

  void reserve(std::size_t samples) {
    for (auto* group : {&vm, &ang, &freq}) {
      group->assign(buses.size(), {});
      for (auto& s : *group) s.reserve(samples);
    }
    for (auto* group : {&p, &q}) {
      group->assign(branches.size(), {});
      for (auto& s : *group) s.reserve(samples);
    }
  }
};

}  // namespace

std::string describe(const Disturbance& d) {
  if (const auto* f = std::get_if<BusFault>(&d)) {
    return "fault bus " + std::to_string(f->bus) + " [" + trim_number(f->t_apply) + ", " +
           trim_number(f->t_clear) + ") y=" + trim_number(f->fault_admittance);
  }
  if (const auto* g = std::get_if<GeneratorOutage>(&d)) {
    return "trip machine " + std::to_string(g->machine) + " at " + trim_number(g->t_trip);
  }
  return "none";
}

std::vector<SourceId> ResponseSet::sources(ChannelKind kind) const {
  std::vector<SourceId> out;
  for (const auto& ts : of(kind)) out.push_back(ts.source());
  return out;
}

std::size_t ResponseSet::samples() const {
  for (const auto& group : series) {
    if (!group.empty()) return group.front().size();
  }
  return 0;
}

const TimeSeries& channel(const ResponseSet& rs, ChannelKind kind, const SourceId& source) {
  for (const auto& ts : rs.of(kind)) {
    if (ts.source() == source) return ts;
  }
  throw GridError(GridErrc::UnknownSource, "no " + std::string(abbreviation(kind)) +
                                               " series for source '" + source + "'");
}

ResponseSet truncate(const ResponseSet& rs, double span) {
  ResponseSet out;
  out.case_name = rs.case_name;
  out.disturbance = rs.disturbance;
  out.dt = rs.dt;
  out.span = span;
  out.seed = rs.seed;
  out.max_power_mismatch = rs.max_power_mismatch;
  out.min_slip = rs.min_slip;
  out.max_slip = rs.max_slip;
  out.max_iterations_used = rs.max_iterations_used;
  for (std::size_t k = 0; k < rs.series.size(); ++k) {
    out.series[k].reserve(rs.series[k].size());
    for (const auto& ts : rs.series[k]) out.series[k].push_back(loadcorr::truncate(ts, span));
  }
  return out;
}

ResponseSet run_simulation(const NetworkCase& c, const Disturbance& d, const SimulationOptions& opts) {
  if (!(opts.dt > 0.0) || !(opts.span > 0.0) || !std::isfinite(opts.span)) {
    throw GridError(GridErrc::InvalidDisturbance, "span and dt must be positive");
  }
  const OperatingPoint op = solve_power_flow(c);
  detail::Plant plant(c, op);
  const detail::CompiledNetwork& net = plant.network();
  const Schedule schedule(c, d, opts.dt, plant);
  const double h = opts.dt;
  const double tau = opts.frequency_filter;
  const double decay = std::exp(-h / tau);
  const double f0 = plant.frequency();
  const double ws = plant.omega_s();
  const std::size_t samples = samples_for_span(opts.span, opts.dt);

  Recorder rec;
  for (BusId id : c.load_buses()) rec.buses.push_back(net.index_of(id));
  std::vector<std::string> branch_names;
  if (opts.branches.empty()) {
    for (std::size_t k = 0; k < c.branches.size(); ++k) rec.branches.push_back(k);
  } else {
    for (const auto& name : opts.branches) {
      const auto it = std::find_if(c.branches.begin(), c.branches.end(),
                                   [&](const Branch& b) { return b.name == name; });
      if (it == c.branches.end()) throw GridError(GridErrc::UnknownSource, "no branch named '" + name + "'");
      rec.branches.push_back(static_cast<std::size_t>(it - c.branches.begin()));
    }
  }
  rec.reserve(samples);

  DynamicState x = plant.initial();
  ResponseSet rs;
  rs.case_name = c.name;
  rs.disturbance = d;
  rs.dt = h;
  rs.span = opts.span;
  rs.seed = opts.seed;
  rs.min_slip = 1.0;
  rs.max_slip = 0.0;
  for (const auto& m : x.motors) {
    rs.min_slip = std::min(rs.min_slip, m.slip);
    rs.max_slip = std::max(rs.max_slip, m.slip);
  }
  if (x.motors.empty()) rs.min_slip = rs.max_slip = 0.0;

  auto record = [&] {
    for (std::size_t b = 0; b < rec.buses.size(); ++b) {
      const Complex v = x.voltage[rec.buses[b]];
      rec.vm[b].push_back(std::abs(v));
      rec.ang[b].push_back(rec.theta[b]);
      rec.freq[b].push_back(f0 + (rec.theta[b] - rec.filter[b]) / (2.0 * std::numbers::pi * tau));
    }
    for (std::size_t k = 0; k < rec.branches.size(); ++k) {
      const auto& br = net.branches[rec.branches[k]];
      const Complex s = x.voltage[br.from] * std::conj(net.from_current(rec.branches[k], x.voltage));
      rec.p[k].push_back(s.real());
      rec.q[k].push_back(s.imag());
    }
  };

  // The first sample already reflects an event scheduled at t = 0.
  if (!(schedule.at(0) == plant.base_topology())) {
    plant.solve_network(x, schedule.at(0), x.voltage, opts.tolerance, opts.max_iterations);
  }
  for (std::size_t b = 0; b < rec.buses.size(); ++b) {
    rec.theta.push_back(std::arg(x.voltage[rec.buses[b]]));
    rec.filter.push_back(rec.theta.back());
  }
  rs.max_power_mismatch = plant.power_mismatch(x, schedule.at(0));
  record();

  const std::size_t n = net.n;
  const auto& machines = plant.machines();
  const auto& motors = plant.motors();
  detail::Derivatives fn;
  detail::CVector src;
  detail::CVector rhs(static_cast<long>(n));
  std::vector<Complex> v_prev = x.voltage;
  std::vector<double> theta_minus(rec.buses.size());

  for (std::size_t k = 0; k + 1 < samples; ++k) {
    const auto step = static_cast<long long>(k);
    const detail::Topology& topo = schedule.at(step);
    const auto& lu = plant.factor(topo);
    plant.derivatives(x, topo, fn);

    // Explicit predictor; voltages extrapolated when no event sits at k.
    DynamicState y = x;
    for (std::size_t m = 0; m < machines.size(); ++m) {
      y.machines[m].delta += h * fn.delta[m];
      y.machines[m].omega += h * fn.omega[m];
    }
    for (std::size_t m = 0; m < motors.size(); ++m) {
      y.motors[m].emf += h * fn.emf[m];
      y.motors[m].slip += h * fn.slip[m];
    }
    if (k > 0 && schedule.at(step - 1) == topo) {
      for (std::size_t i = 0; i < n; ++i) y.voltage[i] = 2.0 * x.voltage[i] - v_prev[i];
    }

    int it = 0;
    for (;; ++it) {
      if (it >= opts.max_iterations) {
        throw GridError(GridErrc::AlgebraicNoConvergence,
                        "step at t=" + trim_number(static_cast<double>(k + 1) * h) +
                            " did not converge in " + std::to_string(opts.max_iterations) + " iterations");
      }
      plant.source_current(y, topo, src);
      for (std::size_t i = 0; i < n; ++i) {
        rhs(static_cast<long>(i)) = src(static_cast<long>(i)) - plant.nonlinear_current(i, y.voltage[i]);
      }
      const detail::CVector vnew = lu.solve(rhs);
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Complex vi = vnew(static_cast<long>(i));
        change = std::max(change, std::abs(vi - y.voltage[i]));
        y.voltage[i] = vi;
      }

      for (std::size_t m = 0; m < machines.size(); ++m) {
        if (!topo.machine_online[m]) continue;
        const auto& u = machines[m];
        const MachineState& old = x.machines[m];
        MachineState& cur = y.machines[m];
        const double pe = plant.electrical_power(m, cur, y.voltage[u.bus]);
        const double c = h / (4.0 * u.h);
        const double omega = (old.omega + 0.5 * h * fn.omega[m] + c * (cur.mechanical_power - pe)) / (1.0 + c * u.d);
        const double delta = old.delta + 0.5 * h * ws * (old.omega + omega);
        change = std::max({change, std::abs(omega - cur.omega), std::abs(delta - cur.delta)});
        cur.omega = omega;
        cur.delta = delta;
      }

      for (std::size_t m = 0; m < motors.size(); ++m) {
        const auto& u = motors[m];
        const MotorState& old = x.motors[m];
        MotorState& cur = y.motors[m];
        const Complex v = y.voltage[u.bus];
        // dE'/dt is linear in E' for fixed slip and voltage.
        const Complex a = -1.0 / u.k.transient_t0 - u.beta - kJ * ws * cur.slip;
        const Complex emf = (old.emf + 0.5 * h * fn.emf[m] + 0.5 * h * u.beta * v) / (1.0 - 0.5 * h * a);
        const double te = plant.motor_torque(m, emf, v);
        const double c = h / (4.0 * u.p.inertia_h);
        const double kexp = u.p.torque_exponent;
        double s = cur.slip;
        for (int nt = 0; nt < 8; ++nt) {
          const double base = std::max(1.0 - s, 0.0);
          const double g = s - old.slip - 0.5 * h * fn.slip[m] - c * (old.load_torque * std::pow(base, kexp) - te);
          const double dg = 1.0 + c * old.load_torque * kexp * std::pow(base, kexp - 1.0);
          const double ds = g / dg;
          s -= ds;
          if (std::abs(ds) < 1e-15) break;
        }
        change = std::max({change, std::abs(emf - cur.emf), std::abs(s - cur.slip)});
        cur.emf = emf;
        cur.slip = s;
      }

      if (!std::isfinite(change)) {
        throw GridError(GridErrc::NumericalDivergence,
                        "non-finite state at t=" + trim_number(static_cast<double>(k + 1) * h));
      }
      if (change < opts.tolerance) break;
    }
    rs.max_iterations_used = std::max(rs.max_iterations_used, it + 1);

    v_prev = x.voltage;
    x = std::move(y);

    // Low-pass of the angle across the step, angle linear from the post-event
    // value at k to the pre-event value at k+1.
    for (std::size_t b = 0; b < rec.buses.size(); ++b) {
      const double theta_a = rec.theta[b];
      const double theta_b = theta_a + wrap_to_pi(std::arg(x.voltage[rec.buses[b]]) - theta_a);
      rec.filter[b] = theta_b + (rec.filter[b] - theta_a) * decay -
                      tau * (theta_b - theta_a) / h * (1.0 - decay);
      theta_minus[b] = theta_b;
    }

    const detail::Topology& next = schedule.at(step + 1);
    if (!(next == topo)) {
      plant.solve_network(x, next, x.voltage, opts.tolerance, opts.max_iterations);
      v_prev = x.voltage;
    }
    for (std::size_t b = 0; b < rec.buses.size(); ++b) {
      rec.theta[b] = theta_minus[b] + wrap_to_pi(std::arg(x.voltage[rec.buses[b]]) - theta_minus[b]);
    }
    for (const auto& m : x.motors) {
      rs.min_slip = std::min(rs.min_slip, m.slip);
      rs.max_slip = std::max(rs.max_slip, m.slip);
    }
    for (Complex v : x.voltage) {
      if (!(std::abs(v) < 1e3)) {
        throw GridError(GridErrc::NumericalDivergence,
                        "bus voltage diverged at t=" + trim_number(static_cast<double>(k + 1) * h));
      }
    }
    rs.max_power_mismatch = std::max(rs.max_power_mismatch, plant.power_mismatch(x, next));
    record();
  }

  auto emit = [&](ChannelKind kind, std::vector<std::vector<double>>& data, bool bus) {
    auto& out = rs.series[static_cast<std::size_t>(kind)];
    for (std::size_t k = 0; k < data.size(); ++k) {
      const SourceId source = bus ? std::to_string(net.ids[rec.buses[k]]) : c.branches[rec.branches[k]].name;
      out.emplace_back(0.0, h, std::move(data[k]), kind, source);
    }
  };
  emit(ChannelKind::VoltageMagnitude, rec.vm, true);
  emit(ChannelKind::VoltageAngle, rec.ang, true);
  emit(ChannelKind::Frequency, rec.freq, true);
  emit(ChannelKind::LineActivePower, rec.p, false);
  emit(ChannelKind::LineReactivePower, rec.q, false);
  return rs;
}

}  // namespace loadcorr::grid
