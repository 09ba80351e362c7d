#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "loadcorr/gridsim/case_io.hpp"
#include "loadcorr/gridsim/cases.hpp"
#include "loadcorr/gridsim/dynamics.hpp"
#include "loadcorr/gridsim/powerflow.hpp"
#include "loadcorr/gridsim/simulate.hpp"
#include "oracles/circuits.hpp"

using namespace loadcorr;
using namespace loadcorr::grid;

namespace {

template <typename F>
void expect_errc(F f, GridErrc code) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const GridError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

NetworkCase two_bus(Complex z, double p, double q) {
  NetworkCase c;
  c.name = "two-bus";
  c.buses = {{1, BusKind::Slack, 1.0, {}}, {2, BusKind::PQ, 1.0, {}}};
  c.branches = {{"1-2", 1, 2, z, 0.0, 0.0}};
  c.machines = {{1, 5.0, 0.0, 0.3, 0.0}};
  ZipParams constant_power{0, 0, 1, 0, 0, 1};
  c.loads[2] = {p, q, constant_power};
  return c;
}

const NetworkCase& nine_bus() {
  static const NetworkCase c = make_nine_bus_case();
  return c;
}

// Max deviation of any series in any channel from its first sample.
double max_drift(const ResponseSet& rs) {
  double worst = 0;
  for (const auto& chan : rs.series) {
    for (const auto& ts : chan) {
      for (double v : ts.values()) worst = std::max(worst, std::abs(v - ts[0]));
    }
  }
  return worst;
}

}  // namespace

TEST(CaseIo, RoundTrip) {
  for (const auto& c : {make_nine_bus_case(), make_rts73_case()}) {
    const std::string text = case_to_json(c);
    const auto back = case_from_json(text);
    EXPECT_EQ(case_to_json(back), text);
    EXPECT_EQ(back.buses.size(), c.buses.size());
    EXPECT_EQ(back.load_buses(), c.load_buses());
  }
}

TEST(CaseIo, BundledShapes) {
  const auto rts = make_rts73_case();
  EXPECT_EQ(rts.buses.size(), 73u);
  EXPECT_EQ(rts.loads.size(), 51u);
  EXPECT_EQ(nine_bus().buses.size(), 9u);
  EXPECT_EQ(nine_bus().loads.size(), 6u);
}

TEST(CaseIo, Errors) {
  expect_errc([] { case_from_json("{ \"buses\": [ }"); }, GridErrc::CaseParseError);
  expect_errc([] { case_from_json(R"({"buses": [{"id": 1, "kind": "swing"}]})"); }, GridErrc::CaseParseError);
  expect_errc(
      [] {
        case_from_json(R"({"base_mva": 100, "frequency": 60,
                          "buses": [{"id": 1, "kind": "slack"}, {"id": 2, "kind": "pq"}],
                          "branches": [{"from": 1, "to": 3, "x": 0.1}],
                          "machines": [{"bus": 1, "H": 5, "xd_prime": 0.3}], "loads": {}})");
      },
      GridErrc::InvalidCase);
  expect_errc([] { load_case("/nonexistent/case.json"); }, GridErrc::CaseParseError);
}

TEST(CaseIo, ContentHashIsFnv1a) {
  EXPECT_EQ(content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
}

TEST(PowerFlow, SingleSlack) {
  NetworkCase c;
  c.buses = {{1, BusKind::Slack, 1.02, {}}};
  c.machines = {{1, 5.0, 0.0, 0.3, 0.0}};
  const auto op = solve_power_flow(c);
  EXPECT_NEAR(std::abs(op.voltage[0] - Complex(1.02, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(op.generation[0]), 0.0, 1e-12);
}

TEST(PowerFlow, TwoBusMatchesGridSearch) {
  for (auto [z, s] : {std::pair{Complex(0, 0.1), Complex(1.0, 0.0)},
                      std::pair{Complex(0.02, 0.1), Complex(0.8, 0.3)},
                      std::pair{Complex(0.01, 0.2), Complex(0.5, -0.1)}}) {
    const auto op = solve_power_flow(two_bus(z, s.real(), s.imag()));
    EXPECT_LT(op.max_mismatch, 1e-8);
    const auto ref = oracle::two_bus_grid_search(z, s);
    EXPECT_NEAR(std::abs(op.voltage[1] - ref), 0.0, 1e-6) << z << " " << s;
  }
}

TEST(PowerFlow, InfeasibleLoadDoesNotConverge) {
  expect_errc([] { solve_power_flow(two_bus({0, 0.1}, 50.0, 0.0)); }, GridErrc::NoConvergence);
}

TEST(PowerFlow, BundledCasesConverge) {
  EXPECT_LT(solve_power_flow(nine_bus()).max_mismatch, 1e-8);
  EXPECT_LT(solve_power_flow(make_rts73_case()).max_mismatch, 1e-8);
}

TEST(Motor, InputPowerMatchesEquivalentCircuit) {
  const MotorParams m;
  for (double s : {0.001, 0.01, 0.05, 0.3}) {
    for (double vm : {0.7, 1.0, 1.05}) {
      EXPECT_NEAR(motor_input_power(m, vm, s),
                  oracle::motor_input_power(m.stator_r, m.stator_x, m.magnetizing_x, m.rotor_r, m.rotor_x, vm, s),
                  1e-12);
    }
  }
  // Motoring draws real power.
  EXPECT_GT(motor_input_power(m, 1.0, 0.01), 0.0);
}

TEST(Motor, SlipMatchesDenseScan) {
  MotorParams m;
  for (double vm : {0.95, 1.0, 1.04}) {
    auto power = [&](double s) {
      return oracle::motor_input_power(m.stator_r, m.stator_x, m.magnetizing_x, m.rotor_r, m.rotor_x, vm, s);
    };
    const double ref = oracle::scan_root(power, m.load_factor, 1e-7);
    EXPECT_NEAR(solve_motor_slip(m, vm), ref, 1e-6) << vm;
  }
}

TEST(Motor, NoEquilibriumForHugeRotorResistance) {
  MotorParams m;
  m.rotor_r = 50.0;
  expect_errc([&] { solve_motor_slip(m, 1.0); }, GridErrc::NoEquilibrium);
}

TEST(Dynamics, InitialStateIsEquilibrium) {
  for (const auto& c : {make_nine_bus_case(), make_rts73_case()}) {
    const auto st = init_dynamics(c, solve_power_flow(c));
    EXPECT_LT(st.max_derivative, 1e-9) << c.name;
  }
}

TEST(Simulation, FlatWithoutDisturbance) {
  SimulationOptions opts;
  opts.span = 30.0;
  const auto rs = run_simulation(nine_bus(), NoDisturbance{}, opts);
  EXPECT_EQ(rs.samples(), 3001u);
  EXPECT_LT(max_drift(rs), 1e-6);
  EXPECT_LT(rs.max_power_mismatch, 1e-6);
  EXPECT_GT(rs.min_slip, 0.0);
  EXPECT_LT(rs.max_slip, 1.0);
}

TEST(Simulation, InitialVoltageMatchesPowerFlow) {
  const auto op = solve_power_flow(nine_bus());
  const auto rs = run_simulation(nine_bus(), NoDisturbance{}, {.span = 1.0});
  for (BusId b : nine_bus().load_buses()) {
    const auto& v = channel(rs, ChannelKind::VoltageMagnitude, std::to_string(b));
    EXPECT_NEAR(v[0], std::abs(op.voltage[*nine_bus().bus_index(b)]), 1e-9) << b;
  }
}

TEST(Simulation, BusFaultDipAndRecovery) {
  SimulationOptions opts;
  opts.span = 30.0;
  const auto rs = run_simulation(nine_bus(), BusFault{5, 0.1, 0.2, 1e4}, opts);
  const auto& v = channel(rs, ChannelKind::VoltageMagnitude, "5");
  const double pre = v[0];
  double lowest_other_pre = 10;
  for (const auto& ts : rs.of(ChannelKind::VoltageMagnitude)) lowest_other_pre = std::min(lowest_other_pre, ts[0]);
  for (std::size_t k = 10; k < 20; ++k) {
    EXPECT_LT(v[k], 0.2 * pre) << "t=" << v.time_at(k);
    EXPECT_LT(v[k], lowest_other_pre);
  }
  EXPECT_LT(std::abs(v[v.size() - 1] - pre), 0.05 * pre);
  EXPECT_LT(rs.max_power_mismatch, 1e-6);
  EXPECT_GT(rs.min_slip, 0.0);
  EXPECT_LT(rs.max_slip, 1.0);
}

TEST(Simulation, HalvingStepChangesLittle) {
  const Disturbance d = BusFault{7, 0.1, 0.2, 1e4};
  const auto coarse = run_simulation(nine_bus(), d, {.span = 10.0, .dt = 0.01});
  const auto fine = run_simulation(nine_bus(), d, {.span = 10.0, .dt = 0.005});
  double worst = 0;
  for (std::size_t c = 0; c < 5; ++c) {
    ASSERT_EQ(coarse.series[c].size(), fine.series[c].size());
    for (std::size_t s = 0; s < coarse.series[c].size(); ++s) {
      const auto& a = coarse.series[c][s];
      const auto& b = fine.series[c][s];
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[2 * k]));
    }
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(Simulation, Deterministic) {
  const Disturbance d = BusFault{8, 0.1, 0.2, 1e4};
  const auto a = run_simulation(nine_bus(), d, {.span = 3.0});
  const auto b = run_simulation(nine_bus(), d, {.span = 3.0});
  EXPECT_EQ(a.series, b.series);
}

TEST(Simulation, GeneratorOutage) {
  const auto rs = run_simulation(nine_bus(), GeneratorOutage{2, 0.1}, {.span = 10.0});
  const auto& f = rs.of(ChannelKind::Frequency).front();
  double lowest = f[0];
  for (double x : f.values()) lowest = std::min(lowest, x);
  EXPECT_LT(lowest, f[0] - 1e-3);  // losing generation pulls frequency down
}

TEST(Simulation, Errors) {
  expect_errc([] { run_simulation(nine_bus(), BusFault{42, 0.1, 0.2, 1e4}); }, GridErrc::InvalidDisturbance);
  expect_errc([] { run_simulation(nine_bus(), BusFault{5, 0.2, 0.1, 1e4}); }, GridErrc::InvalidDisturbance);
  expect_errc([] { run_simulation(nine_bus(), GeneratorOutage{9, 0.1}); }, GridErrc::InvalidDisturbance);
  expect_errc([] { run_simulation(nine_bus(), NoDisturbance{}, {.branches = {"no-such"}}); }, GridErrc::UnknownSource);
  const auto rs = run_simulation(nine_bus(), NoDisturbance{}, {.span = 1.0});
  EXPECT_EQ(channel(rs, ChannelKind::VoltageMagnitude, "5").size(), 101u);
  expect_errc([&] { channel(rs, ChannelKind::LineActivePower, "5"); }, GridErrc::UnknownSource);
}

TEST(Simulation, TruncateKeepsPrefix) {
  const auto rs = run_simulation(nine_bus(), BusFault{5, 0.1, 0.2, 1e4}, {.span = 10.0});
  const auto cut = truncate(rs, 3.0);
  EXPECT_EQ(cut.samples(), 301u);
  const auto& a = cut.of(ChannelKind::VoltageAngle)[2];
  const auto& b = rs.of(ChannelKind::VoltageAngle)[2];
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}
