#include "loadcorr/gridsim/cases.hpp"

#include <array>
#include <vector>

namespace loadcorr::grid {

namespace {

void add_branch(NetworkCase& c, BusId from, BusId to, double r, double x, double b) {
  Branch br;
  br.from = from;
  br.to = to;
  br.series_impedance = {r, x};
  br.charging = b;
  c.branches.push_back(br);
}

void add_zip_load(NetworkCase& c, BusId bus, double p, double q) {
  c.loads[bus] = Load{p, q, ZipParams{}};
}

void add_composite_load(NetworkCase& c, BusId bus, double p, double q) {
  c.loads[bus] = Load{p, q, CompositeParams{}};
}

}  // namespace

NetworkCase make_nine_bus_case() {
  NetworkCase c;
  c.name = "ninebus";
  c.base_mva = 100.0;
  c.frequency = 60.0;
  c.buses = {
      {1, BusKind::Slack, 1.04, {}}, {2, BusKind::PV, 1.025, {}}, {3, BusKind::PV, 1.025, {}},
      {4, BusKind::PQ, 1.0, {}},     {5, BusKind::PQ, 1.0, {}},   {6, BusKind::PQ, 1.0, {}},
      {7, BusKind::PQ, 1.0, {}},     {8, BusKind::PQ, 1.0, {}},   {9, BusKind::PQ, 1.0, {}},
  };
  add_branch(c, 1, 4, 0.0, 0.0576, 0.0);
  add_branch(c, 4, 5, 0.010, 0.085, 0.176);
  add_branch(c, 4, 6, 0.017, 0.092, 0.158);
  add_branch(c, 5, 7, 0.032, 0.161, 0.306);
  add_branch(c, 6, 9, 0.039, 0.170, 0.358);
  add_branch(c, 7, 8, 0.0085, 0.072, 0.149);
  add_branch(c, 8, 9, 0.0119, 0.1008, 0.209);
  add_branch(c, 2, 7, 0.0, 0.0625, 0.0);
  add_branch(c, 3, 9, 0.0, 0.0586, 0.0);
  assign_branch_names(c);

  // Inertia raised above the textbook values and D sized like a stiff
  // governor droop, so that the electromechanical modes settle within 30 s.
  c.machines = {
      {1, 30.0, 90.0, 0.0608, 0.0},
      {2, 16.0, 60.0, 0.1198, 2.0},
      {3, 10.0, 37.5, 0.1813, 1.2},
  };

  add_zip_load(c, 4, 0.40, 0.10);
  add_composite_load(c, 5, 1.25, 0.50);
  add_zip_load(c, 6, 0.90, 0.30);
  add_zip_load(c, 7, 0.50, 0.15);
  add_composite_load(c, 8, 1.00, 0.35);
  add_zip_load(c, 9, 0.45, 0.12);
  return c;
}

namespace {

struct UnitType {
  double mw;
  double mva;
  double h;        // s, machine base
  double xd_prime; // pu, machine base
};

constexpr UnitType kU12{12, 15, 2.0, 0.25};
constexpr UnitType kU20{20, 25, 1.5, 0.20};
constexpr UnitType kU50{50, 55, 3.0, 0.30};
constexpr UnitType kU76{76, 90, 3.0, 0.25};
constexpr UnitType kU100{100, 120, 3.0, 0.25};
constexpr UnitType kU155{155, 180, 3.5, 0.25};
constexpr UnitType kU197{197, 230, 3.5, 0.25};
constexpr UnitType kU350{350, 400, 4.0, 0.25};
constexpr UnitType kU400{400, 460, 5.0, 0.30};
constexpr UnitType kSyncon{0, 200, 1.5, 0.30};

struct GenBus {
  int bus;
  double vset;
  std::vector<UnitType> units;
};

struct AreaBranch {
  int from, to;
  double r, x, b;
};

// One 24-bus area.
const std::array<AreaBranch, 38> kAreaBranches = {{
    {1, 2, 0.0026, 0.0139, 0.4611},  {1, 3, 0.0546, 0.2112, 0.0572},  {1, 5, 0.0218, 0.0845, 0.0229},
    {2, 4, 0.0328, 0.1267, 0.0343},  {2, 6, 0.0497, 0.1920, 0.0520},  {3, 9, 0.0308, 0.1190, 0.0322},
    {3, 24, 0.0023, 0.0839, 0.0},    {4, 9, 0.0268, 0.1037, 0.0281},  {5, 10, 0.0228, 0.0883, 0.0239},
    {6, 10, 0.0139, 0.0605, 2.4590}, {7, 8, 0.0159, 0.0614, 0.0166},  {8, 9, 0.0427, 0.1651, 0.0447},
    {8, 10, 0.0427, 0.1651, 0.0447}, {9, 11, 0.0023, 0.0839, 0.0},    {9, 12, 0.0023, 0.0839, 0.0},
    {10, 11, 0.0023, 0.0839, 0.0},   {10, 12, 0.0023, 0.0839, 0.0},   {11, 13, 0.0061, 0.0476, 0.0999},
    {11, 14, 0.0054, 0.0418, 0.0879}, {12, 13, 0.0061, 0.0476, 0.0999}, {12, 23, 0.0124, 0.0966, 0.2030},
    {13, 23, 0.0111, 0.0865, 0.1818}, {14, 16, 0.0050, 0.0389, 0.0818}, {15, 16, 0.0022, 0.0173, 0.0364},
    {15, 21, 0.0063, 0.0490, 0.1030}, {15, 21, 0.0063, 0.0490, 0.1030}, {15, 24, 0.0067, 0.0519, 0.1091},
    {16, 17, 0.0033, 0.0259, 0.0545}, {16, 19, 0.0030, 0.0231, 0.0485}, {17, 18, 0.0018, 0.0144, 0.0303},
    {17, 22, 0.0135, 0.1053, 0.2212}, {18, 21, 0.0033, 0.0259, 0.0545}, {18, 21, 0.0033, 0.0259, 0.0545},
    {19, 20, 0.0051, 0.0396, 0.0833}, {19, 20, 0.0051, 0.0396, 0.0833}, {20, 23, 0.0028, 0.0216, 0.0455},
    {20, 23, 0.0028, 0.0216, 0.0455}, {21, 22, 0.0087, 0.0678, 0.1424},
}};

// Load buses of one area, MW / MVAr.
const std::array<std::array<double, 3>, 17> kAreaLoads = {{
    {1, 108, 22},  {2, 97, 20},   {3, 180, 37},  {4, 74, 15},   {5, 71, 14},   {6, 136, 28},
    {7, 125, 25},  {8, 171, 35},  {9, 175, 36},  {10, 195, 40}, {13, 265, 54}, {14, 194, 39},
    {15, 317, 64}, {16, 100, 20}, {18, 333, 68}, {19, 181, 37}, {20, 128, 26},
}};

std::vector<GenBus> area_generators() {
  return {
      {1, 1.035, {kU20, kU20, kU76, kU76}},
      {2, 1.035, {kU20, kU20, kU76, kU76}},
      {7, 1.025, {kU100, kU100, kU100}},
      {13, 1.020, {kU197, kU197, kU197}},
      {14, 0.980, {kSyncon}},
      {15, 1.014, {kU12, kU12, kU12, kU12, kU12, kU155}},
      {16, 1.017, {kU155}},
      {18, 1.050, {kU400}},
      {21, 1.050, {kU400}},
      {22, 1.050, {kU50, kU50, kU50, kU50, kU50, kU50}},
      {23, 1.050, {kU155, kU155, kU350}},
  };
}

}  // namespace

NetworkCase make_rts73_case() {
  NetworkCase c;
  c.name = "rts73";
  c.base_mva = 100.0;
  c.frequency = 60.0;

  const auto gens = area_generators();
  double gen_mw = 0.0;
  for (const auto& g : gens) {
    for (const auto& u : g.units) gen_mw += u.mw;
  }
  double load_mw = 0.0;
  for (const auto& l : kAreaLoads) load_mw += l[1];
  const double scale = load_mw / gen_mw;

  constexpr double kDampingPerUnitBase = 20.0;  // pu power / pu speed on machine base
  for (int area = 1; area <= 3; ++area) {
    const int offset = 100 * area;
    for (int b = 1; b <= 24; ++b) {
      Bus bus;
      bus.id = offset + b;
      bus.kind = BusKind::PQ;
      for (const auto& g : gens) {
        if (g.bus == b) {
          bus.kind = BusKind::PV;
          bus.voltage_setpoint = g.vset;
        }
      }
      if (area == 1 && b == 13) bus.kind = BusKind::Slack;
      if (b == 6) bus.shunt = {0.0, -1.0};
      c.buses.push_back(bus);
    }
    for (const auto& br : kAreaBranches) {
      add_branch(c, offset + br.from, offset + br.to, br.r, br.x, br.b);
    }
    for (const auto& l : kAreaLoads) {
      add_zip_load(c, offset + static_cast<int>(l[0]), l[1] / c.base_mva, l[2] / c.base_mva);
    }
    for (const auto& g : gens) {
      double mva = 0.0, h_mva = 0.0, y = 0.0, mw = 0.0;
      for (const auto& u : g.units) {
        mva += u.mva;
        h_mva += u.h * u.mva;
        y += u.mva / (c.base_mva * u.xd_prime);
        mw += u.mw;
      }
      Machine m;
      m.bus = offset + g.bus;
      m.inertia_h = h_mva / c.base_mva;
      m.damping_d = kDampingPerUnitBase * mva / c.base_mva;
      m.transient_reactance = 1.0 / y;
      m.mechanical_power = mw * scale / c.base_mva;
      c.machines.push_back(m);
    }
  }
  c.buses.push_back({325, BusKind::PQ, 1.0, {}});

  add_branch(c, 107, 203, 0.0420, 0.1610, 0.0440);
  add_branch(c, 113, 215, 0.0100, 0.0750, 0.1580);
  add_branch(c, 123, 217, 0.0104, 0.0970, 0.2000);
  add_branch(c, 121, 325, 0.0012, 0.0097, 0.0202);
  add_branch(c, 325, 318, 0.0012, 0.0097, 0.0202);
  add_branch(c, 223, 318, 0.0124, 0.0966, 0.2030);
  assign_branch_names(c);
  return c;
}

}  // namespace loadcorr::grid
