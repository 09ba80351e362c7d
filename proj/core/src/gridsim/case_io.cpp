#include "loadcorr/gridsim/case_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace loadcorr::grid {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw GridError(GridErrc::CaseParseError, what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) parse_fail(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path + "." + key + ": missing field");
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) parse_fail(path + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, path);
}

int integer(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer()) parse_fail(path + "." + key + ": expected an integer");
  return v.get<int>();
}

std::array<double, 3> triplet(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    parse_fail(path + "." + key + ": expected [z, i, p] fractions");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

ZipParams parse_zip(const json& obj, const std::string& path) {
  ZipParams z;
  const auto p = triplet(obj, "p", path);
  const auto q = triplet(obj, "q", path);
  z.p_z = p[0]; z.p_i = p[1]; z.p_p = p[2];
  z.q_z = q[0]; z.q_i = q[1]; z.q_p = q[2];
  return z;
}

MotorParams parse_motor(const json& obj, const std::string& path) {
  MotorParams m;
  m.stator_r = number_or(obj, "stator_r", m.stator_r, path);
  m.stator_x = number_or(obj, "stator_x", m.stator_x, path);
  m.magnetizing_x = number_or(obj, "magnetizing_x", m.magnetizing_x, path);
  m.rotor_r = number_or(obj, "rotor_r", m.rotor_r, path);
  m.rotor_x = number_or(obj, "rotor_x", m.rotor_x, path);
  m.inertia_h = number_or(obj, "H", m.inertia_h, path);
  m.torque_exponent = number_or(obj, "torque_exponent", m.torque_exponent, path);
  m.load_factor = number_or(obj, "load_factor", m.load_factor, path);
  return m;
}

LoadModel parse_model(const json& obj, const std::string& path) {
  const json& type = field(obj, "type", path);
  if (!type.is_string()) parse_fail(path + ".type: expected a string");
  const auto t = type.get<std::string>();
  if (t == "zip") return parse_zip(obj, path);
  if (t != "composite") parse_fail(path + ".type: expected \"zip\" or \"composite\"");
  CompositeParams c;
  c.zip = obj.contains("zip") ? parse_zip(obj.at("zip"), path + ".zip") : ZipParams{};
  c.motor_fraction = number_or(obj, "motor_fraction", c.motor_fraction, path);
  c.electronic_fraction = number_or(obj, "electronic_fraction", c.electronic_fraction, path);
  if (obj.contains("motor")) c.motor = parse_motor(obj.at("motor"), path + ".motor");
  return c;
}

BusKind parse_bus_kind(const json& obj, const std::string& path) {
  const json& v = field(obj, "kind", path);
  const std::string s = v.is_string() ? v.get<std::string>() : "";
  if (s == "slack") return BusKind::Slack;
  if (s == "pv") return BusKind::PV;
  if (s == "pq") return BusKind::PQ;
  parse_fail(path + ".kind: expected \"slack\", \"pv\" or \"pq\"");
}

json zip_to_json(const ZipParams& z) {
  return json{{"p", {z.p_z, z.p_i, z.p_p}}, {"q", {z.q_z, z.q_i, z.q_p}}};
}

}  // namespace

NetworkCase case_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Map the byte offset onto a line number.
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n');
    parse_fail("line " + std::to_string(line) + ": " + e.what());
  }
  NetworkCase c;
  const std::string top = "case";
  if (!root.is_object()) parse_fail("case: top level must be an object");
  c.name = root.value("name", std::string("unnamed"));
  c.base_mva = number(root, "base_mva", top);
  c.frequency = number(root, "frequency", top);

  const json& buses = field(root, "buses", top);
  if (!buses.is_array()) parse_fail("case.buses: expected an array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string path = "case.buses[" + std::to_string(i) + "]";
    Bus b;
    b.id = integer(buses[i], "id", path);
    b.kind = parse_bus_kind(buses[i], path);
    b.voltage_setpoint = number_or(buses[i], "voltage_setpoint", 1.0, path);
    b.shunt = {number_or(buses[i], "shunt_g", 0.0, path), number_or(buses[i], "shunt_b", 0.0, path)};
    c.buses.push_back(b);
  }

  const json& branches = field(root, "branches", top);
  if (!branches.is_array()) parse_fail("case.branches: expected an array");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string path = "case.branches[" + std::to_string(i) + "]";
    Branch br;
    if (branches[i].contains("name")) {
      if (!branches[i]["name"].is_string()) parse_fail(path + ".name: expected a string");
      br.name = branches[i]["name"].get<std::string>();
    }
    br.from = integer(branches[i], "from", path);
    br.to = integer(branches[i], "to", path);
    br.series_impedance = {number_or(branches[i], "r", 0.0, path), number(branches[i], "x", path)};
    br.charging = number_or(branches[i], "charging", 0.0, path);
    br.rating = number_or(branches[i], "rating", 0.0, path);
    c.branches.push_back(br);
  }

  const json& machines = field(root, "machines", top);
  if (!machines.is_array()) parse_fail("case.machines: expected an array");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const std::string path = "case.machines[" + std::to_string(i) + "]";
    Machine m;
    m.bus = integer(machines[i], "bus", path);
    m.inertia_h = number(machines[i], "H", path);
    m.damping_d = number_or(machines[i], "D", 0.0, path);
    m.transient_reactance = number(machines[i], "xd_prime", path);
    m.mechanical_power = number_or(machines[i], "mechanical_power", 0.0, path);
    c.machines.push_back(m);
  }

  const json& loads = field(root, "loads", top);
  if (!loads.is_object()) parse_fail("case.loads: expected an object keyed by bus id");
  for (const auto& [key, value] : loads.items()) {
    const std::string path = "case.loads[\"" + key + "\"]";
    BusId id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      parse_fail(path + ": key must be an integer bus id");
    }
    Load load;
    load.p = number(value, "p", path);
    load.q = number_or(value, "q", 0.0, path);
    load.model = value.contains("model") ? parse_model(value.at("model"), path + ".model")
                                         : LoadModel{ZipParams{}};
    c.loads.emplace(id, load);
  }

  assign_branch_names(c);
  validate(c);
  return c;
}

NetworkCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open case file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return case_from_json(buf.str());
  } catch (const GridError& e) {
    throw GridError(e.code(), path.string() + ": " + e.what());
  }
}

std::string case_to_json(const NetworkCase& c) {
  json root;
  root["name"] = c.name;
  root["base_mva"] = c.base_mva;
  root["frequency"] = c.frequency;
  root["buses"] = json::array();
  for (const Bus& b : c.buses) {
    root["buses"].push_back({{"id", b.id},
                             {"kind", std::string(to_string(b.kind))},
                             {"voltage_setpoint", b.voltage_setpoint},
                             {"shunt_g", b.shunt.real()},
                             {"shunt_b", b.shunt.imag()}});
  }
  root["branches"] = json::array();
  for (const Branch& br : c.branches) {
    root["branches"].push_back({{"name", br.name},
                                {"from", br.from},
                                {"to", br.to},
                                {"r", br.series_impedance.real()},
                                {"x", br.series_impedance.imag()},
                                {"charging", br.charging},
                                {"rating", br.rating}});
  }
  root["machines"] = json::array();
  for (const Machine& m : c.machines) {
    root["machines"].push_back({{"bus", m.bus},
                                {"H", m.inertia_h},
                                {"D", m.damping_d},
                                {"xd_prime", m.transient_reactance},
                                {"mechanical_power", m.mechanical_power}});
  }
  root["loads"] = json::object();
  for (const auto& [id, load] : c.loads) {
    json model;
    if (const auto* zip = std::get_if<ZipParams>(&load.model)) {
      model = zip_to_json(*zip);
      model["type"] = "zip";
    } else {
      const auto& comp = std::get<CompositeParams>(load.model);
      const MotorParams& m = comp.motor;
      model = {{"type", "composite"},
               {"zip", zip_to_json(comp.zip)},
               {"motor_fraction", comp.motor_fraction},
               {"electronic_fraction", comp.electronic_fraction},
               {"motor",
                {{"stator_r", m.stator_r},
                 {"stator_x", m.stator_x},
                 {"magnetizing_x", m.magnetizing_x},
                 {"rotor_r", m.rotor_r},
                 {"rotor_x", m.rotor_x},
                 {"H", m.inertia_h},
                 {"torque_exponent", m.torque_exponent},
                 {"load_factor", m.load_factor}}}};
    }
    root["loads"][std::to_string(id)] = {{"p", load.p}, {"q", load.q}, {"model", model}};
  }
  return root.dump(2) + "\n";
}

void save_case(const NetworkCase& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write case file '" + path.string() + "'");
  out << case_to_json(c);
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace loadcorr::grid
