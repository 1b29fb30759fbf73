#include "cablefem/cable_model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cablefem {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3 = 1.7320508075688772;
}  // namespace

double CableSpec::trefoil_radius() const {
  const double nominal = 2.0 / kSqrt3 * sheath_radius;
  const double clearance = 0.2 * sheath_thickness;
  const double meshable = (2.0 * sheath_outer_radius() + clearance) / kSqrt3;
  return std::max(nominal, meshable);
}

Complex complex_permeability(const PermeabilityModel& model, double b_mag) {
  if (b_mag < 0.0) {
    throw std::domain_error("complex_permeability: negative |B| = " + std::to_string(b_mag));
  }
  if (model.variant == PermeabilityModel::Variant::constant) {
    return model.constant_mu;
  }
  const double re = model.mu_0r + model.mu_mr * (1.0 - std::exp(-model.alpha_1 * b_mag));
  const double im = -model.mu_mi * (1.0 - std::exp(-model.alpha_2 * b_mag));
  return Complex(re, im);
}

MaterialSet MaterialSet::Defaults(ConductorMaterial m) {
  MaterialSet set;
  // IEC 60287 20 C resistivities.
  set.conductor_resistivity = (m == ConductorMaterial::copper) ? 1.7241e-8 : 2.8264e-8;
  set.sheath_resistivity = 2.14e-7;
  set.armor_conductivity = 4.5e6;
  set.armor_permeability = PermeabilityModel::Constant(Complex(100.0, -50.0));
  return set;
}

std::vector<std::string> validate_spec(const CableSpec& spec) {
  std::vector<std::string> v;
  auto positive = [&](double x, const char* what) {
    if (!(x > 0.0)) v.push_back(std::string(what) + " must be > 0");
  };
  positive(spec.conductor_radius, "conductor_radius");
  positive(spec.sheath_thickness, "sheath_thickness");
  positive(spec.sheath_radius, "sheath_radius");
  positive(spec.core_lay_length, "core_lay_length");
  positive(spec.armor_wire_diameter, "armor_wire_diameter");
  positive(spec.armor_radius, "armor_radius");
  positive(spec.armor_lay_length, "armor_lay_length");
  positive(spec.frequency, "frequency");
  if (spec.armor_wire_count < 1) v.push_back("armor_wire_count must be >= 1");
  if (spec.conductor_radius > 0 && spec.sheath_radius > 0 &&
      spec.sheath_inner_radius() <= spec.conductor_radius) {
    v.push_back("sheath inner radius must exceed conductor_radius");
  }
  if (spec.armor_wire_count >= 1 && spec.armor_wire_diameter > 0 && spec.armor_radius > 0 &&
      spec.armor_wire_count * spec.armor_wire_diameter >= 2.0 * kPi * spec.armor_radius) {
    std::ostringstream os;
    os << "armor wires overlap on the pitch circle: " << spec.armor_wire_count << " x "
       << spec.armor_wire_diameter << " m >= 2*pi*" << spec.armor_radius << " m";
    v.push_back(os.str());
  }
  if (spec.sheath_radius > 0 && spec.armor_radius > 0 && spec.armor_wire_diameter > 0) {
    const double bundle = spec.trefoil_radius() + spec.sheath_outer_radius();
    const double armor_in = spec.armor_radius - 0.5 * spec.armor_wire_diameter;
    if (bundle >= armor_in) {
      std::ostringstream os;
      os << "core bundle does not fit inside the armor: trefoil radius + sheath outer radius = "
         << bundle << " m >= " << armor_in << " m";
      v.push_back(os.str());
    }
  }
  return v;
}

namespace {

std::string to_string_trim(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

CableSpec parse_cable_spec(const std::string& text, const std::string& name) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;
    if (!(ls >> value)) {
      throw std::runtime_error(name + ":" + std::to_string(lineno) + ": key '" + key +
                               "' has no value");
    }
    kv[key] = value;
  }

  CableSpec spec;
  spec.name = name;
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(name + ": missing key '" + std::string(key) + "'");
    std::string s = it->second;
    kv.erase(it);
    return s;
  };
  auto take_double = [&](const char* key) {
    const std::string s = take(key);
    if (s == "inf") return std::numeric_limits<double>::infinity();
    size_t pos = 0;
    double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error(name + ": bad number for '" + key + "': " + s);
    return x;
  };

  spec.voltage_class = take_double("voltage_class");
  const std::string mat = take("conductor_material");
  if (mat == "copper") spec.conductor_material = ConductorMaterial::copper;
  else if (mat == "aluminium") spec.conductor_material = ConductorMaterial::aluminium;
  else throw std::runtime_error(name + ": conductor_material must be copper or aluminium");
  spec.conductor_radius = take_double("conductor_radius");
  spec.sheath_thickness = take_double("sheath_thickness");
  spec.sheath_radius = take_double("sheath_radius");
  spec.core_lay_length = take_double("core_lay_length");
  spec.armor_wire_diameter = take_double("armor_wire_diameter");
  spec.armor_wire_count = static_cast<int>(take_double("armor_wire_count"));
  spec.armor_radius = take_double("armor_radius");
  spec.armor_lay_length = take_double("armor_lay_length");
  const std::string lay = take("lay_relation");
  if (lay == "contralay") spec.lay_relation = LayRelation::contralay;
  else if (lay == "unilay") spec.lay_relation = LayRelation::unilay;
  else throw std::runtime_error(name + ": lay_relation must be contralay or unilay");
  const std::string hand = take("core_handedness");
  if (hand == "cw") spec.core_handedness = Handedness::cw;
  else if (hand == "ccw") spec.core_handedness = Handedness::ccw;
  else throw std::runtime_error(name + ": core_handedness must be cw or ccw");
  spec.frequency = take_double("frequency");
  spec.phase_current = take_double("phase_current");

  if (!kv.empty()) {
    throw std::runtime_error(name + ": unknown key '" + kv.begin()->first + "'");
  }
  return spec;
}

std::string format_cable_spec(const CableSpec& spec) {
  std::ostringstream os;
  os << "# cable spec (SI units)\n";
  os << "voltage_class " << to_string_trim(spec.voltage_class) << "\n";
  os << "conductor_material "
     << (spec.conductor_material == ConductorMaterial::copper ? "copper" : "aluminium") << "\n";
  os << "conductor_radius " << to_string_trim(spec.conductor_radius) << "\n";
  os << "sheath_thickness " << to_string_trim(spec.sheath_thickness) << "\n";
  os << "sheath_radius " << to_string_trim(spec.sheath_radius) << "\n";
  os << "core_lay_length " << to_string_trim(spec.core_lay_length) << "\n";
  os << "armor_wire_diameter " << to_string_trim(spec.armor_wire_diameter) << "\n";
  os << "armor_wire_count " << spec.armor_wire_count << "\n";
  os << "armor_radius " << to_string_trim(spec.armor_radius) << "\n";
  os << "armor_lay_length " << to_string_trim(spec.armor_lay_length) << "\n";
  os << "lay_relation " << (spec.lay_relation == LayRelation::contralay ? "contralay" : "unilay")
     << "\n";
  os << "core_handedness " << (spec.core_handedness == Handedness::cw ? "cw" : "ccw") << "\n";
  os << "frequency " << to_string_trim(spec.frequency) << "\n";
  os << "phase_current " << to_string_trim(spec.phase_current) << "\n";
  return os.str();
}

CableSpec load_cable_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cable spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_cable_spec(buf.str(), name);
}

void save_cable_spec(const CableSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write cable spec file: " + path);
  out << format_cable_spec(spec);
}

}  // namespace cablefem
