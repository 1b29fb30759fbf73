#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cablefem/postprocess.hpp"

namespace cablefem {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

std::string report_to_csv(const CableReport& r) {
  std::ostringstream os;
  os << "# cablefem report csv v1\n";
  os << "# cable=" << r.cable_name << " model=" << r.model << " strategy=" << r.strategy
     << " bonding=" << r.bonding << " boundary=" << r.boundary_mode << "\n";
  if (!r.config_echo.empty()) os << "# config " << r.config_echo << "\n";
  os << "quantity,value,unit\n";
  os << "frequency," << fmt(r.frequency) << ",Hz\n";
  os << "phase_current," << fmt(r.phase_current) << ",A\n";
  os << "R," << fmt(r.r_ohm_per_km) << ",ohm/km\n";
  os << "X," << fmt(r.x_ohm_per_km) << ",ohm/km\n";
  os << "lambda1," << fmt(r.lambda1) << ",1\n";
  os << "lambda2," << fmt(r.lambda2) << ",1\n";
  for (int i = 0; i < 3; ++i)
    os << "sheath_current_" << i << "," << fmt(r.sheath_current[i]) << ",A\n";
  os << "armor_loop_current," << fmt(r.armor_loop_current) << ",A\n";
  for (size_t i = 0; i < r.wire_current.size(); ++i)
    os << "wire_current_" << i << "," << fmt(r.wire_current[i]) << ",A\n";
  os << "conductor_loss," << fmt(r.conductor_loss) << ",W/m\n";
  os << "sheath_loss," << fmt(r.sheath_loss) << ",W/m\n";
  os << "armor_loss," << fmt(r.armor_loss) << ",W/m\n";
  os << "total_loss," << fmt(r.total_loss) << ",W/m\n";
  os << "source_active_power," << fmt(r.source_active_power) << ",W/m\n";
  os << "magnetic_energy," << fmt(r.magnetic_energy) << ",J/m\n";
  for (const auto& e : r.loss_table) {
    os << "loss_" << e.region << "_joule," << fmt(e.joule) << ",W/m\n";
    os << "loss_" << e.region << "_magnetic," << fmt(e.magnetic) << ",W/m\n";
  }
  os << "crossing_pitch," << fmt(r.crossing_pitch) << ",m\n";
  os << "model_length," << fmt(r.model_length) << ",m\n";
  os << "theta," << fmt(r.theta) << ",rad\n";
  os << "n_layers," << r.n_layers << ",1\n";
  os << "outer_boundary_factor," << fmt(r.outer_boundary_factor) << ",1\n";
  os << "wall_seconds," << fmt(r.wall_seconds) << ",s\n";
  os << "solver_residual," << fmt(r.stats.residual) << ",1\n";
  os << "solver_dofs," << r.stats.n_dofs << ",1\n";
  os << "picard_iterations," << r.stats.picard_iterations << ",1\n";
  os << "hostname," << (r.hostname.empty() ? "unknown" : r.hostname) << ",-\n";
  return os.str();
}

std::string report_to_text(const CableReport& r) {
  std::ostringstream os;
  os << "cable report: " << r.cable_name << "\n";
  os << "  model " << r.model << ", strategy " << r.strategy << ", bonding " << r.bonding
     << ", boundary " << r.boundary_mode << "\n";
  os << "  f = " << r.frequency << " Hz, |I| = " << r.phase_current << " A peak\n";
  os << "  plan: CP = " << fmt(r.crossing_pitch) << " m, L = " << fmt(r.model_length)
     << " m, theta = " << fmt(r.theta) << " rad, layers = " << r.n_layers
     << ", outer boundary factor = " << r.outer_boundary_factor << "\n";
  os << "  angular reference: phase 0 and wire 0 on +x at z = 0\n";
  os << "  R = " << fmt(r.r_ohm_per_km) << " ohm/km\n";
  os << "  X = " << fmt(r.x_ohm_per_km) << " ohm/km\n";
  os << "  lambda1 = " << fmt(r.lambda1) << ", lambda2 = " << fmt(r.lambda2) << "\n";
  os << "  sheath currents: " << fmt(r.sheath_current[0]) << ", " << fmt(r.sheath_current[1])
     << ", " << fmt(r.sheath_current[2]) << " A\n";
  os << "  losses (W/m): conductors " << fmt(r.conductor_loss) << ", sheaths "
     << fmt(r.sheath_loss) << ", armor " << fmt(r.armor_loss) << ", total " << fmt(r.total_loss)
     << "\n";
  os << "  source active power: " << fmt(r.source_active_power) << " W/m\n";
  os << "  loss table:\n";
  for (const auto& e : r.loss_table) {
    os << "    " << e.region << ": joule " << fmt(e.joule) << " W/m, magnetic " << fmt(e.magnetic)
       << " W/m\n";
  }
  os << "  solver: " << r.stats.method << ", dofs " << r.stats.n_dofs << ", residual "
     << fmt(r.stats.residual) << ", picard " << r.stats.picard_iterations << "\n";
  os << "  wall time: " << fmt(r.wall_seconds) << " s on " << r.hostname << "\n";
  if (!r.config_echo.empty()) os << "  config: " << r.config_echo << "\n";
  return os.str();
}

CableReport report_from_csv(const std::string& csv, const std::string& name_hint) {
  CableReport r;
  r.cable_name = name_hint;
  std::istringstream in(csv);
  std::string line;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("cable=");
      if (pos != std::string::npos) {
        std::string rest = line.substr(pos + 6);
        r.cable_name = rest.substr(0, rest.find(' '));
      }
      continue;
    }
    const auto c1 = line.find(',');
    if (c1 == std::string::npos) continue;
    const auto c2 = line.find(',', c1 + 1);
    const std::string key = line.substr(0, c1);
    const std::string val = line.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                                        : c2 - c1 - 1);
    if (key == "quantity") continue;
    kv[key] = val;
  }
  auto get = [&](const char* key, double def = 0.0) {
    auto it = kv.find(key);
    return it == kv.end() ? def : std::stod(it->second);
  };
  r.frequency = get("frequency");
  r.phase_current = get("phase_current");
  r.r_ohm_per_km = get("R");
  r.x_ohm_per_km = get("X");
  r.lambda1 = get("lambda1");
  r.lambda2 = get("lambda2");
  for (int i = 0; i < 3; ++i)
    r.sheath_current[i] = get(("sheath_current_" + std::to_string(i)).c_str());
  r.conductor_loss = get("conductor_loss");
  r.sheath_loss = get("sheath_loss");
  r.armor_loss = get("armor_loss");
  r.total_loss = get("total_loss");
  r.magnetic_energy = get("magnetic_energy");
  r.crossing_pitch = get("crossing_pitch");
  r.model_length = get("model_length");
  r.theta = get("theta");
  r.n_layers = static_cast<int>(get("n_layers"));
  r.wall_seconds = get("wall_seconds");
  auto it = kv.find("hostname");
  if (it != kv.end()) r.hostname = it->second;
  return r;
}

CableReport load_measurement_report(const std::string& path, const std::string& cable_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open measurement file: " + path);
  CableReport r;
  r.cable_name = cable_name;
  r.model = "measured";
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string quantity, unit;
    double value;
    if (!(ls >> quantity)) continue;
    if (!(ls >> value >> unit)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'quantity value unit'");
    }
    auto scale_r = [&](double v) {
      if (unit == "ohm/km") return v;
      if (unit == "ohm/m") return v * 1e3;
      throw std::runtime_error(path + ": unsupported unit " + unit + " for " + quantity);
    };
    if (quantity == "R") r.r_ohm_per_km = scale_r(value);
    else if (quantity == "X") r.x_ohm_per_km = scale_r(value);
    else if (quantity == "lambda1") r.lambda1 = value;
    else if (quantity == "lambda2") r.lambda2 = value;
    else if (quantity == "frequency") r.frequency = value;
    else if (quantity == "phase_current") r.phase_current = value;
    else throw std::runtime_error(path + ": unknown quantity " + quantity);
  }
  return r;
}

}  // namespace cablefem
