// Turns field solutions into reported cable quantities and comparison tables.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cablefem/em_solver.hpp"

namespace cablefem {

struct LossEntry {
  std::string region;
  double joule = 0.0;     // W/m, time average, peak phasors
  double magnetic = 0.0;  // W/m hysteresis (complex permeability)
};

struct CableReport {
  std::string cable_name;
  std::string model;  // 2d | 2p5d | 3d
  std::string strategy;
  std::string bonding;
  std::string boundary_mode;
  double frequency = 0.0;
  double phase_current = 0.0;  // peak

  double r_ohm_per_km = 0.0;
  double x_ohm_per_km = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::array<double, 3> sheath_current{0, 0, 0};  // magnitudes
  std::vector<double> wire_current;               // magnitudes, per wire
  double armor_loop_current = 0.0;                // 2.5D series current

  std::vector<LossEntry> loss_table;  // per region + regularization row
  double conductor_loss = 0.0;
  double sheath_loss = 0.0;
  double armor_loss = 0.0;
  double total_loss = 0.0;
  double source_active_power = 0.0;
  double magnetic_energy = 0.0;  // J/m

  // Plan echo (angular reference: phase 0 and wire 0 on +x at z = 0).
  double crossing_pitch = 0.0;
  double model_length = 0.0;
  double theta = 0.0;
  int n_layers = 0;
  double outer_boundary_factor = 0.0;

  SolverStats stats;
  double wall_seconds = 0.0;
  std::string hostname;
  std::string config_echo;  // resolved configuration, one line
};

// Relative errors in percent against a reference report of the same cable.
struct ErrorBlock {
  std::optional<double> eps_r, eps_x, eps_is, eps_lambda1, eps_lambda2;
  std::optional<double> dt_percent;  // (T_ref - T)/T_ref * 100
  std::vector<std::string> undefined;  // quantities with a zero reference
  std::string note;
};

// eps_q = |q - q_ref| / q_ref * 100. Throws when the cables differ.
ErrorBlock compare(const CableReport& report, const CableReport& reference);

// Report quantities from a solved system. The template is instantiated for
// Solver2D and Solver3D.
template <typename Solver>
CableReport build_report(Solver& solver, const CableSpec& cable);

// Serialization: versioned CSV (one quantity per row) and human-readable text.
std::string report_to_csv(const CableReport& r);
std::string report_to_text(const CableReport& r);
CableReport report_from_csv(const std::string& csv, const std::string& name_hint);

// Measurement ingest: lines of "quantity value unit" with # comments; builds a
// reference report carrying R/X (and optionally lambda1/lambda2).
CableReport load_measurement_report(const std::string& path, const std::string& cable_name);

}  // namespace cablefem
