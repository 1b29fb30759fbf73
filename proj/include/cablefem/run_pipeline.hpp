// Batch pipeline: plan -> mesh -> solve -> report, plus sweeps and compares.
// Shared by the command-line tool and the acceptance suite.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cablefem/postprocess.hpp"

namespace cablefem {

struct RunConfig {
  Strategy strategy = Strategy::short_periodic;
  ArmorTreatment armor_treatment = ArmorTreatment::wires_3d;
  Bonding bonding = Bonding::solid;
  MeshControls mesh;
  SolveControls solve;
  double non_periodic_ratio = 1.25;   // L/CP for non_periodic plans
  double untwisted_length = 0.0;      // model length when lay lengths are infinite
  std::string output_dir;             // empty: no files written
  std::string reference_report_path;  // optional comparison target

  std::string echo() const;  // one-line resolved configuration
};

struct PlanSummary {
  double crossing_pitch = 0.0;
  std::optional<double> periodic_len;  // empty when no finite period exists
  double theta = 0.0;
  double length = 0.0;
  int n_layers = 0;
  std::string boundary_mode;
  std::size_t mesh2d_triangles = 0;
  std::size_t est_elements_3d = 0;
  std::size_t est_dofs_3d = 0;
  std::string text() const;
};

PlanSummary run_plan(const CableSpec& spec, const RunConfig& config);

// Full pipeline for one model; writes report files into output_dir when set
// (deterministic names embedding cable, model, strategy and bonding).
CableReport run_solve(const CableSpec& spec, const RunConfig& config);

struct SweepPoint {
  double ratio = 0.0;  // L / CP
  std::optional<double> eps_lambda1, eps_lambda2, eps_r, eps_x;
  std::string error;  // solver failure annotation; point kept in the table
};

struct SweepResult {
  std::vector<SweepPoint> points;
  CableReport reference;  // the full-periodic run
  std::string csv() const;
};

// Fig.4-style length sweep: non-periodic models at the given L/CP ratios
// against a full-periodic reference of the same cable and controls.
SweepResult run_length_sweep(const CableSpec& spec, const RunConfig& config,
                             const std::vector<double>& ratios);

std::string error_block_to_text(const ErrorBlock& e);
std::string error_block_to_csv(const ErrorBlock& e);

// Builds the 3D mesh for a plan without solving (mesh subcommand, congruence
// checks). Returns the quality report; optionally exports the mesh.
QualityReport run_mesh(const CableSpec& spec, const RunConfig& config,
                       const std::string& export_path = "");

std::string short_hostname();

}  // namespace cablefem
