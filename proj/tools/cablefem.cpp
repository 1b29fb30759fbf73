// cablefem: frequency-domain eddy-current models of three-core armored
// cables. Subcommands: plan | mesh | solve | sweep | compare | oracle.
// Exit codes: 0 ok, 1 solver failure, 2 invalid input.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cablefem/analytic_oracles.hpp"
#include "cablefem/run_pipeline.hpp"

namespace {

using namespace cablefem;

struct CommonArgs {
  std::string spec_path;
  std::string strategy = "short_periodic";
  std::string model = "3d";
  std::string bonding = "solid";
  double ratio = 1.25;
  double untwisted_length = 0.0;
  RunConfig config;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_spec = true) {
  cmd->add_option("spec", a.spec_path, "cable spec file")->required(needs_spec);
  cmd->add_option("--strategy", a.strategy, "full_periodic|short_periodic|non_periodic");
  cmd->add_option("--model", a.model, "3d|2p5d|2d");
  cmd->add_option("--bonding", a.bonding, "solid|open");
  cmd->add_option("--ratio", a.ratio, "L/CP for non_periodic plans");
  cmd->add_option("--layers-per-cp", a.config.mesh.layers_per_cp, "axial layers per CP");
  cmd->add_option("--outer-boundary-factor", a.config.mesh.outer_boundary_factor,
                  "air radius / armor radius");
  cmd->add_option("--size-conductor", a.config.mesh.size_conductor, "target size (m)");
  cmd->add_option("--size-sheath", a.config.mesh.size_sheath, "target size (m)");
  cmd->add_option("--size-wire", a.config.mesh.size_wire, "target size (m)");
  cmd->add_option("--size-filler", a.config.mesh.size_filler, "target size (m)");
  cmd->add_option("--max-nodes", a.config.mesh.max_nodes, "2D node budget");
  cmd->add_option("--tolerance", a.config.solve.tolerance, "relative residual");
  cmd->add_option("--sigma-reg", a.config.solve.sigma_reg, "regularization conductivity (S/m)");
  cmd->add_option("--direct-max-dofs", a.config.solve.direct_max_dofs,
                  "largest system for the sparse direct solver");
  cmd->add_option("--untwisted-length", a.untwisted_length,
                  "model length for straight (infinite lay) cables");
  cmd->add_option("--out", a.config.output_dir, "output directory");
  cmd->add_option("--reference", a.config.reference_report_path, "reference report csv");
}

RunConfig finish_config(CommonArgs& a) {
  RunConfig cfg = a.config;
  if (a.strategy == "full_periodic") cfg.strategy = Strategy::full_periodic;
  else if (a.strategy == "short_periodic") cfg.strategy = Strategy::short_periodic;
  else if (a.strategy == "non_periodic") cfg.strategy = Strategy::non_periodic;
  else throw CLI::ValidationError("--strategy", "unknown strategy " + a.strategy);
  if (a.model == "3d") cfg.armor_treatment = ArmorTreatment::wires_3d;
  else if (a.model == "2p5d") cfg.armor_treatment = ArmorTreatment::series_circuit_2p5d;
  else if (a.model == "2d") cfg.armor_treatment = ArmorTreatment::plain_2d;
  else throw CLI::ValidationError("--model", "unknown model " + a.model);
  cfg.bonding = (a.bonding == "open") ? Bonding::open : Bonding::solid;
  cfg.non_periodic_ratio = a.ratio;
  cfg.untwisted_length = a.untwisted_length;
  return cfg;
}

int cmd_plan(CommonArgs& a) {
  const CableSpec spec = load_cable_spec(a.spec_path);
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    std::cerr << "cable spec violations:\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return 2;
  }
  const PlanSummary s = run_plan(spec, finish_config(a));
  std::cout << s.text();
  return 0;
}

int cmd_mesh(CommonArgs& a, const std::string& export_path) {
  const CableSpec spec = load_cable_spec(a.spec_path);
  const QualityReport q = run_mesh(spec, finish_config(a), export_path);
  std::cout << q.summary() << "\n";
  return 0;
}

int cmd_solve(CommonArgs& a) {
  const CableSpec spec = load_cable_spec(a.spec_path);
  RunConfig cfg = finish_config(a);
  if (cfg.output_dir.empty()) cfg.output_dir = ".";
  const CableReport report = run_solve(spec, cfg);
  std::cout << report_to_text(report);
  return 0;
}

int cmd_sweep(CommonArgs& a, std::vector<double>& ratios) {
  const CableSpec spec = load_cable_spec(a.spec_path);
  RunConfig cfg = finish_config(a);
  if (cfg.output_dir.empty()) cfg.output_dir = ".";
  if (ratios.empty()) ratios = {0.5, 0.75, 1.1, 1.25};
  const SweepResult res = run_length_sweep(spec, cfg, ratios);
  std::cout << res.csv();
  for (const auto& p : res.points) {
    if (!p.error.empty()) return 1;
  }
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    if (path.size() > 4 && path.substr(path.size() - 4) == ".txt")
      throw std::runtime_error("compare expects the csv report, got " + path);
    return report_from_csv(buf.str(), "");
  };
  const CableReport a = load(path_a);
  const CableReport b = load(path_b);
  const ErrorBlock e = compare(a, b);
  std::cout << error_block_to_text(e);
  std::cout << error_block_to_csv(e);
  return 0;
}

int cmd_oracle(double radius, double conductivity, double mu_r, double frequency) {
  const auto r = oracles::round_wire_ac_resistance(radius, conductivity,
                                                   4e-7 * 3.14159265358979323846 * mu_r, frequency);
  std::cout << "round wire AC resistance = " << r.value << " " << r.unit
            << " (truncation bound " << r.truncation_bound
            << (r.asymptotic ? ", asymptotic form" : "") << ")\n";
  std::cout << "DC resistance = " << oracles::round_wire_dc_resistance(radius, conductivity)
            << " ohm/m\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("CABLEFEM_THREADS")) {
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  }
  CLI::App app{"cablefem: 3D/2.5D/2D eddy-current models of armored three-core cables"};
  app.require_subcommand(1);

  CommonArgs plan_args, mesh_args, solve_args, sweep_args;
  std::string mesh_export;
  std::vector<double> ratios;
  std::string cmp_a, cmp_b;
  double o_radius = 0.0035, o_sigma = 5.8e7, o_mur = 1.0, o_freq = 50.0;

  auto* plan_cmd = app.add_subcommand("plan", "print CP, LCM, theta and model sizes");
  add_common(plan_cmd, plan_args);
  auto* mesh_cmd = app.add_subcommand("mesh", "build the swept mesh and report quality");
  add_common(mesh_cmd, mesh_args);
  mesh_cmd->add_option("--export", mesh_export, "write the mesh container file");
  auto* solve_cmd = app.add_subcommand("solve", "run the full pipeline and write reports");
  add_common(solve_cmd, solve_args);
  auto* sweep_cmd = app.add_subcommand("sweep", "non-periodic length sweep vs full periodic");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--ratios", ratios, "L/CP ratios");
  auto* cmp_cmd = app.add_subcommand("compare", "error table between two report csv files");
  cmp_cmd->add_option("report", cmp_a, "report csv")->required();
  cmp_cmd->add_option("reference", cmp_b, "reference csv")->required();
  auto* oracle_cmd = app.add_subcommand("oracle", "closed-form round-wire AC resistance");
  oracle_cmd->add_option("--radius", o_radius, "m");
  oracle_cmd->add_option("--conductivity", o_sigma, "S/m");
  oracle_cmd->add_option("--mu-r", o_mur, "relative permeability");
  oracle_cmd->add_option("--frequency", o_freq, "Hz");

  try {
    app.parse(argc, argv);
    if (plan_cmd->parsed()) return cmd_plan(plan_args);
    if (mesh_cmd->parsed()) return cmd_mesh(mesh_args, mesh_export);
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, ratios);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_a, cmp_b);
    if (oracle_cmd->parsed()) return cmd_oracle(o_radius, o_sigma, o_mur, o_freq);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
