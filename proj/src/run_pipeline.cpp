#include "cablefem/run_pipeline.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cablefem {

namespace {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::full_periodic: return "full_periodic";
    case Strategy::short_periodic: return "short_periodic";
    case Strategy::non_periodic: return "non_periodic";
  }
  return "?";
}

std::string bonding_name(Bonding b) { return b == Bonding::solid ? "solid" : "open"; }

std::string armor_name(ArmorTreatment a) {
  switch (a) {
    case ArmorTreatment::wires_3d: return "3d";
    case ArmorTreatment::series_circuit_2p5d: return "2p5d";
    case ArmorTreatment::plain_2d: return "2d";
  }
  return "?";
}

std::string boundary_name(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::none: return "none";
    case BoundaryMode::periodic_translate: return "periodic_translate";
    case BoundaryMode::periodic_rotated: return "periodic_rotated";
  }
  return "?";
}

PlanOptions plan_options(const CableSpec& spec, const RunConfig& cfg) {
  PlanOptions opts;
  opts.layers_per_cp = std::max(cfg.mesh.layers_per_cp, min_layers_per_cp(spec));
  if (cfg.strategy == Strategy::non_periodic) {
    const double cp = crossing_pitch(spec.armor_lay_length, spec.core_lay_length);
    opts.non_periodic_length = cfg.non_periodic_ratio * cp;
  }
  opts.untwisted_length = cfg.untwisted_length;
  return opts;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

std::string short_hostname() {
  char buf[256] = {0};
  if (gethostname(buf, sizeof(buf) - 1) != 0) return "unknown";
  return buf;
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "strategy=" << strategy_name(strategy) << ";model=" << armor_name(armor_treatment)
     << ";bonding=" << bonding_name(bonding) << ";layers_per_cp=" << mesh.layers_per_cp
     << ";outer_boundary_factor=" << mesh.outer_boundary_factor
     << ";size_conductor=" << mesh.size_conductor << ";size_sheath=" << mesh.size_sheath
     << ";size_wire=" << mesh.size_wire << ";size_filler=" << mesh.size_filler
     << ";tolerance=" << solve.tolerance << ";sigma_reg=" << solve.sigma_reg
     << ";non_periodic_ratio=" << non_periodic_ratio;
  return os.str();
}

std::string PlanSummary::text() const {
  std::ostringstream os;
  os << "crossing pitch CP = " << crossing_pitch << " m\n";
  if (periodic_len) {
    os << "periodic length (LCM of lay lengths) = " << *periodic_len << " m\n";
  } else {
    os << "periodic length: none within the rational bound\n";
  }
  os << "rotation angle theta = " << theta << " rad\n";
  os << "model length L = " << length << " m, boundary " << boundary_mode << ", layers "
     << n_layers << "\n";
  os << "cross-section triangles = " << mesh2d_triangles << "\n";
  os << "estimated 3d elements = " << est_elements_3d << ", estimated 3d dofs = " << est_dofs_3d
     << "\n";
  return os.str();
}

PlanSummary run_plan(const CableSpec& spec, const RunConfig& config) {
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    std::string msg = "invalid cable spec:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  MeshControls mesh = config.mesh;
  mesh.layers_per_cp = std::max(mesh.layers_per_cp, min_layers_per_cp(spec));
  const TwistPlan plan = cablefem::plan(spec, config.strategy, plan_options(spec, config));

  PlanSummary out;
  out.crossing_pitch = plan.crossing_pitch;
  try {
    out.periodic_len = periodic_length(spec.armor_lay_length, spec.core_lay_length);
  } catch (const std::exception&) {
    out.periodic_len = std::nullopt;
  }
  out.theta = plan.rotation_angle;
  out.length = plan.length;
  out.n_layers = plan.n_layers;
  out.boundary_mode = boundary_name(plan.boundary_mode);

  const Mesh2D m2 = build_cross_section(spec, mesh);
  out.mesh2d_triangles = m2.triangles.size();
  // The sweep splits each prism into 3 tets and cones 12 per band wedge.
  out.est_elements_3d = (m2.triangles.size() - m2.band_triangles.size()) * 3 * plan.n_layers +
                        static_cast<size_t>(m2.band_slots) * plan.n_layers * 12;
  // Edge count of a large tet mesh is close to nodes + tets (Euler).
  const size_t nodes3d = m2.nodes.size() * (plan.n_layers + 1) +
                         static_cast<size_t>(m2.band_slots) * plan.n_layers;
  out.est_dofs_3d = nodes3d + out.est_elements_3d;
  return out;
}

QualityReport run_mesh(const CableSpec& spec, const RunConfig& config,
                       const std::string& export_path) {
  MeshControls mesh = config.mesh;
  mesh.layers_per_cp = std::max(mesh.layers_per_cp, min_layers_per_cp(spec));
  const TwistPlan plan = cablefem::plan(spec, config.strategy, plan_options(spec, config));
  const Mesh2D m2 = build_cross_section(spec, mesh);
  const Mesh3D m3 = sweep(m2, spec, plan);
  const QualityReport q = quality_report(m3);
  if (!export_path.empty()) export_mesh(m3, export_path);
  return q;
}

CableReport run_solve(const CableSpec& spec, const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  MeshControls mesh_controls = config.mesh;
  mesh_controls.layers_per_cp = std::max(mesh_controls.layers_per_cp, min_layers_per_cp(spec));

  SystemOptions options;
  options.bonding = config.bonding;
  options.armor_treatment = config.armor_treatment;
  options.excitation.phase_currents = ExcitationSpec::balanced(spec.phase_current);
  options.solve = config.solve;

  const MaterialSet materials = MaterialSet::Defaults(spec.conductor_material);
  const Mesh2D m2 = build_cross_section(spec, mesh_controls);

  CableReport report;
  if (config.armor_treatment == ArmorTreatment::wires_3d) {
    const TwistPlan plan = cablefem::plan(spec, config.strategy, plan_options(spec, config));
    const Mesh3D m3 = sweep(m2, spec, plan);
    Solver3D solver(m3, spec, materials, options);
    solver.solve();
    report = build_report(solver, spec);
    report.crossing_pitch = plan.crossing_pitch;
    report.model_length = plan.length;
    report.theta = plan.rotation_angle;
    report.n_layers = plan.n_layers;
    report.boundary_mode = boundary_name(plan.boundary_mode);
  } else {
    Solver2D solver(m2, spec, materials, options);
    solver.solve();
    report = build_report(solver, spec);
    if (config.armor_treatment == ArmorTreatment::series_circuit_2p5d) {
      report.armor_loop_current = std::abs(solver.armor_loop_current());
    }
    try {
      report.crossing_pitch = crossing_pitch(spec.armor_lay_length, spec.core_lay_length);
    } catch (const std::exception&) {
      report.crossing_pitch = 0.0;
    }
    report.model_length = 0.0;
    report.boundary_mode = "none";
  }
  report.model = armor_name(config.armor_treatment);
  report.strategy = strategy_name(config.strategy);
  report.bonding = bonding_name(config.bonding);
  report.outer_boundary_factor = mesh_controls.outer_boundary_factor;
  report.hostname = short_hostname();
  report.config_echo = config.echo();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    const std::string base = config.output_dir + "/" + spec.name + "_" + report.model + "_" +
                             report.strategy + "_" + report.bonding;
    write_file(base + ".report.csv", report_to_csv(report));
    write_file(base + ".report.txt", report_to_text(report));
    if (!config.reference_report_path.empty()) {
      std::ifstream ref_in(config.reference_report_path);
      if (!ref_in) throw std::runtime_error("cannot open reference report");
      std::stringstream buf;
      buf << ref_in.rdbuf();
      const CableReport ref = report_from_csv(buf.str(), spec.name);
      const ErrorBlock err = compare(report, ref);
      write_file(base + ".compare.csv", error_block_to_csv(err));
      write_file(base + ".compare.txt", error_block_to_text(err));
    }
  }
  return report;
}

std::string error_block_to_text(const ErrorBlock& e) {
  std::ostringstream os;
  auto line = [&](const char* name, const std::optional<double>& v) {
    os << "  eps_" << name << " = ";
    if (v) os << *v << " %\n";
    else os << "undefined (zero reference)\n";
  };
  line("R", e.eps_r);
  line("X", e.eps_x);
  line("I_sheath", e.eps_is);
  line("lambda1", e.eps_lambda1);
  line("lambda2", e.eps_lambda2);
  if (e.dt_percent) os << "  dT = " << *e.dt_percent << " % (time reduction)\n";
  if (!e.note.empty()) os << "  note: " << e.note << "\n";
  return os.str();
}

std::string error_block_to_csv(const ErrorBlock& e) {
  std::ostringstream os;
  os << "# cablefem compare csv v1\nquantity,value,unit\n";
  auto line = [&](const char* name, const std::optional<double>& v) {
    os << "eps_" << name << ",";
    if (v) os << *v;
    else os << "nan";
    os << ",%\n";
  };
  line("R", e.eps_r);
  line("X", e.eps_x);
  line("I_sheath", e.eps_is);
  line("lambda1", e.eps_lambda1);
  line("lambda2", e.eps_lambda2);
  os << "dT,";
  if (e.dt_percent) os << *e.dt_percent;
  else os << "nan";
  os << ",%\n";
  return os.str();
}

SweepResult run_length_sweep(const CableSpec& spec, const RunConfig& config,
                             const std::vector<double>& ratios) {
  SweepResult out;
  RunConfig ref_cfg = config;
  ref_cfg.strategy = Strategy::full_periodic;
  ref_cfg.output_dir.clear();
  out.reference = run_solve(spec, ref_cfg);

  for (double ratio : ratios) {
    SweepPoint p;
    p.ratio = ratio;
    try {
      RunConfig cfg = config;
      cfg.strategy = Strategy::non_periodic;
      cfg.non_periodic_ratio = ratio;
      cfg.output_dir.clear();
      const CableReport rep = run_solve(spec, cfg);
      const ErrorBlock err = compare(rep, out.reference);
      p.eps_lambda1 = err.eps_lambda1;
      p.eps_lambda2 = err.eps_lambda2;
      p.eps_r = err.eps_r;
      p.eps_x = err.eps_x;
    } catch (const std::exception& ex) {
      p.error = ex.what();
    }
    out.points.push_back(p);
  }
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    write_file(config.output_dir + "/" + spec.name + "_sweep.csv", out.csv());
  }
  return out;
}

std::string SweepResult::csv() const {
  std::ostringstream os;
  os << "# cablefem sweep csv v1\nratio,eps_lambda1,eps_lambda2,eps_R,eps_X,error\n";
  auto v = [](const std::optional<double>& x) {
    return x ? std::to_string(*x) : std::string("nan");
  };
  for (const auto& p : points) {
    os << p.ratio << "," << v(p.eps_lambda1) << "," << v(p.eps_lambda2) << "," << v(p.eps_r)
       << "," << v(p.eps_x) << "," << (p.error.empty() ? "-" : p.error) << "\n";
  }
  return os.str();
}

}  // namespace cablefem
