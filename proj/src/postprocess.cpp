#include "cablefem/postprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace cablefem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

template <typename Solver>
CableReport build_report(Solver& solver, const CableSpec& cable) {
  CableReport r;
  r.cable_name = cable.name;
  r.frequency = cable.frequency;
  r.phase_current = cable.phase_current;

  const auto& regions = solver.conducting_regions();
  double cond = 0.0, sheath = 0.0, armor = 0.0, total = 0.0;
  for (const auto& tag : regions) {
    LossEntry e;
    e.region = region_name(tag);
    e.joule = solver.joule_loss(tag);
    e.magnetic = solver.magnetic_loss(tag);
    r.loss_table.push_back(e);
    const double sum = e.joule + e.magnetic;
    total += sum;
    switch (tag.kind) {
      case RegionKind::conductor: cond += sum; break;
      case RegionKind::sheath: sheath += sum; break;
      case RegionKind::armor_wire: armor += sum; break;
      default: break;
    }
    if (tag.kind == RegionKind::sheath && tag.index >= 0 && tag.index < 3) {
      r.sheath_current[tag.index] = std::abs(solver.region_current(tag));
    }
    if (tag.kind == RegionKind::armor_wire) {
      r.wire_current.push_back(std::abs(solver.region_current(tag)));
    }
  }
  r.conductor_loss = cond;
  r.sheath_loss = sheath;
  r.armor_loss = armor;

  if constexpr (std::is_same_v<Solver, Solver3D>) {
    const double reg = solver.regularization_loss();
    r.loss_table.push_back({"regularization", reg, 0.0});
    total += reg;
  }
  r.total_loss = total;
  r.source_active_power = solver.source_power().real();
  r.magnetic_energy = solver.magnetic_energy();

  if (cond <= 0.0) {
    throw std::runtime_error("loss_factors: conductor losses are zero; factors undefined");
  }
  r.lambda1 = sheath / cond;
  r.lambda2 = armor / cond;

  const double i_mag = cable.phase_current;
  const double i2 = i_mag * i_mag;
  const double omega = 2.0 * kPi * cable.frequency;
  r.r_ohm_per_km = 2.0 * total / (3.0 * i2) * 1e3;
  r.x_ohm_per_km = 4.0 * omega * r.magnetic_energy / (3.0 * i2) * 1e3;
  r.stats = solver.stats();
  return r;
}

template CableReport build_report<Solver2D>(Solver2D&, const CableSpec&);
template CableReport build_report<Solver3D>(Solver3D&, const CableSpec&);

ErrorBlock compare(const CableReport& report, const CableReport& reference) {
  if (!report.cable_name.empty() && !reference.cable_name.empty() &&
      report.cable_name != reference.cable_name) {
    throw std::invalid_argument("compare: reports describe different cables: " +
                                report.cable_name + " vs " + reference.cable_name);
  }
  ErrorBlock out;
  auto eps = [&](double q, double q_ref, const char* name) -> std::optional<double> {
    if (q_ref == 0.0) {
      out.undefined.push_back(name);
      return std::nullopt;
    }
    return std::abs(q - q_ref) / std::abs(q_ref) * 100.0;
  };
  out.eps_r = eps(report.r_ohm_per_km, reference.r_ohm_per_km, "R");
  out.eps_x = eps(report.x_ohm_per_km, reference.x_ohm_per_km, "X");
  const double is = *std::max_element(report.sheath_current.begin(), report.sheath_current.end());
  const double is_ref =
      *std::max_element(reference.sheath_current.begin(), reference.sheath_current.end());
  out.eps_is = eps(is, is_ref, "I_sheath");
  out.eps_lambda1 = eps(report.lambda1, reference.lambda1, "lambda1");
  out.eps_lambda2 = eps(report.lambda2, reference.lambda2, "lambda2");
  if (report.wall_seconds > 0 && reference.wall_seconds > 0) {
    if (!report.hostname.empty() && report.hostname == reference.hostname) {
      out.dt_percent = (reference.wall_seconds - report.wall_seconds) / reference.wall_seconds * 100.0;
    } else {
      out.note = "timing comparison refused: reports come from different machines";
    }
  }
  return out;
}

}  // namespace cablefem
