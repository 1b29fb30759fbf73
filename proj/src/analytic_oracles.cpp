#include "cablefem/analytic_oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace cablefem::oracles {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMu0 = 4.0 * kPi * 1e-7;

struct Kelvin {
  double ber, bei, ber_p, bei_p;
  double bound;  // bound on the series truncation error, absolute
};

// Series evaluation of ber, bei and their derivatives. Terms alternate in
// sign and decay factorially once 4k > x, so the first neglected term bounds
// the tail.
Kelvin kelvin_series(double x) {
  const double h = 0.5 * x;
  Kelvin k{1.0, h * h, 0.0, h, 0.0};
  double f_even = 1.0;  // (2n)!
  double f_odd = 1.0;   // (2n+1)!
  double pw = 1.0;      // (x/2)^{4n}
  const double h4 = h * h * h * h;
  double last = 0.0;
  for (int n = 1; n < 200; ++n) {
    f_even *= (2.0 * n - 1.0) * (2.0 * n);
    f_odd *= (2.0 * n) * (2.0 * n + 1.0);
    pw *= h4;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double t_ber = sign * pw / (f_even * f_even);
    const double t_bei = sign * pw * h * h / (f_odd * f_odd);
    // d/dx of h^{4n} is 2n*h^{4n-1}; of h^{4n+2} is (2n+1)*h^{4n+1}.
    const double t_ber_p = t_ber * (2.0 * n) / h;
    const double t_bei_p = t_bei * (2.0 * n + 1.0) / h;
    k.ber += t_ber;
    k.bei += t_bei;
    k.ber_p += t_ber_p;
    k.bei_p += t_bei_p;
    last = std::abs(t_ber) + std::abs(t_bei) + std::abs(t_ber_p) + std::abs(t_bei_p);
    const double mag = std::abs(k.ber) + std::abs(k.bei) + 1.0;
    if (4.0 * n > x && last < 1e-18 * mag) break;
  }
  k.bound = 2.0 * last;
  return k;
}

}  // namespace

double skin_effect_ratio(double q) {
  if (q < 0.0) throw std::domain_error("skin_effect_ratio: q must be >= 0");
  if (q < 1e-8) return 1.0;
  const double x = std::sqrt(2.0) * q;
  if (x > 20.0) {
    // Asymptotic form; leading terms of the large-argument expansion.
    return q / 2.0 + 0.25 + 3.0 / (32.0 * q);
  }
  const Kelvin k = kelvin_series(x);
  const double den = k.ber_p * k.ber_p + k.bei_p * k.bei_p;
  return 0.5 * x * (k.ber * k.bei_p - k.bei * k.ber_p) / den;
}

double round_wire_dc_resistance(double radius, double conductivity) {
  if (!(radius > 0.0) || !(conductivity > 0.0)) {
    throw std::invalid_argument("round_wire_dc_resistance: inputs must be > 0");
  }
  return 1.0 / (conductivity * kPi * radius * radius);
}

OracleResult round_wire_ac_resistance(double radius, double conductivity, double mu,
                                      double frequency) {
  if (!(radius > 0.0) || !(conductivity > 0.0) || !(mu > 0.0) || !(frequency > 0.0)) {
    throw std::invalid_argument("round_wire_ac_resistance: inputs must be > 0");
  }
  const double omega = 2.0 * kPi * frequency;
  const double delta = std::sqrt(2.0 / (omega * mu * conductivity));
  const double q = radius / delta;
  const double rdc = round_wire_dc_resistance(radius, conductivity);

  OracleResult out;
  out.unit = "ohm/m";
  if (std::sqrt(2.0) * q > 20.0) {
    out.value = rdc * skin_effect_ratio(q);
    out.asymptotic = true;
    out.truncation_bound = rdc * 1e-2;  // asymptote good to ~1% at the switch point
    return out;
  }
  const double x = std::sqrt(2.0) * q;
  const Kelvin k = kelvin_series(x);
  const double den = k.ber_p * k.ber_p + k.bei_p * k.bei_p;
  out.value = rdc * 0.5 * x * (k.ber * k.bei_p - k.bei * k.ber_p) / den;
  out.truncation_bound = rdc * k.bound / std::max(den, 1e-300);
  return out;
}

Complex ampere_loop_field(const std::vector<Eigen::Vector2d>& positions,
                          const std::vector<Complex>& currents, const Eigen::Vector2d& loop_center,
                          double loop_radius) {
  if (positions.size() != currents.size()) {
    throw std::invalid_argument("ampere_loop_field: positions/currents size mismatch");
  }
  Complex total(0.0, 0.0);
  for (size_t i = 0; i < positions.size(); ++i) {
    if ((positions[i] - loop_center).norm() < loop_radius) total += currents[i];
  }
  return total;
}

SheathCircuitResult sheath_circuit_model(const SheathCircuitInput& in) {
  if (!(in.sheath_radius > 0.0) || !(in.sheath_thickness > 0.0) ||
      !(in.sheath_resistivity > 0.0) || !(in.return_radius > 0.0)) {
    throw std::invalid_argument("sheath_circuit_model: geometry must be positive");
  }
  SheathCircuitResult out;
  if (in.sheath_thickness > 0.2 * in.sheath_radius) {
    out.warning = "sheath thickness exceeds 20% of its radius; thin-sheath model degraded";
  }

  const double omega = 2.0 * kPi * in.frequency;
  const double r_dc = in.sheath_resistivity / (2.0 * kPi * in.sheath_radius * in.sheath_thickness);
  const Complex jw_k(0.0, omega * kMu0 / (2.0 * kPi));

  // Flux coupling of a line source at 'src' observed around the thin tube at
  // 'obs', inside a flux wall (A = 0) of radius R: the image of the source in
  // the circle enters the log. Coaxial self-coupling uses the tube radius.
  const double R = in.return_radius;
  auto log_term = [&](const Eigen::Vector2d& obs, const Eigen::Vector2d& src, bool coaxial) {
    const double d = coaxial ? in.sheath_radius : (obs - src).norm();
    const double rho = src.norm();
    double image;
    if (rho < 1e-12 * R) {
      image = R;
    } else {
      const Eigen::Vector2d img = (R * R / (rho * rho)) * src;
      image = (obs - img).norm() * rho / R;
    }
    return std::log(image / d);
  };

  // Axial electric field balance on each sheath: resistive drop plus the EMF
  // of all currents equals zero (both ends bonded to an ideal return).
  Eigen::Matrix3cd lhs;
  Eigen::Vector3cd rhs;
  for (int i = 0; i < 3; ++i) {
    Complex drive(0.0, 0.0);
    for (int p = 0; p < 3; ++p) {
      drive -= jw_k * log_term(in.phase_centers[i], in.phase_centers[p], i == p) *
               in.phase_currents[p];
    }
    rhs(i) = drive;
    for (int j = 0; j < 3; ++j) {
      Complex m = jw_k * log_term(in.phase_centers[i], in.phase_centers[j], i == j);
      if (i == j) m += r_dc;
      lhs(i, j) = m;
    }
  }
  const Eigen::Vector3cd sol = lhs.fullPivLu().solve(rhs);
  for (int i = 0; i < 3; ++i) out.sheath_currents[i] = sol(i);
  return out;
}

}  // namespace cablefem::oracles
