#include "cablefem/twist_geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cablefem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Fraction {
  long long num = 0;
  long long den = 1;
};

// Continued-fraction conversion of a decimal input to an exact rational with
// bounded denominator. Lay lengths are catalog numbers with a few decimals,
// so the match is exact well within the tolerance.
Fraction to_fraction(double x, long max_denominator) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("periodic_length: lay length must be finite and > 0");
  }
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_f = std::floor(frac);
    const long long a = static_cast<long long>(a_f);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - a_f;
    if (rem < 1e-12) break;
    frac = 1.0 / rem;
  }
  const Fraction f{p1, q1};
  // Decimal catalog inputs reduce exactly (their double error is ~1e-16
  // relative); anything that still misses at 1e-12 has no usable period.
  const double err = std::abs(static_cast<double>(f.num) / static_cast<double>(f.den) - x);
  if (err > 1e-12 * std::max(1.0, std::abs(x))) {
    throw std::runtime_error(
        "periodic_length: no finite period; lay length is not a ratio of small integers");
  }
  return f;
}

long long checked_mul(long long a, long long b) {
  const __int128 r = static_cast<__int128>(a) * b;
  if (r > std::numeric_limits<long long>::max()) {
    throw std::runtime_error("periodic_length: period overflows exact arithmetic");
  }
  return static_cast<long long>(r);
}

}  // namespace

double crossing_pitch(double p_a, double p_c, LayRelation lay) {
  if (lay != LayRelation::contralay) {
    throw std::invalid_argument(
        "crossing_pitch: only contralay cables are supported (no unilay formula)");
  }
  if (!(p_a > 0.0) || !(p_c > 0.0)) {
    throw std::invalid_argument("crossing_pitch: lay lengths must be > 0");
  }
  return 1.0 / (1.0 / p_a + 1.0 / p_c);
}

double periodic_length(double p_a, double p_c, long max_denominator) {
  const Fraction fa = to_fraction(p_a, max_denominator);
  const Fraction fc = to_fraction(p_c, max_denominator);
  const long long den = std::lcm(fa.den, fc.den);
  const long long na = checked_mul(fa.num, den / fa.den);
  const long long nc = checked_mul(fc.num, den / fc.den);
  const long long g = std::gcd(na, nc);
  const long long l = checked_mul(na / g, nc);
  return static_cast<double>(l) / static_cast<double>(den);
}

double rotation_angle(double cp, double p_c, Handedness handedness) {
  if (!(cp > 0.0) || !(p_c > 0.0)) {
    throw std::invalid_argument("rotation_angle: cp and p_c must be > 0");
  }
  double theta = kTwoPi * cp / p_c;
  if (handedness == Handedness::cw) theta = -theta;
  while (theta > kTwoPi) theta -= kTwoPi;
  while (theta <= -kTwoPi) theta += kTwoPi;
  return theta;
}

Eigen::Matrix3d rotated_frame(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d m;
  m << c, s, 0.0,
      -s, c, 0.0,
      0.0, 0.0, 1.0;
  return m;
}

double core_twist(const CableSpec& spec, double z) {
  if (!std::isfinite(spec.core_lay_length)) return 0.0;
  const double sign = (spec.core_handedness == Handedness::ccw) ? 1.0 : -1.0;
  return sign * kTwoPi * z / spec.core_lay_length;
}

double armor_twist(const CableSpec& spec, double z) {
  if (!std::isfinite(spec.armor_lay_length)) return 0.0;
  double sign = (spec.core_handedness == Handedness::ccw) ? 1.0 : -1.0;
  if (spec.lay_relation == LayRelation::contralay) sign = -sign;
  return sign * kTwoPi * z / spec.armor_lay_length;
}

Eigen::Vector2d phase_center(const CableSpec& spec, int phase_index, double z) {
  if (phase_index < 0 || phase_index > 2) {
    throw std::invalid_argument("phase_center: phase_index must be 0..2");
  }
  const double r = spec.trefoil_radius();
  const double a = kTwoPi * phase_index / 3.0 + core_twist(spec, z);
  return Eigen::Vector2d(r * std::cos(a), r * std::sin(a));
}

Eigen::Vector2d armor_wire_center(const CableSpec& spec, int wire_index, double z) {
  if (wire_index < 0 || wire_index >= spec.armor_wire_count) {
    throw std::invalid_argument("armor_wire_center: wire_index out of range");
  }
  const double a = kTwoPi * wire_index / spec.armor_wire_count + armor_twist(spec, z);
  return Eigen::Vector2d(spec.armor_radius * std::cos(a), spec.armor_radius * std::sin(a));
}

TwistPlan plan(const CableSpec& spec, Strategy strategy, const PlanOptions& opts) {
  if (spec.lay_relation != LayRelation::contralay) {
    throw std::invalid_argument("plan: only contralay cables are supported");
  }
  if (opts.layers_per_cp < 2) {
    throw std::invalid_argument("plan: layers_per_cp must be >= 2");
  }
  TwistPlan p;
  p.strategy = strategy;
  p.layers_per_cp = opts.layers_per_cp;

  const bool untwisted =
      !std::isfinite(spec.core_lay_length) && !std::isfinite(spec.armor_lay_length);
  if (untwisted) {
    if (!(opts.untwisted_length > 0.0)) {
      throw std::invalid_argument("plan: untwisted cable needs an explicit model length");
    }
    p.crossing_pitch = std::numeric_limits<double>::infinity();
    p.rotation_angle = p.rotation_angle_raw = 0.0;
    p.length = opts.untwisted_length;
    p.n_layers = opts.layers_per_cp;
    switch (strategy) {
      case Strategy::non_periodic:
        p.boundary_mode = BoundaryMode::none;
        break;
      case Strategy::full_periodic:
      case Strategy::short_periodic:
        // Any length is a period of a straight cable.
        p.boundary_mode = BoundaryMode::periodic_translate;
        break;
    }
    return p;
  }

  const double cp = crossing_pitch(spec.armor_lay_length, spec.core_lay_length);
  p.crossing_pitch = cp;
  p.rotation_angle_raw =
      kTwoPi * cp / spec.core_lay_length * (spec.core_handedness == Handedness::ccw ? 1.0 : -1.0);
  p.rotation_angle = rotation_angle(cp, spec.core_lay_length, spec.core_handedness);

  switch (strategy) {
    case Strategy::short_periodic: {
      p.length = cp;
      p.boundary_mode = BoundaryMode::periodic_rotated;
      p.n_layers = opts.layers_per_cp;
      break;
    }
    case Strategy::full_periodic: {
      const double L = periodic_length(spec.armor_lay_length, spec.core_lay_length);
      p.length = L;
      p.boundary_mode = BoundaryMode::periodic_translate;
      const double cells = L / cp;  // integer by construction of the LCM
      p.n_layers = static_cast<int>(std::llround(cells * opts.layers_per_cp));
      break;
    }
    case Strategy::non_periodic: {
      if (!(opts.non_periodic_length > 0.0)) {
        throw std::invalid_argument("plan: non_periodic strategy needs a length > 0");
      }
      // Snap to the locked-step axial grid (multiples of CP/layers_per_cp) so
      // the relative core/armor twist advances an integer slot per layer.
      const double step = cp / opts.layers_per_cp;
      int n = static_cast<int>(std::llround(opts.non_periodic_length / step));
      n = std::max(n, 2);
      p.length = n * step;
      p.n_layers = n;
      p.boundary_mode = BoundaryMode::none;
      break;
    }
  }
  return p;
}

}  // namespace cablefem
