#include <doctest.h>

#include <cmath>

#include "cablefem/analytic_oracles.hpp"

using namespace cablefem::oracles;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMu0 = 4.0 * kPi * 1e-7;
}  // namespace

TEST_CASE("skin effect ratio matches high-precision references") {
  // Frozen from an independent 30-digit evaluation of the Kelvin solution.
  CHECK(skin_effect_ratio(0.1) == doctest::Approx(1.00000208333).epsilon(1e-10));
  CHECK(skin_effect_ratio(0.3) == doctest::Approx(1.00016872722).epsilon(1e-10));
  CHECK(skin_effect_ratio(1.0) == doctest::Approx(1.02049238886).epsilon(1e-10));
  CHECK(skin_effect_ratio(3.0) == doctest::Approx(1.76813165251).epsilon(1e-10));
  CHECK(skin_effect_ratio(10.0) == doctest::Approx(5.25930185751).epsilon(1e-9));
}

TEST_CASE("skin effect limits") {
  CHECK(skin_effect_ratio(0.0) == doctest::Approx(1.0));
  // Low-frequency expansion 1 + q^4/48.
  for (double q : {0.05, 0.1, 0.2}) {
    CHECK(skin_effect_ratio(q) ==
          doctest::Approx(1.0 + std::pow(q, 4) / 48.0).epsilon(1e-6));
  }
  // Large-argument asymptote q/2 + 1/4.
  for (double q : {20.0, 40.0}) {
    CHECK(skin_effect_ratio(q) == doctest::Approx(q / 2.0 + 0.25).epsilon(1e-2));
  }
}

TEST_CASE("copper 3.5 mm wire at 50 Hz") {
  const double sigma = 1.0 / 1.7241e-8;
  const auto r = round_wire_ac_resistance(0.0035, sigma, kMu0, 50.0);
  CHECK(r.value == doctest::Approx(4.481819553e-4).epsilon(1e-8));
  CHECK(r.value / round_wire_dc_resistance(0.0035, sigma) ==
        doctest::Approx(1.00040966).epsilon(1e-8));
  CHECK(r.truncation_bound < 1e-10 * r.value);
  CHECK(!r.asymptotic);
}

TEST_CASE("oracle falls back to the asymptote and flags it") {
  // Thick steel-like rod far into the skin regime.
  const auto r = round_wire_ac_resistance(0.06, 5e6, kMu0 * 300.0, 50.0);
  CHECK(r.asymptotic);
  const double delta = std::sqrt(2.0 / (2.0 * kPi * 50.0 * kMu0 * 300.0 * 5e6));
  const double q = 0.06 / delta;
  CHECK(r.value / round_wire_dc_resistance(0.06, 5e6) ==
        doctest::Approx(q / 2.0 + 0.25).epsilon(1e-2));
}

TEST_CASE("ampere loop counts enclosed currents exactly") {
  std::vector<Eigen::Vector2d> pos{{0.0, 0.0}, {0.05, 0.0}, {-0.025, 0.0433}};
  const Complex a(100.0, 0.0);
  const Complex b = a * std::polar(1.0, -2.0 * kPi / 3.0);
  const Complex c = a * std::polar(1.0, 2.0 * kPi / 3.0);
  std::vector<Complex> cur{a, b, c};
  CHECK(std::abs(ampere_loop_field(pos, cur, {0.0, 0.0}, 0.01) - a) < 1e-12);
  CHECK(std::abs(ampere_loop_field(pos, cur, {0.0, 0.0}, 1.0)) < 1e-12);
  CHECK(std::abs(ampere_loop_field(pos, cur, {0.05, 0.0}, 0.01) - b) < 1e-12);
}

TEST_CASE("sheath circuit model limits") {
  SheathCircuitInput in;
  const double rt = 0.02;
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * kPi * i / 3.0;
    in.phase_centers[i] = rt * Eigen::Vector2d(std::cos(a), std::sin(a));
  }
  const double mag = 400.0;
  in.phase_currents = {Complex(mag, 0), mag * std::polar(1.0, -2.0 * kPi / 3.0),
                       mag * std::polar(1.0, 2.0 * kPi / 3.0)};
  in.sheath_radius = 0.015;
  in.sheath_thickness = 0.0012;
  in.sheath_resistivity = 2.14e-7;
  in.return_radius = 0.3;  // far wall: image terms nearly vanish

  in.frequency = 1e-6;
  const auto dc = sheath_circuit_model(in);
  for (const auto& cI : dc.sheath_currents) CHECK(std::abs(cI) < 1e-6 * mag);

  in.frequency = 50.0;
  const auto ac = sheath_circuit_model(in);
  const double m0 = std::abs(ac.sheath_currents[0]);
  CHECK(m0 > 0.01 * mag);  // solid bonding drives real circulating currents
  CHECK(std::abs(ac.sheath_currents[1]) == doctest::Approx(m0).epsilon(1e-9));
  CHECK(std::abs(ac.sheath_currents[2]) == doctest::Approx(m0).epsilon(1e-9));
  CHECK(ac.warning.empty());

  in.sheath_thickness = 0.006;
  CHECK(!sheath_circuit_model(in).warning.empty());
}
