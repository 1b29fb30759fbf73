#include <doctest.h>

#include <cmath>

#include "cablefem/cable_model.hpp"

using namespace cablefem;

namespace {
CableSpec load_data_cable(int i) {
  return load_cable_spec(std::string(CABLEFEM_DATA_DIR) + "/cables/cable" + std::to_string(i) +
                         ".spec");
}
}  // namespace

TEST_CASE("constant permeability ignores the field") {
  const auto model = PermeabilityModel::Constant(Complex(100.0, -50.0));
  CHECK(complex_permeability(model, 0.0) == Complex(100.0, -50.0));
  CHECK(complex_permeability(model, 1.7) == Complex(100.0, -50.0));
}

TEST_CASE("field-dependent permeability limits") {
  const auto model = PermeabilityModel::FieldDependent(80.0, 400.0, 120.0, 3.0, 2.0);
  const Complex at_zero = complex_permeability(model, 0.0);
  CHECK(at_zero.real() == doctest::Approx(80.0));
  CHECK(at_zero.imag() == doctest::Approx(0.0));
  // Saturated limit once alpha*B is large.
  const Complex sat = complex_permeability(model, 20.0 / 2.0);
  CHECK(sat.real() == doctest::Approx(480.0).epsilon(1e-6));
  CHECK(sat.imag() == doctest::Approx(-120.0).epsilon(1e-6));
  CHECK_THROWS_AS(complex_permeability(model, -0.1), std::domain_error);
}

TEST_CASE("field-dependent permeability is monotone in |B|") {
  const auto model = PermeabilityModel::FieldDependent(80.0, 400.0, 120.0, 3.0, 2.0);
  double prev_re = -1e300, prev_im = 1e300;
  for (int i = 0; i <= 200; ++i) {
    const Complex mu = complex_permeability(model, 0.02 * i);
    CHECK(mu.real() >= prev_re);
    CHECK(mu.imag() <= prev_im);
    prev_re = mu.real();
    prev_im = mu.imag();
  }
}

TEST_CASE("table rows load without invariant violations") {
  for (int i = 1; i <= 5; ++i) {
    const CableSpec spec = load_data_cable(i);
    const auto v = validate_spec(spec);
    for (const auto& s : v) MESSAGE("cable ", i, ": ", s);
    CHECK(v.empty());
  }
}

TEST_CASE("invariant violations are reported as data") {
  CableSpec spec = load_data_cable(2);
  spec.armor_wire_count = 0;
  CHECK(validate_spec(spec).size() == 1);

  CableSpec overlap = load_data_cable(4);
  // 139 wires of 5 mm fit on the 115.6 mm pitch circle; doubling the wire
  // diameter makes the arc length run out.
  CHECK(validate_spec(overlap).empty());
  overlap.armor_wire_diameter *= 2.0;
  const auto v = validate_spec(overlap);
  REQUIRE(!v.empty());
  bool found = false;
  for (const auto& s : v)
    if (s.find("overlap") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("spec files round-trip") {
  for (int i = 1; i <= 5; ++i) {
    const CableSpec a = load_data_cable(i);
    const CableSpec b = parse_cable_spec(format_cable_spec(a), a.name);
    CHECK(a.voltage_class == b.voltage_class);
    CHECK(a.conductor_material == b.conductor_material);
    CHECK(a.conductor_radius == b.conductor_radius);
    CHECK(a.sheath_thickness == b.sheath_thickness);
    CHECK(a.sheath_radius == b.sheath_radius);
    CHECK(a.core_lay_length == b.core_lay_length);
    CHECK(a.armor_wire_diameter == b.armor_wire_diameter);
    CHECK(a.armor_wire_count == b.armor_wire_count);
    CHECK(a.armor_radius == b.armor_radius);
    CHECK(a.armor_lay_length == b.armor_lay_length);
    CHECK(a.lay_relation == b.lay_relation);
    CHECK(a.core_handedness == b.core_handedness);
    CHECK(a.frequency == b.frequency);
    CHECK(a.phase_current == b.phase_current);
  }
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS(parse_cable_spec("bananas 3\n", "x"));
  CHECK_THROWS(parse_cable_spec(format_cable_spec(load_data_cable(1)) + "extra 1\n", "x"));
}
