#include <doctest.h>

#include <cmath>

#include "cablefem/twist_geometry.hpp"

using namespace cablefem;

namespace {
constexpr double kPi = 3.14159265358979323846;

CableSpec load_data_cable(int i) {
  return load_cable_spec(std::string(CABLEFEM_DATA_DIR) + "/cables/cable" + std::to_string(i) +
                         ".spec");
}

// Small deterministic generator for property checks.
struct Lcg {
  uint64_t s = 0x853c49e6748fea9bull;
  double uniform(double lo, double hi) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return lo + (hi - lo) * ((s >> 11) * 0x1.0p-53);
  }
};
}  // namespace

TEST_CASE("crossing pitch reproduces the published values") {
  CHECK(crossing_pitch(0.4, 1.2) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(crossing_pitch(3.5, 2.8) == doctest::Approx(1.5555555556).epsilon(1e-9));
  CHECK(crossing_pitch(2.2, 3.6) == doctest::Approx(1.3655172414).epsilon(1e-9));
  CHECK(crossing_pitch(3.6, 4.0) == doctest::Approx(1.8947368421).epsilon(1e-9));
  CHECK(crossing_pitch(0.7, 0.7) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK_THROWS(crossing_pitch(1.0, 1.0, LayRelation::unilay));
}

TEST_CASE("crossing pitch identity holds for random rationals") {
  Lcg rng;
  for (int i = 0; i < 500; ++i) {
    const double pa = std::round(rng.uniform(1, 5000)) / 1000.0;
    const double pc = std::round(rng.uniform(1, 5000)) / 1000.0;
    const double cp = crossing_pitch(pa, pc);
    CHECK(cp * (1.0 / pa + 1.0 / pc) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cp < std::min(pa, pc));
  }
}

TEST_CASE("periodic length is the exact rational lcm") {
  CHECK(periodic_length(3.5, 2.8) == doctest::Approx(14.0).epsilon(1e-12));
  CHECK(periodic_length(3.6, 4.0) == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(periodic_length(0.4, 1.2) == doctest::Approx(1.2).epsilon(1e-12));
  // lcm(11/5, 18/5) = 198/5; the published table value 7.2 differs and is
  // documented as a discrepancy.
  CHECK(periodic_length(2.2, 3.6) == doctest::Approx(39.6).epsilon(1e-12));
  CHECK_THROWS(periodic_length(kPi, 1.0));
}

TEST_CASE("periodic length divides both lay lengths to zero remainder") {
  Lcg rng;
  for (int i = 0; i < 200; ++i) {
    const double pa = std::round(rng.uniform(100, 5000)) / 1000.0;
    const double pc = std::round(rng.uniform(100, 5000)) / 1000.0;
    const double L = periodic_length(pa, pc);
    const double na = L / pa, nc = L / pc;
    CHECK(na == doctest::Approx(std::round(na)).epsilon(1e-10));
    CHECK(nc == doctest::Approx(std::round(nc)).epsilon(1e-10));
  }
}

TEST_CASE("rotation angle follows the handedness sign convention") {
  CHECK(rotation_angle(0.3, 1.2, Handedness::ccw) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(rotation_angle(0.3, 1.2, Handedness::cw) == doctest::Approx(-kPi / 2).epsilon(1e-12));
  const double cp2 = crossing_pitch(3.5, 2.8);
  CHECK(rotation_angle(cp2, 2.8, Handedness::ccw) == doctest::Approx(3.4907).epsilon(1e-4));
}

TEST_CASE("rotated frame is orthonormal and inverts") {
  CHECK(rotated_frame(0.0).isIdentity(1e-15));
  const Eigen::Matrix3d r = rotated_frame(kPi / 2);
  // e'_x = e_y, e'_y = -e_x, e'_z = e_z (rows of the frame matrix).
  CHECK(r(0, 1) == doctest::Approx(1.0));
  CHECK(r(1, 0) == doctest::Approx(-1.0));
  CHECK(r(2, 2) == doctest::Approx(1.0));
  Lcg rng;
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(-10, 10);
    const Eigen::Matrix3d a = rotated_frame(t);
    CHECK((a * rotated_frame(-t) - Eigen::Matrix3d::Identity()).norm() < 1e-14);
    CHECK((a * a.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-14);
    CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("phase centers follow the core helix") {
  const CableSpec spec = load_data_cable(1);
  const double rt = spec.trefoil_radius();
  const Eigen::Vector2d p0 = phase_center(spec, 0, 0.0);
  CHECK(p0.x() == doctest::Approx(rt).epsilon(1e-12));
  CHECK(p0.y() == doctest::Approx(0.0));
  // Full turn.
  CHECK((phase_center(spec, 1, spec.core_lay_length) - phase_center(spec, 1, 0.0)).norm() < 1e-12);
  // At z = CP the trefoil is the z = 0 trefoil rotated by theta.
  const double cp = crossing_pitch(spec.armor_lay_length, spec.core_lay_length);
  const double theta = rotation_angle(cp, spec.core_lay_length, spec.core_handedness);
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d at_cp = phase_center(spec, i, cp);
    const Eigen::Vector2d base = phase_center(spec, i, 0.0);
    const Eigen::Vector2d rot(std::cos(theta) * base.x() - std::sin(theta) * base.y(),
                              std::sin(theta) * base.x() + std::cos(theta) * base.y());
    CHECK((at_cp - rot).norm() < 1e-12);
  }
}

TEST_CASE("armor wire centers follow the contralay helix") {
  const CableSpec spec = load_data_cable(1);
  CHECK((armor_wire_center(spec, 5, spec.armor_lay_length) - armor_wire_center(spec, 5, 0.0))
            .norm() < 1e-12);
  const double gap = (armor_wire_center(spec, 3, 0.0) - armor_wire_center(spec, 4, 0.0)).norm();
  CHECK(gap == doctest::Approx(2.0 * spec.armor_radius *
                               std::sin(kPi / spec.armor_wire_count)).epsilon(1e-12));
}

TEST_CASE("end-face congruence for every published cable") {
  for (int c = 1; c <= 5; ++c) {
    const CableSpec spec = load_data_cable(c);
    const double cp = crossing_pitch(spec.armor_lay_length, spec.core_lay_length);
    const double theta = rotation_angle(cp, spec.core_lay_length, spec.core_handedness);
    const double co = std::cos(theta), si = std::sin(theta);
    auto rotate = [&](const Eigen::Vector2d& p) {
      return Eigen::Vector2d(co * p.x() - si * p.y(), si * p.x() + co * p.y());
    };
    for (int i = 0; i < 3; ++i) {
      CHECK((phase_center(spec, i, cp) - rotate(phase_center(spec, i, 0.0))).norm() < 1e-12);
    }
    for (int k = 0; k < spec.armor_wire_count; ++k) {
      CHECK((armor_wire_center(spec, k, cp) - rotate(armor_wire_center(spec, k, 0.0))).norm() <
            1e-12);
    }
  }
}

TEST_CASE("curves repeat with the periodic length") {
  const CableSpec spec = load_data_cable(2);
  const double L = periodic_length(spec.armor_lay_length, spec.core_lay_length);
  for (double z : {0.0, 0.37, 1.9}) {
    CHECK((phase_center(spec, 2, z + L) - phase_center(spec, 2, z)).norm() < 1e-12);
    CHECK((armor_wire_center(spec, 17, z + L) - armor_wire_center(spec, 17, z)).norm() < 1e-12);
  }
}

TEST_CASE("plan picks lengths and boundary modes per strategy") {
  const CableSpec c2 = load_data_cable(2);
  PlanOptions opts;
  const TwistPlan p2 = plan(c2, Strategy::short_periodic, opts);
  CHECK(p2.length == doctest::Approx(1.5556).epsilon(1e-4));
  CHECK(p2.boundary_mode == BoundaryMode::periodic_rotated);
  CHECK(p2.rotation_angle == doctest::Approx(3.4907).epsilon(1e-4));
  CHECK(p2.n_layers == opts.layers_per_cp);

  const CableSpec c4 = load_data_cable(4);
  const TwistPlan p4 = plan(c4, Strategy::full_periodic, opts);
  CHECK(p4.length == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(p4.boundary_mode == BoundaryMode::periodic_translate);
  CHECK(p4.n_layers == opts.layers_per_cp * 19);  // 36 m / 1.894... m = 19 crossing pitches

  const CableSpec c1 = load_data_cable(1);
  PlanOptions np;
  np.non_periodic_length = 1.25 * 0.3;
  const TwistPlan p1 = plan(c1, Strategy::non_periodic, np);
  CHECK(p1.length == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(p1.boundary_mode == BoundaryMode::none);

  // The congruence identity behind the short model.
  CHECK(p2.crossing_pitch * (1.0 / c2.armor_lay_length + 1.0 / c2.core_lay_length) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("plan rejects impossible requests") {
  const CableSpec c1 = load_data_cable(1);
  CHECK_THROWS(plan(c1, Strategy::non_periodic, PlanOptions{}));  // no length given
  CableSpec uni = c1;
  uni.lay_relation = LayRelation::unilay;
  CHECK_THROWS(plan(uni, Strategy::short_periodic, PlanOptions{}));
  CableSpec irr = c1;
  irr.armor_lay_length = kPi / 7.0;
  CHECK_THROWS(plan(irr, Strategy::full_periodic, PlanOptions{}));
}
