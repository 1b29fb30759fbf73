// Helical kinematics and periodicity planning for contralay armored cables.
//
// The three phases twist with lay length p_c and the armor wires with p_a in
// the opposite direction. After one crossing pitch CP = 1/(1/p_a + 1/p_c)
// every wire re-meets the same phase, and the whole cross section at z = CP
// equals the z = 0 section rotated by theta = +-2*pi*CP/p_c. The identity
// 2*pi*CP/p_c + 2*pi*CP/p_a = 2*pi makes the armor side of that rotation a
// full extra turn, which is what the swept mesh has to absorb.
#pragma once

#include <Eigen/Dense>

#include "cablefem/cable_model.hpp"

namespace cablefem {

enum class Strategy { full_periodic, short_periodic, non_periodic };
enum class BoundaryMode { none, periodic_translate, periodic_rotated };

struct TwistPlan {
  Strategy strategy = Strategy::short_periodic;
  double length = 0.0;          // model length L
  BoundaryMode boundary_mode = BoundaryMode::none;
  double crossing_pitch = 0.0;  // CP
  double rotation_angle = 0.0;  // theta, normalized to (-2pi, 2pi]
  double rotation_angle_raw = 0.0;  // theta before normalization
  int n_layers = 0;             // axial element layers over L
  int layers_per_cp = 0;        // locked-step twist resolution
};

// Eq.-style crossing pitch for contralay cables: 1/(1/p_a + 1/p_c).
// Throws std::invalid_argument for unilay (no published formula).
double crossing_pitch(double p_a, double p_c, LayRelation lay = LayRelation::contralay);

// Smallest L > 0 that is an integer multiple of both lay lengths, computed by
// exact rational arithmetic after converting the decimal inputs to fractions
// with denominator <= max_denominator (the default covers inputs given to
// three decimals exactly). Throws if no such fraction reproduces the input
// essentially exactly, or when the result overflows.
double periodic_length(double p_a, double p_c, long max_denominator = 1000);

// theta = +-2*pi*CP/p_c, plus sign for counterclockwise phases.
// Returns the value normalized to (-2pi, 2pi].
double rotation_angle(double cp, double p_c, Handedness handedness);

// In-plane rotation of the global frame by theta about e_z; rows are the
// rotated basis vectors.
Eigen::Matrix3d rotated_frame(double theta);

// Signed twist rate helpers: angle added to the reference cross section at
// axial position z. Cores and armor rotate in opposite directions (contralay).
double core_twist(const CableSpec& spec, double z);
double armor_twist(const CableSpec& spec, double z);

// Center of phase conductor 0..2 at axial position z.
Eigen::Vector2d phase_center(const CableSpec& spec, int phase_index, double z);

// Center of armor wire 0..N-1 at axial position z.
Eigen::Vector2d armor_wire_center(const CableSpec& spec, int wire_index, double z);

struct PlanOptions {
  double non_periodic_length = 0.0;  // L for Strategy::non_periodic
  int layers_per_cp = 40;            // axial layers per crossing pitch
  // Length for full_periodic plans on untwisted cables (both lay lengths
  // infinite), where any L is a period.
  double untwisted_length = 0.0;
};

// Builds the model-length / boundary-condition plan for a strategy.
TwistPlan plan(const CableSpec& spec, Strategy strategy, const PlanOptions& opts = {});

}  // namespace cablefem
