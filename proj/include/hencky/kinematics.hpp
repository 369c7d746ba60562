// Deformation-gradient derived quantities and the invariant catalog:
// principal invariants of C, basic Hencky invariants of log U, and the mixed
// (structural-tensor) invariants of both strain measures.
#pragma once

#include <utility>

#include "hencky/tensor.hpp"

namespace hencky {

struct DeformationState {
  Mat3 F;
  double J = 1.0;
  SymTensor3 C;
  Spectral spectral_C;
  SymTensor3 U;
  SymTensor3 log_U;
  SymTensor3 dev_log_U;
  double tr_log_U = 0.0;
};

struct StructuralTensor {
  Vec3 A;        // unit preferred direction
  SymTensor3 M;  // A (x) A

  static StructuralTensor from_direction(const Vec3& a);
  // In-plane direction at angle (degrees) from axis1 toward axis2.
  static StructuralTensor from_angle(double beta_deg, int axis1 = 0, int axis2 = 1);
};

// Symmetric fiber pair at +/- beta_f from axis1 in the (axis1, axis2) plane.
std::pair<StructuralTensor, StructuralTensor> fiber_pair(double beta_deg, int axis1 = 0,
                                                         int axis2 = 1);

// Throws non_invertible when det F is not safely positive.
DeformationState state_from_F(const Mat3& f);

struct PrincipalInvariants {
  double i1, i2, i3;
};
PrincipalInvariants principal_invariants(const SymTensor3& c);

struct HenckyInvariants {
  double j1, j2, j3;  // tr, squared norm, tr of cube
};
HenckyInvariants hencky_invariants(const SymTensor3& log_u);

enum class InvariantFamily { cauchy_green, hencky };

// I4^{C^i} = <C^i, M> or I4^{H^i} = <(log U)^i, M>, evaluated spectrally.
double mixed_invariant(const DeformationState& state, const StructuralTensor& m,
                       InvariantFamily family, int exponent);

// J5^C = <Cof C, M>; kept for completeness checks, not used by any energy.
double cofactor_invariant(const DeformationState& state, const StructuralTensor& m);

struct LogCofactorInvariant {
  double j5h;
  SymTensor3 log_cof_U;
};
LogCofactorInvariant log_cofactor_invariant(const DeformationState& state,
                                            const StructuralTensor& m);

}  // namespace hencky
