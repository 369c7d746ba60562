#include "hencky/kinematics.hpp"

#include <cmath>
#include <string>

namespace hencky {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

StructuralTensor StructuralTensor::from_direction(const Vec3& a) {
  StructuralTensor st;
  st.A = a.normalized();
  st.M = SymTensor3::dyad(st.A);
  return st;
}

StructuralTensor StructuralTensor::from_angle(double beta_deg, int axis1, int axis2) {
  const double b = beta_deg * kPi / 180.0;
  Vec3 a;
  a[axis1] = std::cos(b);
  a[axis2] = std::sin(b);
  return from_direction(a);
}

std::pair<StructuralTensor, StructuralTensor> fiber_pair(double beta_deg, int axis1, int axis2) {
  return {StructuralTensor::from_angle(beta_deg, axis1, axis2),
          StructuralTensor::from_angle(-beta_deg, axis1, axis2)};
}

DeformationState state_from_F(const Mat3& f) {
  DeformationState s;
  s.F = f;
  s.J = f.det();
  const double tol = kPositiveDefiniteRel * std::max(1.0, std::abs(f(0, 0)) + std::abs(f(1, 1)) + std::abs(f(2, 2)));
  if (s.J <= tol)
    throw Error(ErrorCode::non_invertible,
                "state_from_F: det F = " + std::to_string(s.J) + " is not positive");
  s.C = SymTensor3::from_full(f.transposed() * f);
  s.spectral_C = spectral_decompose(s.C);
  s.U = s.spectral_C.apply([](double l) { return std::sqrt(l); });
  s.log_U = s.spectral_C.apply([](double l) { return 0.5 * std::log(l); });
  s.tr_log_U = s.log_U.trace();
  s.dev_log_U = deviator(s.log_U);
  return s;
}

PrincipalInvariants principal_invariants(const SymTensor3& c) {
  PrincipalInvariants inv{};
  inv.i1 = c.trace();
  // tr Cof C = sum of 2x2 principal minors
  inv.i2 = (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) + (c(0, 0) * c(2, 2) - c(0, 2) * c(2, 0)) +
           (c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0));
  inv.i3 = c.det();
  return inv;
}

HenckyInvariants hencky_invariants(const SymTensor3& log_u) {
  HenckyInvariants inv{};
  inv.j1 = log_u.trace();
  inv.j2 = log_u.dot(log_u);
  inv.j3 = SymTensor3::sym(product(log_u, log_u)).dot(log_u);
  return inv;
}

double mixed_invariant(const DeformationState& state, const StructuralTensor& m,
                       InvariantFamily family, int exponent) {
  const Spectral& s = state.spectral_C;
  double value = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double lam = s.eigenvalues[static_cast<std::size_t>(k)];
    const double base = family == InvariantFamily::cauchy_green ? lam : 0.5 * std::log(lam);
    const double cos2 = s.projections[static_cast<std::size_t>(k)].dot(m.M);
    value += ipow(base, exponent) * cos2;
  }
  return value;
}

double cofactor_invariant(const DeformationState& state, const StructuralTensor& m) {
  const Spectral& s = state.spectral_C;
  const double det_c = s.eigenvalues[0] * s.eigenvalues[1] * s.eigenvalues[2];
  double value = 0.0;
  for (int k = 0; k < 3; ++k)
    value += det_c / s.eigenvalues[static_cast<std::size_t>(k)] *
             s.projections[static_cast<std::size_t>(k)].dot(m.M);
  return value;
}

LogCofactorInvariant log_cofactor_invariant(const DeformationState& state,
                                            const StructuralTensor& m) {
  LogCofactorInvariant r;
  r.log_cof_U = SymTensor3::identity() * state.tr_log_U - state.log_U;
  r.j5h = r.log_cof_U.dot(m.M);
  return r;
}

}  // namespace hencky
