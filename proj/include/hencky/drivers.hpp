// Homogeneous-deformation case studies: uniaxial, simple shear, biaxial and
// biaxial tension-compression sweeps of the fiber energies (anisotropic stress
// only), invariant maps over the unit sphere of fiber directions, and the
// incompressible two-fiber uniaxial solver.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hencky/materials.hpp"

namespace hencky {

struct CurvePoint {
  double control = 0.0;                       // F11, amount of shear, or stretch
  std::map<std::string, double> invariants;   // I4C1..I4C4, I4H1..I4H4, extras
  SymTensor3 sigma_aniso;                     // kPa (or normalized)
  std::optional<double> sigma_ratio;          // sig22/sig11 where applicable
  bool normalized = false;
};

// Incompressible uniaxial sweep, fiber aligned with the load:
// F = diag(l, 1/sqrt(l), 1/sqrt(l)).
std::vector<CurvePoint> drive_uniaxial(const FiberModel& fiber_model, double lambda_lo,
                                       double lambda_hi, int steps, bool normalize = false);

// Simple shear F = 1 + gamma e1 (x) e3 with the fiber along the shear
// direction e1.
std::vector<CurvePoint> drive_simple_shear(const FiberModel& fiber_model, double gamma_hi,
                                           int steps, bool normalize = false);

// Biaxial tension with two fiber families at +/- beta_f in the (1,2) plane;
// stretches ramp linearly from 1 to (r1, r2), F33 = 1/(F11 F22).
std::vector<CurvePoint> drive_biaxial(const FiberModel& fiber_model, double beta_f_deg, double r1,
                                      double r2, int steps, bool normalize = false);

// Biaxial tension-compression: F11 = l >= 1, F22 = F33 = 1/sqrt(l).
std::vector<CurvePoint> drive_biaxial_tc(const FiberModel& fiber_model, double beta_f_deg,
                                         double lambda1_hi, int steps, bool normalize = false);

struct SphereGrid {
  std::array<double, 3> eigenvalues{};  // of C, axis order as given
  InvariantFamily family = InvariantFamily::cauchy_green;
  int exponent = 1;
  int n_theta = 181;  // theta in [0, pi]
  int n_phi = 361;    // phi in [-pi, pi]
  std::vector<double> values;  // invariant, row-major theta x phi
  std::vector<int> signs;      // switch-criterion sign in {-1, 0, +1}

  double theta_deg(int it) const { return 180.0 * it / (n_theta - 1); }
  double phi_deg(int ip) const { return -180.0 + 360.0 * ip / (n_phi - 1); }
  double value(int it, int ip) const { return values[static_cast<std::size_t>(it * n_phi + ip)]; }
  int sign(int it, int ip) const { return signs[static_cast<std::size_t>(it * n_phi + ip)]; }
};

// Default eigenvalues of the switch-criterion study: {0.9, 1.65, 1/(0.9*1.65)}.
inline std::array<double, 3> sphere_default_eigenvalues() {
  return {0.9, 1.65, 1.0 / (0.9 * 1.65)};
}

SphereGrid sphere_map(const std::array<double, 3>& eigenvalues, InvariantFamily family,
                      int exponent, int n_theta = 181, int n_phi = 361);

struct TwoFiberPoint {
  double lambda1 = 1.0;      // prescribed stretch (of U) along the load axis
  double lambda2 = 1.0;      // converged free in-plane stretch
  double pressure = 0.0;     // Lagrange multiplier from S_transverse = 0
  double sigma = 0.0;        // Cauchy stress along the load axis, kPa
  bool converged = true;
  std::vector<double> residual_trace;  // |S33| per Newton iteration
};

// Incompressible uniaxial response of an isotropic host plus two fiber
// families at +/- beta_f from the circumferential axis in the (1,2) plane.
// load_axis 0 pulls circumferentially, 1 axially. lambda1 values are stretches
// of U; the Newton iteration runs on the squared free stretch.
std::vector<TwoFiberPoint> uniaxial_two_fiber(const IsotropicModel& isotropic,
                                              const FiberModel& fiber_model, double beta_f_deg,
                                              std::span<const double> lambda1, int load_axis = 0);

Composite two_fiber_composite(const IsotropicModel& isotropic, const FiberModel& fiber_model,
                              double beta_f_deg);

}  // namespace hencky
