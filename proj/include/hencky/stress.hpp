// Stress measures and tangent moduli in the reference and current
// configurations, assembled from the log-space response through P_H, plus the
// closed-form parameter identification maps for the reference Voigt tangents.
#pragma once

#include <optional>
#include <span>

#include "hencky/materials.hpp"

namespace hencky {

struct StressState {
  SymTensor3 S;          // second Piola-Kirchhoff, kPa
  SymTensor3 tau;        // Kirchhoff, kPa
  SymTensor3 sigma;      // Cauchy, kPa
  Tensor4V C_mat;        // material tangent, kPa
  std::optional<Tensor4V> c_spat;  // spatial tangent, on request
  LogSpaceResponse log_space;      // underlying log-space response
};

struct ResponseOptions {
  bool spatial_tangent = false;
  // Diagnostics only: drop the geometric (K) term of the material tangent.
  bool skip_k_term = false;
};

StressState full_response(const MaterialModel& model, const Mat3& f,
                          std::span<const StructuralTensor> fibers = {},
                          const ResponseOptions& options = {});

// Material tangent at C = 1 (exp factors are one, P_H is the symmetric
// identity and the geometric term vanishes).
Tensor4V reference_tangent_voigt(const MaterialModel& model,
                                 std::span<const StructuralTensor> fibers = {});

// All six eigenvalues of a reference tangent strictly positive.
bool is_positive_definite_tangent(const Tensor4V& cv, double rel_tol = 1e-10);

struct TIParameters {
  double mu_l, mu_t, lambda, alpha, beta;
  double kappa() const { return lambda + 2.0 * mu_t / 3.0; }
};

// Inverts the transversely isotropic reference tangent (fiber along X3).
// Throws pattern_violation when the zero/coupling pattern fails.
TIParameters ti_identify(const Tensor4V& cv, double rel_tol = 1e-8);

struct OrthoParameters {
  double mu, mu1, mu2, lambda, alpha1, alpha2, beta1, beta2, beta3;
  double kappa() const { return lambda + 2.0 * mu / 3.0; }
};

// Inverts the orthotropic reference tangent (M1 = e1, M2 = e2).
OrthoParameters ortho_identify(const Tensor4V& cv, double rel_tol = 1e-8);

struct ConjugateStressReport {
  double tau_rotation_residual;  // | tau - R stress_h R^T | / scale
  double biot_fd_residual;       // | (SU+US)/2 - d psi/d U |_FD / scale
};

// Checks the work-conjugacy identities for isotropic models.
ConjugateStressReport conjugate_stress_check(const MaterialModel& model, const Mat3& f);

}  // namespace hencky
