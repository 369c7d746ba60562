#include "hencky/stress.hpp"

#include <cmath>

#include "hencky/spectral_calculus.hpp"

namespace hencky {

namespace {

Tensor4V sandwich_ph(const Tensor4V& p_h, const Tensor4V& c_h) {
  return contract44(contract44(p_h, c_h), p_h);
}

SymTensor3 push_forward(const Mat3& f, const SymTensor3& s) {
  return SymTensor3::sym(f * s.full() * f.transposed());
}

// Cyclic Jacobi eigenvalues of a symmetric 6x6.
std::array<double, 6> sym66_eigenvalues(const Tensor4V& a0) {
  std::array<std::array<double, 6>, 6> a;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
        0.5 * (a0(i, j) + a0(j, i));
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 6; ++p)
      for (int q = p + 1; q < 6; ++q) off += std::abs(a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]);
    if (off == 0.0) break;
    for (int p = 0; p < 6; ++p)
      for (int q = p + 1; q < 6; ++q) {
        const double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
        if (apq == 0.0) continue;
        const double theta = 0.5 * (a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] -
                                    a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)]) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < 6; ++r) {
          const double arp = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(p)];
          const double arq = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)];
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(p)] = c * arp - s * arq;
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)] = s * arp + c * arq;
        }
        for (int r = 0; r < 6; ++r) {
          const double apr = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(r)];
          const double aqr = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)];
          a[static_cast<std::size_t>(p)][static_cast<std::size_t>(r)] = c * apr - s * aqr;
          a[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] = s * apr + c * aqr;
        }
      }
  }
  std::array<double, 6> ev;
  for (int i = 0; i < 6; ++i) ev[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return ev;
}

double max_abs_entry(const Tensor4V& cv) {
  double m = 0.0;
  for (double x : cv.m) m = std::max(m, std::abs(x));
  return m;
}

void require_pattern(bool ok, const char* what) {
  if (!ok)
    throw Error(ErrorCode::pattern_violation,
                std::string("reference tangent does not have the expected structure: ") + what);
}

}  // namespace

StressState full_response(const MaterialModel& model, const Mat3& f,
                          std::span<const StructuralTensor> fibers,
                          const ResponseOptions& options) {
  const DeformationState state = state_from_F(f);
  StressState out;
  out.log_space = evaluate(model, state, fibers);

  const LogDerivatives ld = projection_PH(state.spectral_C);
  out.S = contract42(ld.p_h, out.log_space.stress_h);
  out.C_mat = sandwich_ph(ld.p_h, out.log_space.tangent_h);
  if (!options.skip_k_term) out.C_mat += contract_K(out.log_space.stress_h, state.spectral_C);
  out.C_mat.has_major_symmetry = true;

  out.tau = push_forward(f, out.S);
  out.sigma = out.tau * (1.0 / state.J);

  if (options.spatial_tangent)
    out.c_spat = congruence_sandwich(congruence_operator(f), out.C_mat);
  return out;
}

Tensor4V reference_tangent_voigt(const MaterialModel& model,
                                 std::span<const StructuralTensor> fibers) {
  const DeformationState id = state_from_F(Mat3::identity());
  Tensor4V cv = evaluate(model, id, fibers).tangent_h;
  cv.has_major_symmetry = true;
  return cv;
}

bool is_positive_definite_tangent(const Tensor4V& cv, double rel_tol) {
  const std::array<double, 6> ev = sym66_eigenvalues(cv);
  double lo = ev[0], hi = ev[0];
  for (double e : ev) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return lo > rel_tol * hi && hi > 0.0;
}

TIParameters ti_identify(const Tensor4V& cv, double rel_tol) {
  const double tol = rel_tol * std::max(1.0, max_abs_entry(cv));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const bool block = i < 3 && j < 3;
      const bool diag = i == j;
      if (!block && !diag) require_pattern(std::abs(cv(i, j)) <= tol, "off-pattern entry");
    }
  require_pattern(std::abs(cv(0, 0) - cv(1, 1)) <= tol, "C11 != C22");
  require_pattern(std::abs(cv(0, 2) - cv(1, 2)) <= tol, "C13 != C23");
  require_pattern(std::abs(cv(4, 4) - cv(5, 5)) <= tol, "C55 != C66");
  require_pattern(std::abs(cv(3, 3) - 0.5 * (cv(0, 0) - cv(0, 1))) <= tol,
                  "C44 != (C11 - C12)/2");

  TIParameters p{};
  p.mu_l = cv(4, 4);
  p.mu_t = 0.5 * (cv(0, 0) - cv(0, 1));
  p.lambda = cv(0, 1);
  p.alpha = cv(0, 2) - cv(0, 1);
  p.beta = cv(0, 0) + cv(2, 2) - 2.0 * cv(0, 2) - 4.0 * cv(4, 4);
  return p;
}

OrthoParameters ortho_identify(const Tensor4V& cv, double rel_tol) {
  const double tol = rel_tol * std::max(1.0, max_abs_entry(cv));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const bool block = i < 3 && j < 3;
      const bool diag = i == j;
      if (!block && !diag) require_pattern(std::abs(cv(i, j)) <= tol, "off-pattern entry");
    }

  OrthoParameters p{};
  p.mu = cv(4, 4) + cv(5, 5) - cv(3, 3);
  p.mu1 = cv(3, 3) - cv(4, 4);
  p.mu2 = cv(3, 3) - cv(5, 5);
  p.lambda = cv(2, 2) - 2.0 * p.mu;
  p.alpha1 = cv(0, 2) - p.lambda;
  p.alpha2 = cv(1, 2) - p.lambda;
  p.beta1 = cv(0, 0) + cv(2, 2) - 2.0 * cv(0, 2) - 4.0 * cv(5, 5);
  p.beta2 = cv(1, 1) + cv(2, 2) - 2.0 * cv(1, 2) - 4.0 * cv(4, 4);
  p.beta3 = cv(0, 1) - cv(0, 2) - cv(1, 2) + cv(2, 2) + 2.0 * (cv(3, 3) - cv(4, 4) - cv(5, 5));
  return p;
}

ConjugateStressReport conjugate_stress_check(const MaterialModel& model, const Mat3& f) {
  const StressState full = full_response(model, f);
  const DeformationState state = state_from_F(f);

  // polar decomposition F = R U
  const SymTensor3 u_inv = state.spectral_C.apply([](double l) { return 1.0 / std::sqrt(l); });
  const Mat3 rot = f * u_inv.full();

  const SymTensor3 tau_from_log =
      SymTensor3::sym(rot * full.log_space.stress_h.full() * rot.transposed());
  const SymTensor3 dtau = full.tau - tau_from_log;

  ConjugateStressReport rep{};
  rep.tau_rotation_residual = dtau.norm() / std::max(full.tau.norm(), 1.0);

  // Biot stress (SU + US)/2 against a finite-difference gradient of the
  // energy with respect to U
  const SymTensor3 biot =
      SymTensor3::sym(full.S.full() * state.U.full() + state.U.full() * full.S.full()) * 0.5;

  SymTensor3 biot_fd;
  const double h = 1e-6 * std::max(1.0, state.U.norm());
  for (int s = 0; s < 6; ++s) {
    SymTensor3 du;
    du[s] = 1.0;
    const bool shear = s >= 3;
    auto energy_at = [&](double step) {
      SymTensor3 u = state.U;
      u[s] += step;
      const SymTensor3 c = SymTensor3::from_full(u.full() * u.full());
      DeformationState st;
      st.F = u.full();
      st.J = u.det();
      st.C = c;
      st.spectral_C = spectral_decompose(c);
      st.U = u;
      st.log_U = st.spectral_C.apply([](double l) { return 0.5 * std::log(l); });
      st.tr_log_U = st.log_U.trace();
      st.dev_log_U = deviator(st.log_U);
      return evaluate(model, st).energy;
    };
    const double g = (energy_at(h) - energy_at(-h)) / (2.0 * h);
    // a shear slot update touches both (i,j) and (j,i)
    biot_fd[s] = shear ? 0.5 * g : g;
  }
  const SymTensor3 dbiot = biot - biot_fd;
  rep.biot_fd_residual = dbiot.norm() / std::max(biot.norm(), 1.0);
  return rep;
}

}  // namespace hencky
