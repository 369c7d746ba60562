#include "hencky/fdcheck.hpp"

#include <cmath>
#include <random>

#include "hencky/stress.hpp"

namespace hencky {

namespace {

using Rng = std::mt19937_64;

double uni(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Mat3 rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4] = {n(rng), n(rng), n(rng), n(rng)};
  double s = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& x : q) x /= s;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 r;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - w * z);
  r(0, 2) = 2 * (x * z + w * y);
  r(1, 0) = 2 * (x * y + w * z);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - w * x);
  r(2, 0) = 2 * (x * z - w * y);
  r(2, 1) = 2 * (y * z + w * x);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

Vec3 unit_vector(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{{n(rng), n(rng), n(rng)}};
  while (v.norm() < 1e-8) v = Vec3{{n(rng), n(rng), n(rng)}};
  return v.normalized();
}

Mat3 deformation(Rng& rng) {
  const Mat3 d = Mat3::diag(uni(rng, 0.88, 1.18), uni(rng, 0.88, 1.18), uni(rng, 0.88, 1.18));
  return rotation(rng) * d * rotation(rng);
}

struct CatalogEntry {
  std::string name;
  MaterialModel model;
  std::size_t arity;
};

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> list;
  list.push_back({"iso_hencky", IsoHencky{2.5, 5.0}, 0});
  list.push_back({"iso_exp_hencky", IsoExpHencky{2.5, 5.0, 1.2, 0.9}, 0});
  list.push_back({"ti_hencky", TIHencky::from_lame(5.64, 2.64, 1.27, 0.29, 5.66), 1});
  list.push_back({"ti_exp_hencky",
                  TIExpHencky::from_lame(5.64, 2.64, 1.27, 0.29, 5.66, {1.0, 1.1, 2.0, 3.0, 1.5}),
                  1});
  OrthoHencky ortho;
  ortho.mu = 2.0;
  ortho.kappa = 3.0;
  ortho.alpha1 = 0.5;
  ortho.alpha2 = -0.3;
  ortho.mu1 = 1.0;
  ortho.mu2 = 0.5;
  ortho.beta1 = 0.7;
  ortho.beta2 = 0.4;
  ortho.beta3 = 0.2;
  list.push_back({"ortho_hencky", ortho, 2});
  OrthoExpHencky oe;
  oe.mu = ortho.mu;
  oe.kappa = ortho.kappa;
  oe.alpha1 = ortho.alpha1;
  oe.alpha2 = ortho.alpha2;
  oe.mu1 = ortho.mu1;
  oe.mu2 = ortho.mu2;
  oe.beta1 = ortho.beta1;
  oe.beta2 = ortho.beta2;
  oe.beta3 = ortho.beta3;
  oe.k = {1.0, 1.2, 0.8, 1.5, 2.0, 1.1, 0.9, 1.3, 1.7};
  list.push_back({"ortho_exp_hencky", oe, 2});
  for (int i = 1; i <= 4; ++i) {
    list.push_back({"fiber_c_i" + std::to_string(i), FiberC{1.5, 0.8, i, false}, 1});
    list.push_back({"fiber_c_switched_i" + std::to_string(i), FiberC{1.5, 0.8, i, true}, 1});
    list.push_back({"fiber_h_i" + std::to_string(i), FiberH{1.5, 0.8, i, 0.0, false}, 1});
    list.push_back({"fiber_h_switched_i" + std::to_string(i), FiberH{1.5, 0.8, i, 0.1, true}, 1});
  }
  list.push_back({"fiber_poly_k2", FiberPolyC{1.0, 2}, 1});
  list.push_back({"fiber_poly_k4", FiberPolyC{1.0, 4}, 1});
  list.push_back({"fiber_hgo", FiberHGO{1.5, 0.8, true}, 1});
  Composite comp;
  comp.isotropic = IsoExpHencky{31.16, 31.16, 3.38, 1.0};
  const auto [f1, f2] = fiber_pair(40.68);
  comp.fibers.emplace_back(FiberH{726.09, 1848.66, 2, 0.1, true}, f1);
  comp.fibers.emplace_back(FiberH{726.09, 1848.66, 2, 0.1, true}, f2);
  list.push_back({"composite_two_fiber", comp, 0});
  return list;
}

bool near_switch(const MaterialModel& model, const DeformationState& state,
                 std::span<const StructuralTensor> fibers) {
  bool near = false;
  auto probe = [&](const FiberModel& fib, const StructuralTensor& st) {
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, FiberC> || std::is_same_v<T, FiberHGO> ||
                        std::is_same_v<T, FiberPolyC>) {
            int i = 1;
            if constexpr (std::is_same_v<T, FiberC>) i = f.exponent;
            if (std::abs(mixed_invariant(state, st, InvariantFamily::cauchy_green, i) - 1.0) <
                5e-2)
              near = true;
          } else if constexpr (std::is_same_v<T, FiberH>) {
            if (std::abs(state.log_U.dot(st.M)) < 2.5e-2) near = true;
          }
        },
        fib);
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiberC> || std::is_same_v<T, FiberH> ||
                      std::is_same_v<T, FiberPolyC> || std::is_same_v<T, FiberHGO>) {
          probe(FiberModel{m}, fibers[0]);
        } else if constexpr (std::is_same_v<T, Composite>) {
          for (const auto& [fib, st] : m.fibers) probe(fib, st);
        }
      },
      model);
  return near;
}

DeformationState state_from_c(const SymTensor3& c) {
  DeformationState s;
  s.U = sym_sqrt(c);
  s.F = s.U.full();
  s.J = std::sqrt(c.det());
  s.C = c;
  s.spectral_C = spectral_decompose(c);
  s.log_U = sym_log(c, true);
  s.tr_log_U = s.log_U.trace();
  s.dev_log_U = deviator(s.log_U);
  return s;
}

}  // namespace

bool FdCheckReport::passed() const {
  for (const FdCheckEntry& e : entries)
    if (e.max_stress_err > stress_tol || e.max_s_err > stress_tol ||
        e.max_tangent_err > tangent_tol || e.max_cmat_err > tangent_tol)
      return false;
  return true;
}

FdCheckReport run_fd_checks(std::uint64_t seed, int states_per_model) {
  FdCheckReport report;
  report.seed = seed;
  Rng rng(seed);

  for (const CatalogEntry& entry : catalog()) {
    FdCheckEntry out;
    out.model = entry.name;

    std::vector<StructuralTensor> fibers;
    if (entry.arity == 1) fibers.push_back(StructuralTensor::from_direction(unit_vector(rng)));
    if (entry.arity == 2) {
      const Mat3 q = rotation(rng);
      fibers.push_back(StructuralTensor::from_direction({{q(0, 0), q(1, 0), q(2, 0)}}));
      fibers.push_back(StructuralTensor::from_direction({{q(0, 1), q(1, 1), q(2, 1)}}));
    }

    while (out.states < states_per_model) {
      const Mat3 f = deformation(rng);
      const DeformationState state = state_from_F(f);
      if (near_switch(entry.model, state, fibers)) continue;
      ++out.states;

      const LogSpaceResponse r = evaluate(entry.model, state, fibers);
      const double h = 1e-6;

      // stress against the energy gradient in log-strain space
      SymTensor3 g_fd;
      for (int s = 0; s < 6; ++s) {
        SymTensor3 hp = state.log_U, hm = state.log_U;
        hp[s] += h;
        hm[s] -= h;
        const double d = (evaluate(entry.model, state_from_F(sym_exp(hp).full()), fibers).energy -
                          evaluate(entry.model, state_from_F(sym_exp(hm).full()), fibers).energy) /
                         (2.0 * h);
        g_fd[s] = s < 3 ? d : 0.5 * d;
      }
      const double stress_scale = std::max(r.stress_h.norm(), 1e-6);
      out.max_stress_err = std::max(out.max_stress_err, (r.stress_h - g_fd).norm() / stress_scale);

      // tangent against the stress Jacobian
      Tensor4V t_fd;
      for (int s = 0; s < 6; ++s) {
        SymTensor3 hp = state.log_U, hm = state.log_U;
        hp[s] += h;
        hm[s] -= h;
        const SymTensor3 col =
            (evaluate(entry.model, state_from_F(sym_exp(hp).full()), fibers).stress_h -
             evaluate(entry.model, state_from_F(sym_exp(hm).full()), fibers).stress_h) *
            (1.0 / (2.0 * h));
        for (int rr = 0; rr < 6; ++rr) t_fd(rr, s) = s < 3 ? col[rr] : 0.5 * col[rr];
      }
      out.max_tangent_err =
          std::max(out.max_tangent_err, (r.tangent_h - t_fd).norm() / std::max(t_fd.norm(), 1e-6));

      // assembled S and material tangent against differences in C
      const StressState full = full_response(entry.model, f, fibers);
      SymTensor3 s_fd;
      for (int s = 0; s < 6; ++s) {
        SymTensor3 cp = state.C, cm = state.C;
        cp[s] += h;
        cm[s] -= h;
        const double d = (evaluate(entry.model, state_from_c(cp), fibers).energy -
                          evaluate(entry.model, state_from_c(cm), fibers).energy) /
                         (2.0 * h);
        s_fd[s] = 2.0 * (s < 3 ? d : 0.5 * d);
      }
      out.max_s_err =
          std::max(out.max_s_err, (full.S - s_fd).norm() / std::max(s_fd.norm(), 1e-6));

      Tensor4V c_fd;
      const double hc = 1e-6 * state.C.norm();
      for (int s = 0; s < 6; ++s) {
        SymTensor3 cp = state.C, cm = state.C;
        cp[s] += hc;
        cm[s] -= hc;
        const SymTensor3 col = (full_response(entry.model, sym_sqrt(cp).full(), fibers).S -
                                full_response(entry.model, sym_sqrt(cm).full(), fibers).S) *
                               (1.0 / (2.0 * hc));
        for (int rr = 0; rr < 6; ++rr) c_fd(rr, s) = 2.0 * (s < 3 ? col[rr] : 0.5 * col[rr]);
      }
      out.max_cmat_err =
          std::max(out.max_cmat_err, (full.C_mat - c_fd).norm() / std::max(c_fd.norm(), 1e-6));
    }
    report.entries.push_back(std::move(out));
  }
  return report;
}

}  // namespace hencky
