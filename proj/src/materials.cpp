#include "hencky/materials.hpp"

#include <cmath>
#include <string>

#include "hencky/spectral_calculus.hpp"

namespace hencky {

namespace {

constexpr double kExpArgLimit = 700.0;   // overflow guard for exp terms
constexpr double kEpsClamp = 1e-12;      // delta_eps for the switchover factor

double exp_guarded(double arg, const char* term) {
  if (!(arg <= kExpArgLimit))
    throw Error(ErrorCode::non_finite_energy,
                std::string("exp overflow in ") + term + ", argument " + std::to_string(arg));
  return std::exp(arg);
}

// exp(arg) - 1 without cancellation; the fiber energies vanish at the switch
// boundary and small arguments are the common case there
double expm1_guarded(double arg, const char* term) {
  if (!(arg <= kExpArgLimit))
    throw Error(ErrorCode::non_finite_energy,
                std::string("exp overflow in ") + term + ", argument " + std::to_string(arg));
  return std::expm1(arg);
}

TIHencky ti_from_lame(double lambda, double mu_t, double alpha, double beta, double mu_l) {
  TIHencky m;
  m.mu_t = mu_t;
  m.kappa = lambda + 2.0 * mu_t / 3.0;
  m.alpha = alpha;
  m.beta = beta;
  m.mu_l = mu_l;
  return m;
}

// Scalar invariant of log U together with its first two derivatives.
struct Ingredient {
  double value = 0.0;
  SymTensor3 grad;
  Tensor4V hess;
};

Ingredient dev_norm2(const SymTensor3& h) {
  Ingredient g;
  const SymTensor3 d = deviator(h);
  g.value = d.dot(d);
  g.grad = d * 2.0;
  g.hess = Tensor4V::dev_projector() * 2.0;
  return g;
}

Ingredient vol_sq(const SymTensor3& h) {
  Ingredient g;
  const double t = h.trace();
  const SymTensor3 id = SymTensor3::identity();
  g.value = t * t;
  g.grad = id * (2.0 * t);
  g.hess = dyad(id, id) * 2.0;
  return g;
}

Ingredient mix_trace(const SymTensor3& h, const SymTensor3& m) {
  Ingredient g;
  const double t = h.trace();
  const double u = h.dot(m);
  const SymTensor3 id = SymTensor3::identity();
  g.value = u * t;
  g.grad = m * t + id * u;
  g.hess = dyad(m, id) + dyad(id, m);
  g.hess.has_major_symmetry = true;
  return g;
}

Ingredient square_contraction(const SymTensor3& h, const SymTensor3& m) {
  Ingredient g;
  g.value = sym_product(h, h).dot(m);
  g.grad = sym_product(m, h) * 2.0;
  g.hess = kronecker_box(m, SymTensor3::identity()) + kronecker_box(SymTensor3::identity(), m);
  g.hess.has_major_symmetry = true;
  return g;
}

Ingredient fiber_sq(const SymTensor3& h, const SymTensor3& m) {
  Ingredient g;
  const double u = h.dot(m);
  g.value = u * u;
  g.grad = m * (2.0 * u);
  g.hess = dyad(m, m) * 2.0;
  return g;
}

Ingredient cross_fiber(const SymTensor3& h, const SymTensor3& m1, const SymTensor3& m2) {
  Ingredient g;
  const double u1 = h.dot(m1);
  const double u2 = h.dot(m2);
  g.value = u1 * u2;
  g.grad = m1 * u2 + m2 * u1;
  g.hess = dyad(m1, m2) + dyad(m2, m1);
  g.hess.has_major_symmetry = true;
  return g;
}

struct Accumulator {
  LogSpaceResponse r;

  Accumulator() { r.tangent_h.has_major_symmetry = true; }

  void linear(double c, const Ingredient& g) {
    if (c == 0.0) return;
    r.energy += c * g.value;
    r.stress_h += g.grad * c;
    r.tangent_h.axpy(c, g.hess);
  }

  // (c/k) exp(k g); reduces to the linear term plus a constant as k -> 0
  void exponential(double c, double k, const Ingredient& g, const char* term) {
    if (c == 0.0) return;
    const double e = exp_guarded(k * g.value, term);
    r.energy += c / k * e;
    r.stress_h += g.grad * (c * e);
    r.tangent_h.axpy(c * e, g.hess);
    r.tangent_h += dyad(g.grad, g.grad) * (c * e * k);
  }
};

// <(log U)^i, M> with exact polynomial derivatives; the value itself is taken
// spectrally to stay accurate for i = 3, 4 near eigenvalue coalescence.
struct PowerInvariant {
  double value = 0.0;
  SymTensor3 grad;
  Tensor4V hess;
};

PowerInvariant log_power_invariant(const DeformationState& state, const SymTensor3& m, int i) {
  PowerInvariant inv;
  const Spectral& s = state.spectral_C;
  for (int k = 0; k < 3; ++k) {
    double b = 0.5 * std::log(s.eigenvalues[static_cast<std::size_t>(k)]);
    double p = 1.0;
    for (int q = 0; q < i; ++q) p *= b;
    inv.value += p * s.projections[static_cast<std::size_t>(k)].dot(m);
  }

  const Mat3 hm = state.log_U.full();
  const Mat3 mm = m.full();
  std::vector<Mat3> hp(static_cast<std::size_t>(i));  // H^0 .. H^(i-1)
  hp[0] = Mat3::identity();
  for (int p = 1; p < i; ++p) hp[static_cast<std::size_t>(p)] = hp[static_cast<std::size_t>(p - 1)] * hm;

  Mat3 grad_full;
  for (int p = 0; p <= i - 1; ++p) {
    const int q = i - 1 - p;
    grad_full = grad_full + hp[static_cast<std::size_t>(p)] * mm * hp[static_cast<std::size_t>(q)];
  }
  inv.grad = SymTensor3::sym(grad_full);

  for (int p = 0; p <= i - 1; ++p) {
    const int q = i - 1 - p;
    for (int rr = 0; rr <= p - 1; ++rr) {
      const int ss = p - 1 - rr;
      inv.hess += kronecker_box_general(
          hp[static_cast<std::size_t>(rr)],
          hp[static_cast<std::size_t>(q)] * mm * hp[static_cast<std::size_t>(ss)]);
    }
    for (int rr = 0; rr <= q - 1; ++rr) {
      const int ss = q - 1 - rr;
      inv.hess += kronecker_box_general(
          hp[static_cast<std::size_t>(p)] * mm * hp[static_cast<std::size_t>(rr)],
          hp[static_cast<std::size_t>(ss)]);
    }
  }
  inv.hess.has_major_symmetry = true;
  return inv;
}

// <C^i, M> and its derivatives with respect to log U, via C^i = exp(2 i log U).
PowerInvariant cauchy_power_invariant(const DeformationState& state, const SymTensor3& m, int i) {
  PowerInvariant inv;
  const Spectral& s = state.spectral_C;
  for (int k = 0; k < 3; ++k) {
    double p = 1.0;
    for (int q = 0; q < i; ++q) p *= s.eigenvalues[static_cast<std::size_t>(k)];
    inv.value += p * s.projections[static_cast<std::size_t>(k)].dot(m);
  }
  const ScaledExp fn{2.0 * i};
  const SpectralView view = SpectralView::log_strain_of(s);
  inv.grad = spectral_weighted_gradient(fn, m, view);
  inv.hess = spectral_weighted_hessian(fn, m, view);
  return inv;
}

LogSpaceResponse iso_response(const IsoHencky& m, const SymTensor3& h) {
  Accumulator acc;
  acc.linear(m.mu, dev_norm2(h));
  acc.linear(0.5 * m.kappa, vol_sq(h));
  return acc.r;
}

LogSpaceResponse iso_response(const IsoExpHencky& m, const SymTensor3& h) {
  Accumulator acc;
  acc.exponential(m.mu, m.k, dev_norm2(h), "W_eH isochoric");
  acc.exponential(0.5 * m.kappa, m.khat, vol_sq(h), "W_eH volumetric");
  return acc.r;
}

LogSpaceResponse ti_response(const TIHencky& m, const SymTensor3& h, const SymTensor3& M) {
  Accumulator acc;
  acc.linear(m.mu_t, dev_norm2(h));
  acc.linear(0.5 * m.kappa, vol_sq(h));
  acc.linear(m.alpha, mix_trace(h, M));
  acc.linear(2.0 * (m.mu_l - m.mu_t), square_contraction(h, M));
  acc.linear(0.5 * m.beta, fiber_sq(h, M));
  return acc.r;
}

LogSpaceResponse ti_response(const TIExpHencky& m, const SymTensor3& h, const SymTensor3& M) {
  Accumulator acc;
  acc.exponential(m.mu_t, m.k[0], dev_norm2(h), "W_2 isochoric");
  acc.exponential(0.5 * m.kappa, m.k[1], vol_sq(h), "W_2 volumetric");
  acc.exponential(m.alpha, m.k[2], mix_trace(h, M), "W_2 coupling");
  acc.exponential(2.0 * (m.mu_l - m.mu_t), m.k[3], square_contraction(h, M), "W_2 fiber shear");
  acc.exponential(0.5 * m.beta, m.k[4], fiber_sq(h, M), "W_2 fiber stretch");
  return acc.r;
}

LogSpaceResponse ortho_response(const OrthoHencky& m, const SymTensor3& h, const SymTensor3& M1,
                                const SymTensor3& M2) {
  Accumulator acc;
  acc.linear(m.mu, dev_norm2(h));
  acc.linear(0.5 * m.kappa, vol_sq(h));
  acc.linear(m.alpha1, mix_trace(h, M1));
  acc.linear(m.alpha2, mix_trace(h, M2));
  acc.linear(2.0 * m.mu1, square_contraction(h, M1));
  acc.linear(2.0 * m.mu2, square_contraction(h, M2));
  acc.linear(0.5 * m.beta1, fiber_sq(h, M1));
  acc.linear(0.5 * m.beta2, fiber_sq(h, M2));
  acc.linear(m.beta3, cross_fiber(h, M1, M2));
  return acc.r;
}

LogSpaceResponse ortho_response(const OrthoExpHencky& m, const SymTensor3& h, const SymTensor3& M1,
                                const SymTensor3& M2) {
  Accumulator acc;
  acc.exponential(m.mu, m.k[0], dev_norm2(h), "W_4 isochoric");
  acc.exponential(0.5 * m.kappa, m.k[1], vol_sq(h), "W_4 volumetric");
  acc.exponential(m.alpha1, m.k[2], mix_trace(h, M1), "W_4 coupling 1");
  acc.exponential(m.alpha2, m.k[3], mix_trace(h, M2), "W_4 coupling 2");
  acc.exponential(2.0 * m.mu1, m.k[4], square_contraction(h, M1), "W_4 fiber shear 1");
  acc.exponential(2.0 * m.mu2, m.k[5], square_contraction(h, M2), "W_4 fiber shear 2");
  acc.exponential(0.5 * m.beta1, m.k[6], fiber_sq(h, M1), "W_4 fiber stretch 1");
  acc.exponential(0.5 * m.beta2, m.k[7], fiber_sq(h, M2), "W_4 fiber stretch 2");
  acc.exponential(m.beta3, m.k[8], cross_fiber(h, M1, M2), "W_4 fiber cross");
  return acc.r;
}

LogSpaceResponse fiber_c_response(double mu1, double k1, int i, bool switched,
                                  const DeformationState& state, const StructuralTensor& m) {
  LogSpaceResponse r;
  r.tangent_h.has_major_symmetry = true;
  const PowerInvariant inv = cauchy_power_invariant(state, m.M, i);
  if (switched && inv.value < 1.0) return r;
  const double y = inv.value - 1.0;
  const double e = exp_guarded(k1 * y * y, "fiber C energy");
  r.energy = 0.5 * mu1 / k1 * expm1_guarded(k1 * y * y, "fiber C energy");
  const double d1 = mu1 * y * e;
  const double d2 = mu1 * e * (1.0 + 2.0 * k1 * y * y);
  r.stress_h = inv.grad * d1;
  r.tangent_h = dyad(inv.grad, inv.grad) * d2 + inv.hess * d1;
  r.tangent_h.has_major_symmetry = true;
  return r;
}

LogSpaceResponse fiber_h_response(const FiberH& f, const DeformationState& state,
                                  const StructuralTensor& m) {
  LogSpaceResponse r;
  r.tangent_h.has_major_symmetry = true;
  const double u = state.log_U.dot(m.M);
  if (f.switched && u < 0.0) return r;
  const PowerInvariant inv = log_power_invariant(state, m.M, f.exponent);
  const double v = inv.value;

  if (f.eps == 0.0) {
    const double e = exp_guarded(f.k1 * v * v, "fiber H energy");
    r.energy = 0.5 * f.mu1 / f.k1 * expm1_guarded(f.k1 * v * v, "fiber H energy");
    const double d1 = f.mu1 * v * e;
    const double d2 = f.mu1 * e * (1.0 + 2.0 * f.k1 * v * v);
    r.stress_h = inv.grad * d1;
    r.tangent_h = dyad(inv.grad, inv.grad) * d2 + inv.hess * d1;
    r.tangent_h.has_major_symmetry = true;
    return r;
  }

  // switchover factor <log U, M>^eps, clamped so the gradient stays finite at
  // the boundary
  const bool clamped = u < kEpsClamp;
  const double uc = clamped ? kEpsClamp : u;
  const double w = std::pow(uc, f.eps);
  const double dw = clamped ? 0.0 : f.eps * std::pow(uc, f.eps - 1.0);
  const double d2w = clamped ? 0.0 : f.eps * (f.eps - 1.0) * std::pow(uc, f.eps - 2.0);

  const double arg = f.k1 * w * v * v;
  const double e = exp_guarded(arg, "fiber H energy");
  r.energy = 0.5 * f.mu1 / f.k1 * expm1_guarded(arg, "fiber H energy");

  const SymTensor3 grad_arg = m.M * (f.k1 * dw * v * v) + inv.grad * (f.k1 * 2.0 * w * v);
  Tensor4V hess_arg = dyad(m.M, m.M) * (f.k1 * d2w * v * v);
  const Tensor4V mix = dyad(m.M, inv.grad) + dyad(inv.grad, m.M);
  hess_arg += mix * (f.k1 * 2.0 * dw * v);
  hess_arg += dyad(inv.grad, inv.grad) * (f.k1 * 2.0 * w);
  hess_arg += inv.hess * (f.k1 * 2.0 * w * v);

  const double c = 0.5 * f.mu1 / f.k1 * e;
  r.stress_h = grad_arg * c;
  r.tangent_h = (hess_arg + dyad(grad_arg, grad_arg)) * c;
  r.tangent_h.has_major_symmetry = true;
  return r;
}

LogSpaceResponse fiber_poly_response(const FiberPolyC& f, const DeformationState& state,
                                     const StructuralTensor& m) {
  LogSpaceResponse r;
  const PowerInvariant inv = cauchy_power_invariant(state, m.M, 1);
  const double y = inv.value - 1.0;
  double yk2 = 1.0;  // y^(k1-2)
  for (int q = 0; q < f.k1 - 2; ++q) yk2 *= y;
  const double yk1 = yk2 * y;
  const double yk = yk1 * y;
  r.energy = 0.5 * f.mu1 / f.k1 * yk;
  const double d1 = 0.5 * f.mu1 * yk1;
  const double d2 = 0.5 * f.mu1 * (f.k1 - 1) * yk2;
  r.stress_h = inv.grad * d1;
  r.tangent_h = dyad(inv.grad, inv.grad) * d2 + inv.hess * d1;
  r.tangent_h.has_major_symmetry = true;
  return r;
}

void check_arity(const MaterialModel& model, std::size_t provided) {
  const std::size_t expected = fiber_arity(model);
  if (provided != expected)
    throw Error(ErrorCode::arity_mismatch,
                "evaluate: model expects " + std::to_string(expected) +
                    " structural tensor(s), got " + std::to_string(provided));
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0))
    throw Error(ErrorCode::validation_error, std::string(name) + " must be positive");
}

}  // namespace

TIHencky TIHencky::from_lame(double lambda, double mu_t, double alpha, double beta, double mu_l) {
  return ti_from_lame(lambda, mu_t, alpha, beta, mu_l);
}

TIExpHencky TIExpHencky::from_lame(double lambda, double mu_t, double alpha, double beta,
                                   double mu_l, const std::array<double, 5>& k) {
  const TIHencky base = ti_from_lame(lambda, mu_t, alpha, beta, mu_l);
  TIExpHencky m;
  m.mu_t = base.mu_t;
  m.kappa = base.kappa;
  m.alpha = base.alpha;
  m.beta = base.beta;
  m.mu_l = base.mu_l;
  m.k = k;
  return m;
}

void validate(const MaterialModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IsoHencky>) {
          require_positive(m.mu, "mu");
          require_positive(m.kappa, "kappa");
        } else if constexpr (std::is_same_v<T, IsoExpHencky>) {
          require_positive(m.mu, "mu");
          require_positive(m.kappa, "kappa");
          require_positive(m.k, "k");
          require_positive(m.khat, "khat");
        } else if constexpr (std::is_same_v<T, TIHencky>) {
          require_positive(m.mu_t, "mu_t");
          require_positive(m.kappa, "kappa");
          require_positive(m.mu_l, "mu_l");
        } else if constexpr (std::is_same_v<T, TIExpHencky>) {
          require_positive(m.mu_t, "mu_t");
          require_positive(m.kappa, "kappa");
          require_positive(m.mu_l, "mu_l");
          for (double k : m.k) require_positive(k, "k_i");
        } else if constexpr (std::is_same_v<T, OrthoHencky>) {
          require_positive(m.mu, "mu");
          require_positive(m.kappa, "kappa");
        } else if constexpr (std::is_same_v<T, OrthoExpHencky>) {
          require_positive(m.mu, "mu");
          require_positive(m.kappa, "kappa");
          for (double k : m.k) require_positive(k, "k_i");
        } else if constexpr (std::is_same_v<T, FiberC>) {
          require_positive(m.mu1, "mu1");
          require_positive(m.k1, "k1");
          if (m.exponent < 1)
            throw Error(ErrorCode::validation_error, "fiber exponent must be >= 1");
        } else if constexpr (std::is_same_v<T, FiberH>) {
          require_positive(m.mu1, "mu1");
          require_positive(m.k1, "k1");
          if (m.exponent < 1)
            throw Error(ErrorCode::validation_error, "fiber exponent must be >= 1");
          if (m.eps < 0.0) throw Error(ErrorCode::validation_error, "eps must be >= 0");
        } else if constexpr (std::is_same_v<T, FiberPolyC>) {
          require_positive(m.mu1, "mu1");
          if (m.k1 < 2 || m.k1 % 2 != 0)
            throw Error(ErrorCode::validation_error,
                        "polynomial fiber degree k1 must be a positive even integer");
        } else if constexpr (std::is_same_v<T, FiberHGO>) {
          require_positive(m.mu1, "mu1");
          require_positive(m.k1, "k1");
        } else if constexpr (std::is_same_v<T, Composite>) {
          std::visit([](const auto& iso) { validate(MaterialModel{iso}); }, m.isotropic);
          for (const auto& [fib, st] : m.fibers)
            std::visit([](const auto& f) { validate(MaterialModel{f}); }, fib);
        }
      },
      model);
}

std::size_t fiber_arity(const MaterialModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TIHencky> || std::is_same_v<T, TIExpHencky> ||
                      std::is_same_v<T, FiberC> || std::is_same_v<T, FiberH> ||
                      std::is_same_v<T, FiberPolyC> || std::is_same_v<T, FiberHGO>)
          return 1;
        else if constexpr (std::is_same_v<T, OrthoHencky> || std::is_same_v<T, OrthoExpHencky>)
          return 2;
        else
          return 0;
      },
      model);
}

bool fiber_switch(SwitchCriterion criterion, const DeformationState& state,
                  const StructuralTensor& m, int exponent) {
  if (criterion == SwitchCriterion::hencky) return state.log_U.dot(m.M) >= 0.0;
  return mixed_invariant(state, m, InvariantFamily::cauchy_green, exponent) >= 1.0;
}

LogSpaceResponse evaluate_fiber(const FiberModel& model, const DeformationState& state,
                                const StructuralTensor& m) {
  return std::visit(
      [&](const auto& f) -> LogSpaceResponse {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiberC>)
          return fiber_c_response(f.mu1, f.k1, f.exponent, f.switched, state, m);
        else if constexpr (std::is_same_v<T, FiberHGO>)
          return fiber_c_response(f.mu1, f.k1, 1, f.switched, state, m);
        else if constexpr (std::is_same_v<T, FiberH>)
          return fiber_h_response(f, state, m);
        else
          return fiber_poly_response(f, state, m);
      },
      model);
}

LogSpaceResponse evaluate(const MaterialModel& model, const DeformationState& state,
                          std::span<const StructuralTensor> fibers) {
  check_arity(model, fibers.size());
  const SymTensor3& h = state.log_U;
  return std::visit(
      [&](const auto& m) -> LogSpaceResponse {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IsoHencky> || std::is_same_v<T, IsoExpHencky>) {
          return iso_response(m, h);
        } else if constexpr (std::is_same_v<T, TIHencky> || std::is_same_v<T, TIExpHencky>) {
          return ti_response(m, h, fibers[0].M);
        } else if constexpr (std::is_same_v<T, OrthoHencky> || std::is_same_v<T, OrthoExpHencky>) {
          return ortho_response(m, h, fibers[0].M, fibers[1].M);
        } else if constexpr (std::is_same_v<T, Composite>) {
          LogSpaceResponse r = std::visit(
              [&](const auto& iso) { return iso_response(iso, h); }, m.isotropic);
          for (const auto& [fib, st] : m.fibers) {
            const LogSpaceResponse fr = evaluate_fiber(fib, state, st);
            r.energy += fr.energy;
            r.stress_h += fr.stress_h;
            r.tangent_h += fr.tangent_h;
          }
          return r;
        } else {
          return evaluate_fiber(FiberModel{m}, state, fibers[0]);
        }
      },
      model);
}

}  // namespace hencky
