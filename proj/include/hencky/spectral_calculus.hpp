// Derivatives of spectrally defined tensor functions. Supplies the projection
// tensor P_H = 2 d(log U)/dC, per-eigenvalue projection derivatives, and the
// contraction of a fixed symmetric tensor with the sixth-order second
// derivative of log U (which is never materialized).
//
// Everything is built from first and second divided differences of the scalar
// generator, with limit closures f'(x) and f''(x)/2 at coalescing eigenvalues
// (Daleckii-Krein representation of isotropic tensor functions).
#pragma once

#include "hencky/tensor.hpp"

namespace hencky {

// Scalar generators with numerically stable divided differences.
struct HalfLog {
  // f(lambda) = 1/2 log lambda, arguments are eigenvalues of C
  double operator()(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double div1(double a, double b) const;  // uses log1p, exact near coalescence
};

struct ScaledExp {
  // f(x) = exp(s x); with s = 2i and x = log-strain eigenvalues this gives C^i
  double scale = 2.0;
  double operator()(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double div1(double a, double b) const;  // uses expm1
};

// Divided differences with coalescence handling driven by a relative gap
// tolerance (the second one pairs the two most separated arguments so the
// divisor never degenerates before all three arguments coalesce).
template <class Fn>
double divided_diff_1(const Fn& f, double a, double b, double tol) {
  if (std::abs(a - b) < tol) return f.d1(0.5 * (a + b));
  return f.div1(a, b);
}

template <class Fn>
double divided_diff_2(const Fn& f, double a, double b, double c, double tol) {
  // order so that |x - y| is the largest pairwise gap
  double x = a, y = b, z = c;
  const double gab = std::abs(a - b), gac = std::abs(a - c), gbc = std::abs(b - c);
  if (gac >= gab && gac >= gbc) {
    x = a; y = c; z = b;
  } else if (gbc >= gab && gbc >= gac) {
    x = b; y = c; z = a;
  }
  if (std::abs(x - y) < tol) return 0.5 * f.d2((a + b + c) / 3.0);
  return (divided_diff_1(f, x, z, tol) - divided_diff_1(f, y, z, tol)) / (x - y);
}

// A lightweight spectral view: three scalar arguments sharing the
// eigenprojections of some decomposition (eigenvalues of C, or log-strain
// eigenvalues for derivatives taken with respect to log U).
struct SpectralView {
  std::array<double, 3> values{};
  const std::array<SymTensor3, 3>* projections = nullptr;
  double tol = 0.0;

  static SpectralView of(const Spectral& s) {
    return {s.eigenvalues, &s.projections, s.coalescence_tol()};
  }
  static SpectralView log_strain_of(const Spectral& s);
};

// First derivative of X -> f(X) as a fourth-order tensor:
//   sum_kj f[1](x_k, x_j) P_k box P_j
template <class Fn>
Tensor4V spectral_function_derivative(const Fn& f, const SpectralView& v);

// Gradient of the scalar X -> <f(X), M>:  sum_kj f[1](x_k, x_j) P_k M P_j
template <class Fn>
SymTensor3 spectral_weighted_gradient(const Fn& f, const SymTensor3& m, const SpectralView& v);

// Hessian of the scalar X -> <f(X), T>:
//   2 sum_klm f[2](x_k, x_l, x_m) P_l box (P_m T P_k)   (Voigt-symmetrized)
template <class Fn>
Tensor4V spectral_weighted_hessian(const Fn& f, const SymTensor3& t, const SpectralView& v);

struct LogDerivatives {
  Tensor4V p_h;       // 2 d(log U)/dC
  Spectral spectral;  // decomposition it was built from
};

LogDerivatives projection_PH(const Spectral& spectral);

// d P_k / dC for a simple eigenvalue; throws coalesced_eigenvalue otherwise.
Tensor4V eigenprojection_derivative(const Spectral& spectral, int k);

// (T : K) with K = 4 d^2 log U / dC dC, assembled directly as a fourth-order
// tensor.
Tensor4V contract_K(const SymTensor3& t, const Spectral& spectral);

extern template Tensor4V spectral_function_derivative<HalfLog>(const HalfLog&, const SpectralView&);
extern template Tensor4V spectral_function_derivative<ScaledExp>(const ScaledExp&, const SpectralView&);
extern template SymTensor3 spectral_weighted_gradient<HalfLog>(const HalfLog&, const SymTensor3&, const SpectralView&);
extern template SymTensor3 spectral_weighted_gradient<ScaledExp>(const ScaledExp&, const SymTensor3&, const SpectralView&);
extern template Tensor4V spectral_weighted_hessian<HalfLog>(const HalfLog&, const SymTensor3&, const SpectralView&);
extern template Tensor4V spectral_weighted_hessian<ScaledExp>(const ScaledExp&, const SymTensor3&, const SpectralView&);

}  // namespace hencky
