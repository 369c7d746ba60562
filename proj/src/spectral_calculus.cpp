#include "hencky/spectral_calculus.hpp"

#include <cmath>
#include <string>

namespace hencky {

double HalfLog::operator()(double x) const { return 0.5 * std::log(x); }
double HalfLog::d1(double x) const { return 0.5 / x; }
double HalfLog::d2(double x) const { return -0.5 / (x * x); }
double HalfLog::div1(double a, double b) const {
  return 0.5 * std::log1p((a - b) / b) / (a - b);
}

double ScaledExp::operator()(double x) const { return std::exp(scale * x); }
double ScaledExp::d1(double x) const { return scale * std::exp(scale * x); }
double ScaledExp::d2(double x) const { return scale * scale * std::exp(scale * x); }
double ScaledExp::div1(double a, double b) const {
  return std::exp(scale * b) * std::expm1(scale * (a - b)) / (a - b);
}

SpectralView SpectralView::log_strain_of(const Spectral& s) {
  SpectralView v;
  for (int k = 0; k < 3; ++k)
    v.values[static_cast<std::size_t>(k)] = 0.5 * std::log(s.eigenvalues[static_cast<std::size_t>(k)]);
  v.projections = &s.projections;
  const double scale = std::max({1.0, std::abs(v.values[0]), std::abs(v.values[2])});
  v.tol = kEigenCoalesceRel * scale;
  return v;
}

template <class Fn>
Tensor4V spectral_function_derivative(const Fn& f, const SpectralView& v) {
  const auto& p = *v.projections;
  Tensor4V r;
  for (int k = 0; k < 3; ++k) {
    r.axpy(f.d1(v.values[static_cast<std::size_t>(k)]),
           kronecker_box(p[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(k)]));
    for (int j = k + 1; j < 3; ++j) {
      const double c = divided_diff_1(f, v.values[static_cast<std::size_t>(k)],
                                      v.values[static_cast<std::size_t>(j)], v.tol);
      r.axpy(c, kronecker_box(p[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(j)]) +
                    kronecker_box(p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(k)]));
    }
  }
  r.has_major_symmetry = true;
  return r;
}

template <class Fn>
SymTensor3 spectral_weighted_gradient(const Fn& f, const SymTensor3& m, const SpectralView& v) {
  const auto& p = *v.projections;
  const Mat3 mf = m.full();
  Mat3 acc;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      const double c = k == j ? f.d1(v.values[static_cast<std::size_t>(k)])
                              : divided_diff_1(f, v.values[static_cast<std::size_t>(k)],
                                               v.values[static_cast<std::size_t>(j)], v.tol);
      acc = acc + p[static_cast<std::size_t>(k)].full() * mf * p[static_cast<std::size_t>(j)].full() * c;
    }
  return SymTensor3::sym(acc);
}

template <class Fn>
Tensor4V spectral_weighted_hessian(const Fn& f, const SymTensor3& t, const SpectralView& v) {
  const auto& p = *v.projections;
  const Mat3 tf = t.full();
  // pairwise symmetrized P_m T P_k blocks
  SymTensor3 s[3][3];
  for (int k = 0; k < 3; ++k)
    for (int m = k; m < 3; ++m) {
      const Mat3 b = p[static_cast<std::size_t>(m)].full() * tf * p[static_cast<std::size_t>(k)].full();
      s[k][m] = SymTensor3::sym(b) * 2.0;
    }
  Tensor4V r;
  for (int l = 0; l < 3; ++l) {
    const SymTensor3& pl = p[static_cast<std::size_t>(l)];
    for (int k = 0; k < 3; ++k)
      for (int m = k; m < 3; ++m) {
        const double f2 = divided_diff_2(f, v.values[static_cast<std::size_t>(k)],
                                         v.values[static_cast<std::size_t>(l)],
                                         v.values[static_cast<std::size_t>(m)], v.tol);
        const double w = (m == k) ? f2 : 2.0 * f2;
        r.axpy(w, kronecker_box(pl, s[k][m]));
      }
  }
  r.has_major_symmetry = true;
  return r;
}

template Tensor4V spectral_function_derivative<HalfLog>(const HalfLog&, const SpectralView&);
template Tensor4V spectral_function_derivative<ScaledExp>(const ScaledExp&, const SpectralView&);
template SymTensor3 spectral_weighted_gradient<HalfLog>(const HalfLog&, const SymTensor3&, const SpectralView&);
template SymTensor3 spectral_weighted_gradient<ScaledExp>(const ScaledExp&, const SymTensor3&, const SpectralView&);
template Tensor4V spectral_weighted_hessian<HalfLog>(const HalfLog&, const SymTensor3&, const SpectralView&);
template Tensor4V spectral_weighted_hessian<ScaledExp>(const ScaledExp&, const SymTensor3&, const SpectralView&);

LogDerivatives projection_PH(const Spectral& spectral) {
  LogDerivatives d;
  d.spectral = spectral;
  d.p_h = spectral_function_derivative(HalfLog{}, SpectralView::of(spectral)) * 2.0;
  d.p_h.has_major_symmetry = true;
  return d;
}

Tensor4V eigenprojection_derivative(const Spectral& spectral, int k) {
  for (int j = 0; j < 3; ++j)
    if (j != k && spectral.coalesced(k, j))
      throw Error(ErrorCode::coalesced_eigenvalue,
                  "eigenprojection_derivative: eigenvalue " + std::to_string(k) +
                      " is not simple");
  const auto& p = spectral.projections;
  Tensor4V r;
  for (int j = 0; j < 3; ++j) {
    if (j == k) continue;
    const double denom = spectral.eigenvalues[static_cast<std::size_t>(k)] -
                         spectral.eigenvalues[static_cast<std::size_t>(j)];
    r.axpy(1.0 / denom, kronecker_box(p[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(j)]) +
                            kronecker_box(p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(k)]));
  }
  r.has_major_symmetry = true;
  return r;
}

Tensor4V contract_K(const SymTensor3& t, const Spectral& spectral) {
  return spectral_weighted_hessian(HalfLog{}, t, SpectralView::of(spectral)) * 4.0;
}

}  // namespace hencky
