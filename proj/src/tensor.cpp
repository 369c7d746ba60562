#include "hencky/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "hencky/kernels.hpp"

namespace hencky {

namespace {
// Voigt slot -> tensor index pair
constexpr int kRow[6] = {0, 1, 2, 0, 1, 0};
constexpr int kCol[6] = {0, 1, 2, 1, 2, 2};
}  // namespace

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat3::det() const {
  const auto& t = *this;
  return t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) -
         t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0)) +
         t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0));
}

Mat3 Mat3::inverse() const {
  const double d = det();
  if (d == 0.0) throw Error(ErrorCode::non_invertible, "Mat3::inverse: singular matrix");
  const auto& t = *this;
  Mat3 r;
  r(0, 0) = (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) / d;
  r(0, 1) = (t(0, 2) * t(2, 1) - t(0, 1) * t(2, 2)) / d;
  r(0, 2) = (t(0, 1) * t(1, 2) - t(0, 2) * t(1, 1)) / d;
  r(1, 0) = (t(1, 2) * t(2, 0) - t(1, 0) * t(2, 2)) / d;
  r(1, 1) = (t(0, 0) * t(2, 2) - t(0, 2) * t(2, 0)) / d;
  r(1, 2) = (t(0, 2) * t(1, 0) - t(0, 0) * t(1, 2)) / d;
  r(2, 0) = (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0)) / d;
  r(2, 1) = (t(0, 1) * t(2, 0) - t(0, 0) * t(2, 1)) / d;
  r(2, 2) = (t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0)) / d;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Vec3 Mat3::operator*(const Vec3& x) const {
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (*this)(i, k) * x[k];
    r[i] = s;
  }
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r = *this;
  for (double& x : r.m) x *= s;
  return r;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r = *this;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] += o.m[i];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r = *this;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] -= o.m[i];
  return r;
}

SymTensor3 SymTensor3::dyad(const Vec3& n) {
  return {{n[0] * n[0], n[1] * n[1], n[2] * n[2], n[0] * n[1], n[1] * n[2], n[0] * n[2]}};
}

SymTensor3 SymTensor3::sym(const Mat3& m) {
  SymTensor3 r;
  for (int s = 0; s < 6; ++s) r[s] = 0.5 * (m(kRow[s], kCol[s]) + m(kCol[s], kRow[s]));
  return r;
}

SymTensor3 SymTensor3::from_full(const Mat3& m) {
  SymTensor3 r;
  for (int s = 0; s < 6; ++s) r[s] = m(kRow[s], kCol[s]);
  return r;
}

double SymTensor3::operator()(int i, int j) const {
  static constexpr int slot[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
  return a[static_cast<std::size_t>(slot[i][j])];
}

Mat3 SymTensor3::full() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(i, j);
  return r;
}

double SymTensor3::det() const {
  return a[0] * (a[1] * a[2] - a[4] * a[4]) - a[3] * (a[3] * a[2] - a[4] * a[5]) +
         a[5] * (a[3] * a[4] - a[1] * a[5]);
}

SymTensor3 SymTensor3::operator+(const SymTensor3& o) const {
  SymTensor3 r = *this;
  for (std::size_t i = 0; i < 6; ++i) r.a[i] += o.a[i];
  return r;
}

SymTensor3 SymTensor3::operator-(const SymTensor3& o) const {
  SymTensor3 r = *this;
  for (std::size_t i = 0; i < 6; ++i) r.a[i] -= o.a[i];
  return r;
}

SymTensor3 SymTensor3::operator*(double s) const {
  SymTensor3 r = *this;
  for (double& x : r.a) x *= s;
  return r;
}

SymTensor3& SymTensor3::operator+=(const SymTensor3& o) {
  for (std::size_t i = 0; i < 6; ++i) a[i] += o.a[i];
  return *this;
}

SymTensor3& SymTensor3::operator*=(double s) {
  for (double& x : a) x *= s;
  return *this;
}

SymTensor3 deviator(const SymTensor3& t) {
  const double p = t.trace() / 3.0;
  SymTensor3 r = t;
  r[0] -= p;
  r[1] -= p;
  r[2] -= p;
  return r;
}

Mat3 product(const SymTensor3& a, const SymTensor3& b) { return a.full() * b.full(); }

SymTensor3 sym_product(const SymTensor3& a, const SymTensor3& b) {
  return SymTensor3::sym(product(a, b));
}

std::array<double, 6> voigt_pack(const SymTensor3& t, VoigtKind kind) {
  std::array<double, 6> v = t.a;
  if (kind == VoigtKind::strain_like) {
    v[3] *= 2.0;
    v[4] *= 2.0;
    v[5] *= 2.0;
  }
  return v;
}

SymTensor3 voigt_unpack(const std::array<double, 6>& v, VoigtKind kind) {
  SymTensor3 t{v};
  if (kind == VoigtKind::strain_like) {
    t[3] *= 0.5;
    t[4] *= 0.5;
    t[5] *= 0.5;
  }
  return t;
}

Tensor4V Tensor4V::identity_sym() {
  Tensor4V r;
  r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
  r(3, 3) = r(4, 4) = r(5, 5) = 0.5;
  r.has_major_symmetry = true;
  return r;
}

Tensor4V Tensor4V::dev_projector() {
  Tensor4V r = identity_sym();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) -= 1.0 / 3.0;
  return r;
}

Tensor4V Tensor4V::operator+(const Tensor4V& o) const {
  Tensor4V r = *this;
  for (std::size_t i = 0; i < 36; ++i) r.m[i] += o.m[i];
  r.has_major_symmetry = has_major_symmetry && o.has_major_symmetry;
  return r;
}

Tensor4V Tensor4V::operator-(const Tensor4V& o) const {
  Tensor4V r = *this;
  for (std::size_t i = 0; i < 36; ++i) r.m[i] -= o.m[i];
  r.has_major_symmetry = has_major_symmetry && o.has_major_symmetry;
  return r;
}

Tensor4V Tensor4V::operator*(double s) const {
  Tensor4V r = *this;
  for (double& x : r.m) x *= s;
  return r;
}

Tensor4V& Tensor4V::operator+=(const Tensor4V& o) {
  for (std::size_t i = 0; i < 36; ++i) m[i] += o.m[i];
  has_major_symmetry = has_major_symmetry && o.has_major_symmetry;
  return *this;
}

Tensor4V& Tensor4V::axpy(double alpha, const Tensor4V& x) {
  kernels::axpy(alpha, x.m.data(), m.data(), 36);
  has_major_symmetry = has_major_symmetry && x.has_major_symmetry;
  return *this;
}

Tensor4V Tensor4V::transposed_major() const {
  Tensor4V r;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) r(i, j) = (*this)(j, i);
  r.has_major_symmetry = has_major_symmetry;
  return r;
}

double Tensor4V::norm() const {
  double s = 0.0;
  for (double x : m) s += x * x;
  return std::sqrt(s);
}

bool Tensor4V::is_major_symmetric(double rel_tol) const {
  double diff = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      const double d = (*this)(i, j) - (*this)(j, i);
      diff += d * d;
    }
  const double n = norm();
  return std::sqrt(diff) <= rel_tol * std::max(1.0, n);
}

Tensor4V kronecker_box(const SymTensor3& g, const SymTensor3& h) {
  Tensor4V r;
  for (int p = 0; p < 6; ++p) {
    const int a = kRow[p], b = kCol[p];
    for (int q = 0; q < 6; ++q) {
      const int c = kRow[q], d = kCol[q];
      r(p, q) = 0.25 * (g(a, c) * h(b, d) + g(a, d) * h(b, c) +
                        g(b, c) * h(a, d) + g(b, d) * h(a, c));
    }
  }
  r.has_major_symmetry = true;
  return r;
}

Tensor4V kronecker_box_general(const Mat3& g, const Mat3& h) {
  Tensor4V r;
  for (int p = 0; p < 6; ++p) {
    const int a = kRow[p], b = kCol[p];
    for (int q = 0; q < 6; ++q) {
      const int c = kRow[q], d = kCol[q];
      r(p, q) = 0.25 * (g(a, c) * h(b, d) + g(a, d) * h(b, c) +
                        g(b, c) * h(a, d) + g(b, d) * h(a, c));
    }
  }
  return r;
}

Tensor4V dyad(const SymTensor3& s, const SymTensor3& t) {
  Tensor4V r;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) r(p, q) = s[p] * t[q];
  bool same = true;
  for (int i = 0; i < 6; ++i) same = same && s[i] == t[i];
  r.has_major_symmetry = same;
  return r;
}

SymTensor3 contract42(const Tensor4V& a, const SymTensor3& x) {
  const std::array<double, 6> xs = voigt_pack(x, VoigtKind::strain_like);
  std::array<double, 6> y{};
  kernels::mat66_vec(a.m.data(), xs.data(), y.data());
  return SymTensor3{y};
}

Tensor4V contract44(const Tensor4V& a, const Tensor4V& b) {
  // A : B in Voigt needs the shear metric: A * diag(1,1,1,2,2,2) * B.
  Tensor4V bs = b;
  for (int i = 3; i < 6; ++i)
    for (int j = 0; j < 6; ++j) bs(i, j) *= 2.0;
  Tensor4V r;
  kernels::mat66_mul(a.m.data(), bs.m.data(), r.m.data());
  r.has_major_symmetry = false;
  return r;
}

Tensor4V congruence_operator(const Mat3& f) {
  Tensor4V r;
  for (int p = 0; p < 6; ++p) {
    const int a = kRow[p], b = kCol[p];
    for (int q = 0; q < 6; ++q) {
      const int c = kRow[q], d = kCol[q];
      r(p, q) = 0.25 * (f(a, c) * f(b, d) + f(a, d) * f(b, c) +
                        f(b, c) * f(a, d) + f(b, d) * f(a, c));
    }
  }
  r.has_major_symmetry = false;
  return r;
}

Tensor4V congruence_sandwich(const Tensor4V& op, const Tensor4V& a) {
  Tensor4V as = a;
  for (int i = 3; i < 6; ++i)
    for (int j = 0; j < 6; ++j) as(i, j) *= 2.0;   // left metric
  for (int j = 3; j < 6; ++j)
    for (int i = 0; i < 6; ++i) as(i, j) *= 2.0;   // right metric
  Tensor4V tmp;
  kernels::mat66_mul(op.m.data(), as.m.data(), tmp.m.data());
  Tensor4V r;
  kernels::mat66_mul_bt(tmp.m.data(), op.m.data(), r.m.data());
  r.has_major_symmetry = a.has_major_symmetry;
  return r;
}

// ---------------------------------------------------------------------------

double Spectral::coalescence_tol() const {
  return kEigenCoalesceRel * std::max(1.0, std::abs(eigenvalues[0]));
}

bool Spectral::coalesced(int k, int j) const {
  return std::abs(eigenvalues[static_cast<std::size_t>(k)] -
                  eigenvalues[static_cast<std::size_t>(j)]) < coalescence_tol();
}

SymTensor3 Spectral::reconstruct() const {
  SymTensor3 r;
  for (int k = 0; k < 3; ++k)
    r += eigenvalues[static_cast<std::size_t>(k)] * projections[static_cast<std::size_t>(k)];
  return r;
}

namespace {

// Cyclic Jacobi on the full 3x3; accurate for clustered eigenvalues.
void jacobi3(const SymTensor3& t, std::array<double, 3>& eval, Mat3& evec) {
  Mat3 a = t.full();
  evec = Mat3::identity();
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
    if (off == 0.0) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double scale = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + scale == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + scale == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        double tt = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) tt = -tt;
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double s = tt * c;
        const double tau = s / (1.0 + c);
        const double h = tt * apq;
        a(p, p) -= h;
        a(q, q) += h;
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < 3; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = evec(r, p), vrq = evec(r, q);
          evec(r, p) = vrp - s * (vrq + tau * vrp);
          evec(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  eval = {a(0, 0), a(1, 1), a(2, 2)};
}

Spectral decompose_impl(const SymTensor3& t) {
  std::array<double, 3> eval;
  Mat3 evec;
  jacobi3(t, eval, evec);

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return eval[static_cast<std::size_t>(i)] > eval[static_cast<std::size_t>(j)];
  });

  Spectral s;
  for (int k = 0; k < 3; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    s.eigenvalues[static_cast<std::size_t>(k)] = eval[static_cast<std::size_t>(src)];
    const Vec3 n{{evec(0, src), evec(1, src), evec(2, src)}};
    s.projections[static_cast<std::size_t>(k)] = SymTensor3::dyad(n);
  }

  const double tol = s.coalescence_tol();
  const bool c01 = s.eigenvalues[0] - s.eigenvalues[1] < tol;
  const bool c12 = s.eigenvalues[1] - s.eigenvalues[2] < tol;
  if (c01 && c12) {
    s.klass = EigenClass::triple;
  } else if (c01) {
    s.klass = EigenClass::paired;
    s.pair = {0, 1};
  } else if (c12) {
    s.klass = EigenClass::paired;
    s.pair = {1, 2};
  } else {
    s.klass = EigenClass::distinct;
  }
  return s;
}

}  // namespace

Spectral spectral_decompose_unchecked(const SymTensor3& t) { return decompose_impl(t); }

Spectral spectral_decompose(const SymTensor3& c) {
  Spectral s = decompose_impl(c);
  const double tol_pd = kPositiveDefiniteRel * std::max(1.0, c.trace());
  if (s.eigenvalues[2] <= tol_pd)
    throw Error(ErrorCode::not_positive_definite,
                "spectral_decompose: eigenvalue " + std::to_string(s.eigenvalues[2]) +
                    " below positive-definiteness tolerance");
  return s;
}

SymTensor3 sym_log(const SymTensor3& x, bool halve) {
  const Spectral s = spectral_decompose(x);
  const double f = halve ? 0.5 : 1.0;
  return s.apply([f](double l) { return f * std::log(l); });
}

SymTensor3 sym_exp(const SymTensor3& x) {
  const Spectral s = spectral_decompose_unchecked(x);
  return s.apply([](double l) { return std::exp(l); });
}

SymTensor3 sym_sqrt(const SymTensor3& x) {
  const Spectral s = spectral_decompose(x);
  return s.apply([](double l) { return std::sqrt(l); });
}

}  // namespace hencky
