// Symmetric second-order tensors in 3D, fourth-order tensors in 6x6 Voigt
// storage, and the spectral machinery (eigendecomposition, matrix log/exp).
//
// Voigt index order is {11,22,33,12,23,13}. Fourth-order tensors store plain
// tensor components; the shear doubling lives exclusively in strain-like
// 6-vectors, so printed tangent matrices carry shear moduli undoubled on the
// diagonal.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "hencky/errors.hpp"

namespace hencky {

inline constexpr double kEigenCoalesceRel = 1e-8;   // tol_eig scale
inline constexpr double kPositiveDefiniteRel = 1e-12;  // tol_pd scale

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  double dot(const Vec3& o) const { return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2]; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {{v[0] / n, v[1] / n, v[2] / n}};
  }
};

struct Mat3 {
  // row-major
  std::array<double, 9> m{};

  static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static Mat3 diag(double a, double b, double c) { return {{a, 0, 0, 0, b, 0, 0, 0, c}}; }

  double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }

  Mat3 transposed() const;
  double det() const;
  Mat3 inverse() const;  // throws non_invertible on a singular matrix
  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& x) const;
  Mat3 operator*(double s) const;
  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
};

struct SymTensor3 {
  // {11,22,33,12,23,13}
  std::array<double, 6> a{};

  static SymTensor3 identity() { return {{1, 1, 1, 0, 0, 0}}; }
  static SymTensor3 diag(double x, double y, double z) { return {{x, y, z, 0, 0, 0}}; }
  static SymTensor3 dyad(const Vec3& n);              // n (x) n
  static SymTensor3 sym(const Mat3& m);               // (m + m^T)/2
  static SymTensor3 from_full(const Mat3& m);         // assumes m symmetric

  double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
  double operator()(int i, int j) const;

  Mat3 full() const;

  double trace() const { return a[0] + a[1] + a[2]; }
  double dot(const SymTensor3& o) const {  // <S,T> = tr(S T)
    return a[0] * o.a[0] + a[1] * o.a[1] + a[2] * o.a[2] +
           2.0 * (a[3] * o.a[3] + a[4] * o.a[4] + a[5] * o.a[5]);
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double det() const;

  SymTensor3 operator+(const SymTensor3& o) const;
  SymTensor3 operator-(const SymTensor3& o) const;
  SymTensor3 operator*(double s) const;
  SymTensor3& operator+=(const SymTensor3& o);
  SymTensor3& operator*=(double s);
};

inline SymTensor3 operator*(double s, const SymTensor3& t) { return t * s; }

SymTensor3 deviator(const SymTensor3& t);

// Symmetric product sym(a b) of two symmetric tensors.
SymTensor3 sym_product(const SymTensor3& a, const SymTensor3& b);
Mat3 product(const SymTensor3& a, const SymTensor3& b);

// ---------------------------------------------------------------------------
// Voigt vectors

enum class VoigtKind { stress_like, strain_like };

std::array<double, 6> voigt_pack(const SymTensor3& t, VoigtKind kind);
SymTensor3 voigt_unpack(const std::array<double, 6>& v, VoigtKind kind);

// ---------------------------------------------------------------------------
// Fourth-order tensors (minor symmetries built into the 6x6 storage)

struct Tensor4V {
  std::array<double, 36> m{};
  bool has_major_symmetry = false;

  static Tensor4V zero() { return {}; }
  static Tensor4V identity_sym();   // I^sym, Voigt diag {1,1,1,1/2,1/2,1/2}
  static Tensor4V dev_projector();  // 1 box 1 - 1/3 1 (x) 1

  double& operator()(int i, int j) { return m[static_cast<std::size_t>(6 * i + j)]; }
  double operator()(int i, int j) const { return m[static_cast<std::size_t>(6 * i + j)]; }

  Tensor4V operator+(const Tensor4V& o) const;
  Tensor4V operator-(const Tensor4V& o) const;
  Tensor4V operator*(double s) const;
  Tensor4V& operator+=(const Tensor4V& o);
  Tensor4V& axpy(double alpha, const Tensor4V& x);  // *this += alpha x

  Tensor4V transposed_major() const;
  double norm() const;
  bool is_major_symmetric(double rel_tol = 1e-10) const;
};

// Symmetrized Kronecker box product: acting on a symmetric X gives sym(G X H^T).
Tensor4V kronecker_box(const SymTensor3& g, const SymTensor3& h);
// Same contraction behaviour for general (non-symmetric) factors.
Tensor4V kronecker_box_general(const Mat3& g, const Mat3& h);
// Dyadic product S (x) T.
Tensor4V dyad(const SymTensor3& s, const SymTensor3& t);

// A : X for fourth-order A and symmetric X.
SymTensor3 contract42(const Tensor4V& a, const SymTensor3& x);
// A : B for two fourth-order tensors.
Tensor4V contract44(const Tensor4V& a, const Tensor4V& b);

// Voigt matrix of X -> F X F^T for a general (non-symmetric) F, and the
// congruence c = B : A : B^T it induces on fourth-order tensors.
Tensor4V congruence_operator(const Mat3& f);
Tensor4V congruence_sandwich(const Tensor4V& op, const Tensor4V& a);

// ---------------------------------------------------------------------------
// Spectral decomposition

enum class EigenClass { distinct, paired, triple };

struct Spectral {
  std::array<double, 3> eigenvalues{};       // descending
  std::array<SymTensor3, 3> projections{};   // P_k = N^k (x) N^k
  EigenClass klass = EigenClass::distinct;
  std::array<int, 2> pair{-1, -1};           // coalesced indices when paired

  double coalescence_tol() const;  // tol_eig for this decomposition
  bool coalesced(int k, int j) const;
  SymTensor3 reconstruct() const;
  // Spectrally applied scalar function sum f(lambda_k) P_k.
  template <class F>
  SymTensor3 apply(F&& f) const {
    SymTensor3 r;
    for (int k = 0; k < 3; ++k) r += f(eigenvalues[static_cast<std::size_t>(k)]) * projections[static_cast<std::size_t>(k)];
    return r;
  }
};

// Eigendecomposition of a symmetric positive-definite tensor (cyclic Jacobi).
// Throws not_positive_definite when an eigenvalue falls below tol_pd.
Spectral spectral_decompose(const SymTensor3& c);

// Eigendecomposition without the positive-definiteness gate (any symmetric input).
Spectral spectral_decompose_unchecked(const SymTensor3& t);

// log of an SPD tensor; with halve set the input is interpreted as C and the
// result is log U = 1/2 log C.
SymTensor3 sym_log(const SymTensor3& x, bool halve = false);
SymTensor3 sym_exp(const SymTensor3& x);
SymTensor3 sym_sqrt(const SymTensor3& x);

}  // namespace hencky
