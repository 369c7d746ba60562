#include "hencky/kernels.hpp"

namespace hencky::kernels {
namespace {

void mul_scalar(const double* a, const double* b, double* c) {
  for (int i = 0; i < 6; ++i) {
    const double* ai = a + 6 * i;
    double* ci = c + 6 * i;
    for (int j = 0; j < 6; ++j) ci[j] = ai[0] * b[j];
    for (int k = 1; k < 6; ++k) {
      const double aik = ai[k];
      const double* bk = b + 6 * k;
      for (int j = 0; j < 6; ++j) ci[j] += aik * bk[j];
    }
  }
}

void mul_bt_scalar(const double* a, const double* b, double* c) {
  for (int i = 0; i < 6; ++i) {
    const double* ai = a + 6 * i;
    for (int j = 0; j < 6; ++j) {
      const double* bj = b + 6 * j;
      double s = 0.0;
      for (int k = 0; k < 6; ++k) s += ai[k] * bj[k];
      c[6 * i + j] = s;
    }
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mat66_vec_scalar(const double* a, const double* x, double* y) {
  for (int i = 0; i < 6; ++i) {
    const double* ai = a + 6 * i;
    double s = 0.0;
    for (int k = 0; k < 6; ++k) s += ai[k] * x[k];
    y[i] = s;
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{"scalar", &mul_scalar, &mul_bt_scalar, &axpy_scalar, &mat66_vec_scalar};
  return b;
}

}  // namespace hencky::kernels
