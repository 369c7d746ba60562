// AVX2 variants. Accumulation order matches the scalar kernels exactly
// (mul + add, k ascending, no FMA), so results are bitwise identical.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "hencky/kernels.hpp"

namespace hencky::kernels {
namespace {

inline void mul_rows(const double* a, const double* b, double* c) {
  for (int i = 0; i < 6; ++i) {
    const double* ai = a + 6 * i;
    __m256d lo = _mm256_mul_pd(_mm256_set1_pd(ai[0]), _mm256_loadu_pd(b));
    __m128d hi = _mm_mul_pd(_mm_set1_pd(ai[0]), _mm_loadu_pd(b + 4));
    for (int k = 1; k < 6; ++k) {
      const __m256d aik = _mm256_set1_pd(ai[k]);
      const double* bk = b + 6 * k;
      lo = _mm256_add_pd(lo, _mm256_mul_pd(aik, _mm256_loadu_pd(bk)));
      hi = _mm_add_pd(hi, _mm_mul_pd(_mm_set1_pd(ai[k]), _mm_loadu_pd(bk + 4)));
    }
    _mm256_storeu_pd(c + 6 * i, lo);
    _mm_storeu_pd(c + 6 * i + 4, hi);
  }
}

void mul_avx2(const double* a, const double* b, double* c) { mul_rows(a, b, c); }

void mul_bt_avx2(const double* a, const double* b, double* c) {
  double bt[36];
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) bt[6 * i + j] = b[6 * j + i];
  mul_rows(a, bt, c);
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void mat66_vec_avx2(const double* a, const double* x, double* y) {
  double at[36];
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) at[6 * i + j] = a[6 * j + i];
  __m256d lo = _mm256_mul_pd(_mm256_set1_pd(x[0]), _mm256_loadu_pd(at));
  __m128d hi = _mm_mul_pd(_mm_set1_pd(x[0]), _mm_loadu_pd(at + 4));
  for (int k = 1; k < 6; ++k) {
    const double* atk = at + 6 * k;
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_set1_pd(x[k]), _mm256_loadu_pd(atk)));
    hi = _mm_add_pd(hi, _mm_mul_pd(_mm_set1_pd(x[k]), _mm_loadu_pd(atk + 4)));
  }
  _mm256_storeu_pd(y, lo);
  _mm_storeu_pd(y + 4, hi);
}

}  // namespace

const Backend* avx2_backend() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Backend b{"avx2", &mul_avx2, &mul_bt_avx2, &axpy_avx2, &mat66_vec_avx2};
  return &b;
}

}  // namespace hencky::kernels

#endif
