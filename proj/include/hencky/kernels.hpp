// Low-level dense kernels for the 6x6 Voigt algebra. Every entry point is a
// scalar reference implementation plus optional SIMD variants selected once at
// runtime from CPU features. All variants accumulate in the same order, so
// backends agree bit for bit and the equivalence tests assert exact equality.
#pragma once

#include <cstddef>
#include <string_view>

namespace hencky::kernels {

struct Backend {
  const char* name;
  // c = a * b, 6x6 row-major
  void (*mat66_mul)(const double* a, const double* b, double* c);
  // c = a * b^T
  void (*mat66_mul_bt)(const double* a, const double* b, double* c);
  // y += alpha * x, n doubles
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = a * x, 6x6 times 6-vector
  void (*mat66_vec)(const double* a, const double* x, double* y);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend* avx2_backend();  // nullptr when unsupported by the CPU
#endif

// Active backend; picked on first use, override wins (HENCKY_KERNELS=scalar|avx2).
const Backend& active();
// Force a specific backend by name; returns false if unknown/unavailable.
bool select(std::string_view name);

inline void mat66_mul(const double* a, const double* b, double* c) { active().mat66_mul(a, b, c); }
inline void mat66_mul_bt(const double* a, const double* b, double* c) { active().mat66_mul_bt(a, b, c); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
inline void mat66_vec(const double* a, const double* x, double* y) { active().mat66_vec(a, x, y); }

}  // namespace hencky::kernels
