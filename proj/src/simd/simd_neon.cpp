#include <arm_neon.h>

#include "qmem/simd.hpp"

namespace qmem::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, ab, vld1q_f64(c + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

std::pair<double, double> dot_pair(const double* u, const double* v, const double* r, std::size_t n) {
  float64x2_t au = vdupq_n_f64(0.0);
  float64x2_t av = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t rv = vld1q_f64(r + i);
    au = vfmaq_f64(au, vld1q_f64(u + i), rv);
    av = vfmaq_f64(av, vld1q_f64(v + i), rv);
  }
  double su = vaddvq_f64(au), sv = vaddvq_f64(av);
  for (; i < n; ++i) {
    su += u[i] * r[i];
    sv += v[i] * r[i];
  }
  return {su, sv};
}

}  // namespace qmem::simd::neon
