#include "qmem/simd.hpp"

namespace qmem::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

std::pair<double, double> dot_pair(const double* u, const double* v, const double* r, std::size_t n) {
  double su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    su += u[i] * r[i];
    sv += v[i] * r[i];
  }
  return {su, sv};
}

}  // namespace qmem::simd::scalar
