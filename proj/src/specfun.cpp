#include "qmem/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qmem/errors.hpp"

namespace qmem::specfun {

namespace {

void check_argument(double x, const char* fn) {
  if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": non-finite argument");
  if (x < 0.0) throw DomainError(std::string(fn) + ": negative argument");
}

// sum_k (sign)^k (x/2)^{2k} / (k! (k+order)!), without the (x/2)^order prefactor.
// Long double keeps the alternating series accurate up to the crossover.
long double reduced_series(int order, long double x, bool alternating) {
  const long double q = x * x / 4.0L;
  long double term = 1.0L;
  for (int m = 1; m <= order; ++m) term /= m;
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (k + order));
    if (alternating) term = -term;
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return sum;
}

// Hankel-type coefficient a_k(order) / x^k series terms; returns {P, Q}-style partial sums
// for the oscillatory case, or the monotone sum for the modified case.
struct AsymptoticSums {
  double even = 0.0;  // sum over even k with sign (-1)^{k/2}
  double odd = 0.0;   // sum over odd k with sign (-1)^{(k-1)/2}
  double plain = 0.0; // sum over k with sign (-1)^k
};

AsymptoticSums hankel_sums(int order, double x) {
  const double mu = 4.0 * order * order;
  AsymptoticSums s;
  double term = 1.0;  // a_0 / x^0
  double prev = INFINITY;
  s.even = 1.0;
  s.plain = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd_sq = (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= (mu - odd_sq) / (8.0 * k * x);
    const double mag = std::fabs(term);
    if (mag >= prev) break;  // asymptotic series started diverging
    prev = mag;
    if (k % 2 == 0)
      s.even += ((k / 2) % 2 == 0 ? term : -term);
    else
      s.odd += (((k - 1) / 2) % 2 == 0 ? term : -term);
    s.plain += (k % 2 == 0 ? term : -term);
    if (mag < 1e-18) break;
  }
  return s;
}

}  // namespace

namespace detail {

double j_series(int order, double x) {
  const long double lx = x;
  long double prefactor = 1.0L;
  for (int m = 0; m < order; ++m) prefactor *= lx / 2.0L;
  return static_cast<double>(prefactor * reduced_series(order, lx, true));
}

double j_asymptotic(int order, double x) {
  const AsymptoticSums s = hankel_sums(order, x);
  const double c = std::cos(x), sn = std::sin(x);
  const double r = std::numbers::sqrt2 / 2.0;
  double cos_chi, sin_chi;
  if (order == 0) {
    cos_chi = (c + sn) * r;  // cos(x - pi/4)
    sin_chi = (sn - c) * r;  // sin(x - pi/4)
  } else {
    cos_chi = (sn - c) * r;   // cos(x - 3pi/4)
    sin_chi = -(sn + c) * r;  // sin(x - 3pi/4)
  }
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (s.even * cos_chi - s.odd * sin_chi);
}

double ie_series(int order, double x) {
  const long double lx = x;
  long double prefactor = 1.0L;
  for (int m = 0; m < order; ++m) prefactor *= lx / 2.0L;
  return static_cast<double>(std::exp(-lx) * prefactor * reduced_series(order, lx, false));
}

double ie_asymptotic(int order, double x) {
  const AsymptoticSums s = hankel_sums(order, x);
  return s.plain / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace detail

double bessel_j0(double x) {
  check_argument(x, "bessel_j0");
  return x < kJCrossover ? detail::j_series(0, x) : detail::j_asymptotic(0, x);
}

double bessel_j1(double x) {
  check_argument(x, "bessel_j1");
  return x < kJCrossover ? detail::j_series(1, x) : detail::j_asymptotic(1, x);
}

double bessel_j1_over_x(double x) {
  check_argument(x, "bessel_j1_over_x");
  if (x < kJCrossover) return static_cast<double>(reduced_series(1, x, true) / 2.0L);
  return detail::j_asymptotic(1, x) / x;
}

double bessel_i0e(double x) {
  check_argument(x, "bessel_i0e");
  return x <= kICrossover ? detail::ie_series(0, x) : detail::ie_asymptotic(0, x);
}

double bessel_i1e(double x) {
  check_argument(x, "bessel_i1e");
  return x <= kICrossover ? detail::ie_series(1, x) : detail::ie_asymptotic(1, x);
}

double bessel_i1e_over_x(double x) {
  check_argument(x, "bessel_i1e_over_x");
  if (x <= kICrossover) {
    const long double lx = x;
    return static_cast<double>(std::exp(-lx) * reduced_series(1, lx, false) / 2.0L);
  }
  return detail::ie_asymptotic(1, x) / x;
}

}  // namespace qmem::specfun
